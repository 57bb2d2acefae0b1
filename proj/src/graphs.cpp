#include "gsf/graphs.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gsf {

int MarkedGraph::num_halves() const {
    int c = 0;
    for (auto& h : halves) c += static_cast<int>(h.size());
    return c;
}

int MarkedGraph::num_leaves() const { return num_halves() - 2 * num_edges(); }

int MarkedGraph::vertex_of(int half) const {
    for (int v = 0; v < num_vertices(); ++v)
        for (int h : halves[v])
            if (h == half) return v;
    throw std::out_of_range("vertex_of: unknown half-edge");
}

bool MarkedGraph::is_leaf(int half) const {
    for (auto& [a, b] : edges)
        if (a == half || b == half) return false;
    return true;
}

int MarkedGraph::leaf_count(int v) const {
    int c = 0;
    for (int h : halves[v])
        if (is_leaf(h)) ++c;
    return c;
}

bool MarkedGraph::connected() const {
    const int m = num_vertices();
    if (m <= 1) return true;
    std::vector<int> comp(m, -1);
    std::vector<int> stack{0};
    comp[0] = 0;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto& [a, b] : edges) {
            int u = vertex_of(a), w = vertex_of(b);
            int other = -1;
            if (u == v) other = w;
            else if (w == v) other = u;
            if (other >= 0 && comp[other] < 0) {
                comp[other] = 0;
                stack.push_back(other);
            }
        }
    }
    return std::all_of(comp.begin(), comp.end(), [](int c) { return c >= 0; });
}

int MarkedGraph::betti() const {
    if (!connected()) throw std::invalid_argument("betti: graph is disconnected");
    int d = std::accumulate(defect.begin(), defect.end(), 0);
    return d + num_edges() - num_vertices() + 1;
}

void MarkedGraph::validate() const {
    std::set<int> seen;
    for (auto& h : halves)
        for (int id : h)
            if (!seen.insert(id).second) throw std::invalid_argument("half-edge in two vertices");
    std::set<int> used;
    for (auto& [a, b] : edges) {
        if (!seen.count(a) || !seen.count(b)) throw std::invalid_argument("edge on unknown half");
        if (!used.insert(a).second || !used.insert(b).second)
            throw std::invalid_argument("half-edge on two edges");
    }
    for (int d : defect)
        if (d < 0) throw std::invalid_argument("negative loop defect");
}

namespace {

// Self-loop counts per vertex and multiplicities for u < v.
struct MultMatrix {
    std::vector<int> self_loops;
    std::map<std::pair<int, int>, int> mult;
};

MultMatrix mult_matrix(const MarkedGraph& g) {
    MultMatrix mm;
    mm.self_loops.assign(g.num_vertices(), 0);
    for (auto& [a, b] : g.edges) {
        int u = g.vertex_of(a), v = g.vertex_of(b);
        if (u == v) {
            ++mm.self_loops[u];
        } else {
            if (u > v) std::swap(u, v);
            ++mm.mult[{u, v}];
        }
    }
    return mm;
}

bool support_connected(int m, const std::map<std::pair<int, int>, int>& mult) {
    if (m <= 1) return true;
    std::vector<int> seen(m, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto& [uv, c] : mult) {
            if (c == 0) continue;
            int other = -1;
            if (uv.first == v) other = uv.second;
            else if (uv.second == v) other = uv.first;
            if (other >= 0 && !seen[other]) {
                seen[other] = 1;
                stack.push_back(other);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

// Deterministic concrete graph from matrix data: per vertex the slots are
// self-loop halves first, then cross-edge halves sorted by neighbour, then
// leaves.
MarkedGraph build_graph(const std::vector<int>& valencies, const std::vector<int>& defects,
                        const MultMatrix& mm) {
    const int m = static_cast<int>(valencies.size());
    MarkedGraph g;
    g.defect = defects;
    g.halves.assign(m, {});
    int next = 0;
    std::vector<std::vector<int>> cross_slots(m);  // half ids available for cross edges, per vertex
    for (int v = 0; v < m; ++v) {
        for (int s = 0; s < mm.self_loops[v]; ++s) {
            int a = next++, b = next++;
            g.halves[v].push_back(a);
            g.halves[v].push_back(b);
            g.edges.push_back({a, b});
        }
        int cross = 0;
        for (auto& [uv, c] : mm.mult)
            if (uv.first == v || uv.second == v) cross += c;
        for (int s = 0; s < cross; ++s) {
            int a = next++;
            g.halves[v].push_back(a);
            cross_slots[v].push_back(a);
        }
        int leaves = valencies[v] - 2 * mm.self_loops[v] - cross;
        for (int s = 0; s < leaves; ++s) g.halves[v].push_back(next++);
    }
    std::vector<int> cursor(m, 0);
    for (auto& [uv, c] : mm.mult)
        for (int k = 0; k < c; ++k) {
            int a = cross_slots[uv.first][cursor[uv.first]++];
            int b = cross_slots[uv.second][cursor[uv.second]++];
            g.edges.push_back({std::min(a, b), std::max(a, b)});
        }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

// All matrices with given valencies and total edge count, connected support.
void enumerate_matrices(const std::vector<int>& valencies, int e,
                        const std::function<void(const MultMatrix&)>& emit) {
    const int m = static_cast<int>(valencies.size());
    std::vector<std::pair<int, int>> offdiag;
    for (int u = 0; u < m; ++u)
        for (int v = u + 1; v < m; ++v) offdiag.push_back({u, v});

    MultMatrix mm;
    mm.self_loops.assign(m, 0);
    std::vector<int> used(m, 0);

    std::function<void(int, int)> rec_off = [&](size_t idx, int budget) {
        if (idx == offdiag.size()) {
            if (budget != 0) return;
            if (!support_connected(m, mm.mult)) return;
            emit(mm);
            return;
        }
        auto [u, v] = offdiag[idx];
        int cap = std::min({valencies[u] - used[u], valencies[v] - used[v], budget});
        for (int c = 0; c <= cap; ++c) {
            if (c) mm.mult[{u, v}] = c;
            used[u] += c;
            used[v] += c;
            rec_off(idx + 1, budget - c);
            used[u] -= c;
            used[v] -= c;
            if (c) mm.mult.erase({u, v});
        }
    };
    std::function<void(int, int)> rec_diag = [&](int v, int budget) {
        if (v == m) {
            rec_off(0, budget);
            return;
        }
        int cap = std::min((valencies[v] - used[v]) / 2, budget);
        for (int s = 0; s <= cap; ++s) {
            mm.self_loops[v] = s;
            used[v] += 2 * s;
            rec_diag(v + 1, budget - s);
            used[v] -= 2 * s;
            mm.self_loops[v] = 0;
        }
    };
    // Wrapper with the real signature.
    rec_diag(0, e);
}

void compositions(int total, int len, int lo, std::vector<int>& acc,
                  const std::function<void(const std::vector<int>&)>& emit) {
    if (len == 0) {
        if (total == 0) emit(acc);
        return;
    }
    for (int v = lo; v <= total; ++v) {
        acc.push_back(v);
        compositions(total - v, len - 1, lo, acc, emit);
        acc.pop_back();
    }
}

}  // namespace

std::string canonical_form(const MarkedGraph& g) {
    MultMatrix mm = mult_matrix(g);
    std::ostringstream os;
    os << "m" << g.num_vertices();
    for (int v = 0; v < g.num_vertices(); ++v)
        os << "|v" << g.defect[v] << "," << g.leaf_count(v) << "," << mm.self_loops[v];
    for (auto& [uv, c] : mm.mult) os << "|e" << uv.first << "-" << uv.second << ":" << c;
    return os.str();
}

unsigned long long aut_order(const MarkedGraph& g) {
    auto fact = [](int n) {
        unsigned long long f = 1;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    MultMatrix mm = mult_matrix(g);
    unsigned long long a = 1;
    for (int v = 0; v < g.num_vertices(); ++v) {
        a *= fact(g.leaf_count(v));
        a *= fact(mm.self_loops[v]) << mm.self_loops[v];  // s! * 2^s
    }
    for (auto& [uv, c] : mm.mult) a *= fact(c);
    return a;
}

std::vector<MarkedGraph> enumerate_by_profile(const std::vector<int>& valencies,
                                              const std::vector<int>& defects, int e) {
    std::vector<MarkedGraph> out;
    enumerate_matrices(valencies, e, [&](const MultMatrix& mm) {
        out.push_back(build_graph(valencies, defects, mm));
    });
    std::sort(out.begin(), out.end(), [](const MarkedGraph& a, const MarkedGraph& b) {
        return canonical_form(a) < canonical_form(b);
    });
    return out;
}

std::vector<MarkedGraph> enumerate_graphs(
    int g, int n, int m, const std::optional<std::vector<std::pair<int, int>>>& profile,
    const EnumOptions& opts) {
    if (g < 0 || n < 0 || m < 1) throw std::invalid_argument("enumerate_graphs: bad parameters");
    std::vector<MarkedGraph> out;

    auto stable_ok = [&](const MarkedGraph& gr) {
        if (!opts.stable_only) return true;
        for (int v = 0; v < gr.num_vertices(); ++v)
            if (2 * gr.defect[v] - 2 + gr.valency(v) <= 0) return false;
        return true;
    };

    if (profile) {
        if (static_cast<int>(profile->size()) != m)
            throw std::invalid_argument("infeasible profile: length != m");
        std::vector<int> valencies(m), defects(m);
        int sum_val = 0, sum_def = 0;
        for (int v = 0; v < m; ++v) {
            valencies[v] = (*profile)[v].first;
            defects[v] = (*profile)[v].second;
            if (valencies[v] < 0 || defects[v] < 0)
                throw std::invalid_argument("infeasible profile: negative entry");
            sum_val += valencies[v];
            sum_def += defects[v];
        }
        if ((sum_val - n) % 2 != 0 || sum_val < n)
            throw std::invalid_argument("infeasible profile: valency/leaf parity");
        int e = (sum_val - n) / 2;
        if (sum_def + e - m + 1 != g)
            throw std::invalid_argument("infeasible profile: betti mismatch");
        for (auto& gr : enumerate_by_profile(valencies, defects, e))
            if (stable_ok(gr)) out.push_back(gr);
        return out;
    }

    // Defect and valency vectors are enumerated lexicographically; each
    // multiplicity matrix is its own isomorphism class.
    for (int d = 0; d <= g; ++d) {
        int e = g - d + m - 1;
        if (e < 0) continue;
        int sum_val = n + 2 * e;
        std::vector<int> acc;
        compositions(d, m, 0, acc, [&](const std::vector<int>& defects) {
            std::vector<int> acc2;
            compositions(sum_val, m, m > 1 ? 1 : 0, acc2, [&](const std::vector<int>& valencies) {
                enumerate_matrices(valencies, e, [&](const MultMatrix& mm) {
                    MarkedGraph gr = build_graph(valencies, defects, mm);
                    if (gr.num_leaves() == n && stable_ok(gr)) out.push_back(gr);
                });
            });
        });
    }
    std::sort(out.begin(), out.end(), [](const MarkedGraph& a, const MarkedGraph& b) {
        return canonical_form(a) < canonical_form(b);
    });
    return out;
}

namespace {

// Component of vertex 0 of `g` restricted to `members`, marks compressed
// order-preservingly. Half ids are kept.
MarkedGraph induced(const MarkedGraph& g, const std::vector<int>& members) {
    MarkedGraph sub;
    std::set<int> mem(members.begin(), members.end());
    std::set<int> half_set;
    for (int v : members) {
        sub.defect.push_back(g.defect[v]);
        sub.halves.push_back(g.halves[v]);
        for (int h : g.halves[v]) half_set.insert(h);
    }
    for (auto& [a, b] : g.edges)
        if (half_set.count(a)) sub.edges.push_back({a, b});
    std::sort(sub.edges.begin(), sub.edges.end());
    return sub;
}

std::vector<int> component_of(const MarkedGraph& g, int start) {
    std::vector<int> comp{start};
    std::set<int> seen{start};
    std::vector<int> stack{start};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto& [a, b] : g.edges) {
            int u = g.vertex_of(a), w = g.vertex_of(b);
            for (int other : {u == v ? w : -1, w == v ? u : -1})
                if (other >= 0 && !seen.count(other)) {
                    seen.insert(other);
                    comp.push_back(other);
                    stack.push_back(other);
                }
        }
    }
    std::sort(comp.begin(), comp.end());
    return comp;
}

}  // namespace

SplitResult split_vertex(const MarkedGraph& g, const std::vector<int>& I,
                         const std::vector<int>& J, int defect_i, int defect_j) {
    if (I.empty() || J.empty()) throw std::invalid_argument("split_vertex: empty part");
    std::set<int> h1(g.halves.at(0).begin(), g.halves.at(0).end());
    std::set<int> iset(I.begin(), I.end()), jset(J.begin(), J.end());
    if (iset.size() + jset.size() != h1.size() || iset.size() != I.size())
        throw std::invalid_argument("split_vertex: I,J must partition h_1");
    for (int h : I)
        if (!h1.count(h) || jset.count(h))
            throw std::invalid_argument("split_vertex: I,J must partition h_1");
    for (int h : J)
        if (!h1.count(h)) throw std::invalid_argument("split_vertex: I,J must partition h_1");

    if (defect_i < 0) defect_i = g.defect[0];
    if (defect_j < 0) defect_j = 0;

    const int m = g.num_vertices();
    SplitResult res;
    res.whole.defect = g.defect;
    res.whole.defect[0] = defect_i;
    res.whole.defect.push_back(defect_j);
    res.whole.halves = g.halves;
    res.whole.halves[0].clear();
    for (int h : g.halves[0])
        if (iset.count(h)) res.whole.halves[0].push_back(h);
    res.whole.halves.push_back({});
    for (int h : g.halves[0])
        if (jset.count(h)) res.whole.halves.back().push_back(h);
    res.whole.edges = g.edges;

    res.connected = res.whole.connected();
    if (res.connected) {
        res.graph = res.whole;
        return res;
    }
    std::vector<int> ci = component_of(res.whole, 0);
    std::vector<int> all(m + 1);
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> cj;
    std::set_difference(all.begin(), all.end(), ci.begin(), ci.end(), std::back_inserter(cj));
    res.comp_i = induced(res.whole, ci);
    res.comp_j = induced(res.whole, cj);
    for (int v : ci) res.marks_i.push_back(v + 1);
    for (int v : cj) res.marks_j.push_back(v + 1);
    return res;
}

std::vector<PartitionClass> partitions_mod_equiv(const MarkedGraph& g, int k1, int k2) {
    const auto& h1 = g.halves.at(0);
    if (k1 < 1 || k2 < 1 || k1 + k2 != static_cast<int>(h1.size()))
        throw std::invalid_argument("partitions_mod_equiv: k1+k2 != |h_1|");
    std::vector<PartitionClass> out;
    std::set<std::string> seen;
    const int n = static_cast<int>(h1.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    // All k1-subsets in lexicographic order.
    std::vector<int> choose(k1);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k1) {
            std::vector<int> I, J;
            std::set<int> inI(choose.begin(), choose.end());
            for (int i = 0; i < n; ++i) (inI.count(i) ? I : J).push_back(h1[i]);
            SplitResult s = split_vertex(g, I, J);
            std::string key = canonical_form(s.whole);
            if (seen.insert(key).second) out.push_back({I, J, key});
            return;
        }
        for (int i = start; i <= n - (k1 - depth); ++i) {
            choose[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return out;
}

PsiImage psi(const MarkedGraph& g, const std::vector<int>& I, const std::vector<int>& J,
             int defect_i, int defect_j) {
    SplitResult s = split_vertex(g, I, J, defect_i, defect_j);
    if (s.connected) return BElement{s.graph};
    CElement c;
    c.g1 = s.comp_i;
    c.g2 = s.comp_j;
    c.L1 = s.marks_i;
    c.L2 = s.marks_j;
    return c;
}

namespace {

AElement merge_first_last(const MarkedGraph& g) {
    const int m = g.num_vertices();
    if (m < 2) throw std::invalid_argument("psi_inv: need at least two vertices");
    AElement a;
    a.I = g.halves[0];
    a.J = g.halves[m - 1];
    a.defect_i = g.defect[0];
    a.defect_j = g.defect[m - 1];
    a.graph.defect.push_back(g.defect[0] + g.defect[m - 1]);
    a.graph.halves.push_back(g.halves[0]);
    for (int h : g.halves[m - 1]) a.graph.halves[0].push_back(h);
    for (int v = 1; v < m - 1; ++v) {
        a.graph.defect.push_back(g.defect[v]);
        a.graph.halves.push_back(g.halves[v]);
    }
    a.graph.edges = g.edges;
    return a;
}

}  // namespace

AElement psi_inv(const PsiImage& image) {
    if (std::holds_alternative<BElement>(image))
        return merge_first_last(std::get<BElement>(image).graph);

    const CElement& c = std::get<CElement>(image);
    const int m = static_cast<int>(c.L1.size() + c.L2.size());
    if (c.L1.empty() || c.L2.empty() || c.L1.front() != 1 || c.L2.back() != m)
        throw std::invalid_argument("psi_inv: label partition must have 1 in L1 and m in L2");

    // Reassemble the disconnected m-vertex graph with marks L1 resp. L2 (both
    // ascending), shifting g2's half ids past g1's.
    int shift = 0;
    for (auto& h : c.g1.halves)
        for (int id : h) shift = std::max(shift, id + 1);
    MarkedGraph whole;
    whole.defect.assign(m, 0);
    whole.halves.assign(m, {});
    for (size_t i = 0; i < c.L1.size(); ++i) {
        whole.defect[c.L1[i] - 1] = c.g1.defect.at(i);
        whole.halves[c.L1[i] - 1] = c.g1.halves.at(i);
    }
    for (size_t i = 0; i < c.L2.size(); ++i) {
        whole.defect[c.L2[i] - 1] = c.g2.defect.at(i);
        for (int h : c.g2.halves.at(i)) whole.halves[c.L2[i] - 1].push_back(h + shift);
    }
    whole.edges = c.g1.edges;
    for (auto& [x, y] : c.g2.edges) whole.edges.push_back({x + shift, y + shift});
    std::sort(whole.edges.begin(), whole.edges.end());
    return merge_first_last(whole);
}

MarkedGraph relabel_swap(const MarkedGraph& g, int a, int b) {
    if (a < 0 || b < 0 || a >= g.num_vertices() || b >= g.num_vertices())
        throw std::out_of_range("relabel_swap: vertex index out of range");
    MarkedGraph out = g;
    std::swap(out.defect[a], out.defect[b]);
    std::swap(out.halves[a], out.halves[b]);
    return out;
}

GtReport verify_gt_bijection(int g, int n, int k1, int k2, int m, DefectMode mode) {
    GtReport rep;
    rep.g = g;
    rep.n = n;
    rep.k1 = k1;
    rep.k2 = k2;
    rep.m = m;

    // A: classes in Gamma(g,n)_{m-1} with |h_1| = k1+k2, one element per
    // (partition class, defect split). The key is the canonical form of the
    // split graph, which also indexes B and C elements.
    std::map<std::string, AElement> aset;
    if (m >= 2) {
        for (const MarkedGraph& gr : enumerate_graphs(g, n, m - 1)) {
            if (gr.valency(0) != k1 + k2) continue;
            for (const PartitionClass& pc : partitions_mod_equiv(gr, k1, k2)) {
                int dmax = mode == DefectMode::Redistribute ? gr.defect[0] : 0;
                for (int dj = 0; dj <= dmax; ++dj) {
                    int di = gr.defect[0] - dj;
                    SplitResult s = split_vertex(gr, pc.I, pc.J, di, dj);
                    aset.emplace(canonical_form(s.whole),
                                 AElement{gr, pc.I, pc.J, di, dj});
                }
            }
        }
    }

    // B: connected split results, betti g-1 (a connected split keeps edges and
    // defects but gains a vertex).
    std::map<std::string, BElement> bset;
    if (g >= 1) {
        for (const MarkedGraph& gr : enumerate_graphs(g - 1, n, m)) {
            if (gr.valency(0) != k1 || gr.valency(m - 1) != k2) continue;
            if (mode == DefectMode::Fixed && gr.defect[m - 1] != 0) continue;
            bset.emplace(canonical_form(gr), BElement{gr});
        }
    }

    // C: pairs of components with a label partition; keys are canonical forms
    // of the reassembled disconnected graph.
    std::map<std::string, CElement> cset;
    for (int m1 = 1; m1 <= m - 1; ++m1) {
        int m2 = m - m1;
        for (int g1 = 0; g1 <= g; ++g1)
            for (int n1 = 0; n1 <= n; ++n1) {
                auto lhs = enumerate_graphs(g1, n1, m1);
                std::vector<MarkedGraph> g1s;
                for (auto& x : lhs)
                    if (x.valency(0) == k1) g1s.push_back(x);
                if (g1s.empty()) continue;
                std::vector<MarkedGraph> g2s;
                for (auto& x : enumerate_graphs(g - g1, n - n1, m2))
                    if (x.valency(m2 - 1) == k2 &&
                        (mode != DefectMode::Fixed || x.defect[m2 - 1] == 0))
                        g2s.push_back(x);
                if (g2s.empty()) continue;
                // Label partitions: 1 in L1, m in L2, |L1| = m1.
                std::vector<int> rest;
                for (int v = 2; v <= m - 1; ++v) rest.push_back(v);
                std::vector<std::vector<int>> l1s;
                const int need = m1 - 1;
                std::vector<int> pick;
                std::function<void(size_t)> rec = [&](size_t start) {
                    if (static_cast<int>(pick.size()) == need) {
                        std::vector<int> l1{1};
                        l1.insert(l1.end(), pick.begin(), pick.end());
                        l1s.push_back(l1);
                        return;
                    }
                    for (size_t i = start; i < rest.size(); ++i) {
                        pick.push_back(rest[i]);
                        rec(i + 1);
                        pick.pop_back();
                    }
                };
                rec(0);
                for (auto& ga : g1s)
                    for (auto& gb : g2s)
                        for (auto& l1 : l1s) {
                            CElement c;
                            c.g1 = ga;
                            c.g2 = gb;
                            c.L1 = l1;
                            std::set<int> in1(l1.begin(), l1.end());
                            for (int v = 1; v <= m; ++v)
                                if (!in1.count(v)) c.L2.push_back(v);
                            // Key: canonical form of the reassembled graph.
                            AElement back = psi_inv(c);
                            SplitResult s = split_vertex(back.graph, back.I, back.J,
                                                         back.defect_i, back.defect_j);
                            cset.emplace(canonical_form(s.whole), c);
                        }
            }
    }

    rep.size_a = aset.size();
    rep.size_b = bset.size();
    rep.size_c = cset.size();
    rep.counts_match = aset.size() == bset.size() + cset.size();

    std::set<std::string> akeys, bckeys;
    for (auto& [k, v] : aset) akeys.insert(k);
    for (auto& [k, v] : bset) bckeys.insert(k);
    for (auto& [k, v] : cset) {
        if (!bckeys.insert(k).second) {
            rep.keys_match = false;
            rep.counterexample = "B/C key collision: " + k;
            return rep;
        }
    }
    rep.keys_match = akeys == bckeys;
    if (!rep.keys_match) {
        for (auto& k : akeys)
            if (!bckeys.count(k)) {
                rep.counterexample = "A key missing on B|C side: " + k;
                break;
            }
        for (auto& k : bckeys)
            if (!akeys.count(k) && rep.counterexample.empty()) {
                rep.counterexample = "B|C key missing on A side: " + k;
                break;
            }
    }

    // Round trips in both directions; split keys decide equality.
    rep.roundtrips_ok = true;
    for (auto& [key, a] : aset) {
        PsiImage im = psi(a.graph, a.I, a.J, a.defect_i, a.defect_j);
        AElement back = psi_inv(im);
        SplitResult s = split_vertex(back.graph, back.I, back.J, back.defect_i, back.defect_j);
        if (canonical_form(s.whole) != key || canonical_form(back.graph) != canonical_form(a.graph)) {
            rep.roundtrips_ok = false;
            rep.counterexample = "psi_inv(psi(.)) mismatch at " + key;
            return rep;
        }
    }
    for (auto& [key, b] : bset) {
        AElement back = psi_inv(PsiImage{b});
        PsiImage im = psi(back.graph, back.I, back.J, back.defect_i, back.defect_j);
        if (!std::holds_alternative<BElement>(im) ||
            canonical_form(std::get<BElement>(im).graph) != canonical_form(b.graph)) {
            rep.roundtrips_ok = false;
            rep.counterexample = "psi(psi_inv(.)) mismatch at B " + key;
            return rep;
        }
    }
    for (auto& [key, c] : cset) {
        AElement back = psi_inv(PsiImage{c});
        PsiImage im = psi(back.graph, back.I, back.J, back.defect_i, back.defect_j);
        if (!std::holds_alternative<CElement>(im)) {
            rep.roundtrips_ok = false;
            rep.counterexample = "psi(psi_inv(.)) not disconnected at C " + key;
            return rep;
        }
        const CElement& c2 = std::get<CElement>(im);
        if (canonical_form(c2.g1) != canonical_form(c.g1) ||
            canonical_form(c2.g2) != canonical_form(c.g2) || c2.L1 != c.L1 || c2.L2 != c.L2) {
            rep.roundtrips_ok = false;
            rep.counterexample = "psi(psi_inv(.)) mismatch at C " + key;
            return rep;
        }
    }
    return rep;
}

}  // namespace gsf
