#include "gsf/instance.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace gsf {

namespace {

[[noreturn]] void bad_input(const std::string& msg) { throw std::invalid_argument(msg); }

void expect_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) bad_input(where + ": expected an object");
    for (auto& [k, v] : j.items())
        if (!allowed.count(k)) bad_input(where + ": unknown field '" + k + "'");
}

Element parse_element_terms(const GradedSpace& space, const Json& terms, const std::string& where) {
    Element e(&space);
    if (!terms.is_array()) bad_input(where + ": terms must be an array");
    for (auto& t : terms) {
        if (!t.is_array() || t.size() != 3) bad_input(where + ": term must be [letters, gamma, coeff]");
        std::vector<int> letters;
        for (auto& l : t[0]) letters.push_back(space.id_of(l.get<std::string>()));
        int gamma = t[1].get<int>();
        if (gamma < 0) bad_input(where + ": negative gamma");
        e.accumulate(std::move(letters), gamma, rat_parse(t[2].get<std::string>()));
    }
    return e;
}

}  // namespace

unsigned long long fnv1a64(const std::string& bytes) {
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

InstanceFile InstanceFile::parse(const Json& j) {
    InstanceFile f;
    expect_keys(j, {"schema_version", "config", "spaces", "kernels", "presentations", "elements",
                    "campaigns"},
                "instance");
    if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
        bad_input("instance: schema_version must be 1");

    if (j.contains("config")) {
        const Json& c = j["config"];
        expect_keys(c, {"d", "window", "seed", "stable_graphs"}, "config");
        if (c.contains("d")) f.config.d = c["d"].get<int>();
        if (c.contains("seed")) f.config.seed = c["seed"].get<unsigned long long>();
        if (c.contains("stable_graphs")) f.config.stable_graphs = c["stable_graphs"].get<bool>();
        if (c.contains("window")) {
            expect_keys(c["window"], {"words", "gamma"}, "config.window");
            f.config.window.max_word_len = c["window"].value("words", 4);
            f.config.window.max_gamma = c["window"].value("gamma", 2);
        }
    }

    for (auto& s : j.value("spaces", Json::array())) {
        expect_keys(s, {"name", "letters"}, "space");
        std::vector<Letter> letters;
        for (auto& l : s["letters"]) {
            expect_keys(l, {"name", "degree"}, "letter");
            letters.push_back({l["name"].get<std::string>(), l["degree"].get<int>()});
        }
        f.spaces.emplace(s["name"].get<std::string>(),
                         make_space(std::move(letters), f.config.gamma_degree()));
    }

    auto find_space = [&](const std::string& name) -> SpacePtr {
        auto it = f.spaces.find(name);
        if (it == f.spaces.end()) bad_input("unresolved space reference '" + name + "'");
        return it->second;
    };

    for (auto& k : j.value("kernels", Json::array())) {
        expect_keys(k, {"name", "space", "entries"}, "kernel");
        SpacePtr sp = find_space(k["space"].get<std::string>());
        std::map<std::pair<int, int>, Rational> entries;
        for (auto& e : k["entries"]) {
            if (!e.is_array() || e.size() != 3) bad_input("kernel entry must be [a, b, value]");
            entries[{sp->id_of(e[0].get<std::string>()), sp->id_of(e[1].get<std::string>())}] =
                rat_parse(e[2].get<std::string>());
        }
        f.kernels.emplace(k["name"].get<std::string>(), ContractionKernel::build(sp, entries));
    }

    for (auto& p : j.value("presentations", Json::array())) {
        std::string type = p.value("type", "free_bv");
        std::string name = p["name"].get<std::string>();
        SpacePtr sp = find_space(p["space"].get<std::string>());
        auto parse_letter_table = [&](const Json& tbl, const std::string& where) {
            std::vector<Element> out(sp->dim(), Element::zero(*sp));
            for (auto& row : tbl) {
                if (!row.is_array() || row.size() != 2) bad_input(where + ": row must be [letter, terms]");
                out[sp->id_of(row[0].get<std::string>())] =
                    parse_element_terms(*sp, row[1], where);
            }
            return out;
        };
        if (type == "free_bv") {
            expect_keys(p, {"name", "type", "space", "d1", "b1", "omega"}, "presentation");
            FreeBVData data;
            data.sp = sp;
            if (p.contains("d1")) data.d1 = parse_letter_table(p["d1"], name + ".d1");
            if (p.contains("b1")) data.b1 = parse_letter_table(p["b1"], name + ".b1");
            for (auto& e : p.value("omega", Json::array())) {
                if (!e.is_array() || e.size() != 3) bad_input("omega entry must be [a, b, value]");
                data.omega[{sp->id_of(e[0].get<std::string>()),
                            sp->id_of(e[1].get<std::string>())}] =
                    rat_parse(e[2].get<std::string>());
            }
            f.presentations.emplace(name, free_closed_sector(data));
        } else if (type == "tables") {
            expect_keys(p, {"name", "type", "space", "d", "delta", "bracket"}, "presentation");
            BDPresentation pres;
            pres.sp = sp;
            if (p.contains("d")) pres.d_letter = parse_letter_table(p["d"], name + ".d");
            auto parse_pairs = [&](const Json& tbl, PairTable& out, const std::string& where) {
                for (auto& row : tbl) {
                    if (!row.is_array() || row.size() != 3)
                        bad_input(where + ": row must be [a, b, terms]");
                    out[{sp->id_of(row[0].get<std::string>()),
                         sp->id_of(row[1].get<std::string>())}] =
                        parse_element_terms(*sp, row[2], where);
                }
            };
            if (p.contains("delta")) parse_pairs(p["delta"], pres.delta_pairs, name + ".delta");
            if (p.contains("bracket"))
                parse_pairs(p["bracket"], pres.bracket_pairs, name + ".bracket");
            f.presentations.emplace(name, std::move(pres));
        } else {
            bad_input("presentation type must be free_bv or tables");
        }
    }

    for (auto& e : j.value("elements", Json::array())) {
        expect_keys(e, {"name", "space", "terms"}, "element");
        SpacePtr sp = find_space(e["space"].get<std::string>());
        f.elements.emplace(e["name"].get<std::string>(),
                           parse_element_terms(*sp, e["terms"], e["name"].get<std::string>()));
    }

    for (auto& c : j.value("campaigns", Json::array())) {
        if (!c.is_object() || !c.contains("type")) bad_input("campaign needs a type");
        f.campaigns.push_back(c);
    }
    return f;
}

InstanceFile InstanceFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad_input("cannot open instance file " + path);
    Json j = Json::parse(in, nullptr, true, false);
    return parse(j);
}

namespace gen {

SpacePtr random_space(Rng& rng, int dim, int d) {
    const int half = (6 - 2 * d) / 2;
    std::vector<Letter> letters;
    for (int i = 0; i < dim; ++i) {
        int delta = rng.uniform(-2, 2);
        letters.push_back({"x" + std::to_string(i), half + delta});
    }
    return make_space(std::move(letters), 6 - 2 * d);
}

ContractionKernel random_kernel(Rng& rng, SpacePtr sp) {
    const GradedSpace& s = *sp;
    const int support = s.gamma_degree();
    std::map<std::pair<int, int>, Rational> entries;
    for (int i = 0; i < s.dim(); ++i)
        for (int j = i; j < s.dim(); ++j) {
            if (s.degree(i) + s.degree(j) != support) continue;
            if (i == j && s.odd(i)) continue;
            if (rng.coin()) entries[{i, j}] = rng.small_rational();
        }
    return ContractionKernel::build(std::move(sp), entries);
}

Term random_term(Rng& rng, const GradedSpace& space, int max_len, int max_gamma) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        int len = rng.uniform(1, max_len);
        std::vector<int> letters;
        for (int k = 0; k < len; ++k) letters.push_back(rng.uniform(0, space.dim() - 1));
        auto [word, sign] = sym_canonicalize(std::move(letters), space);
        if (sign == 0) continue;  // picked an odd square
        return Term{word, max_gamma > 0 ? rng.uniform(0, max_gamma) : 0};
    }
    return Term{SymWord{{0}}, 0};
}

BDPresentation random_w_presentation(Rng& rng, int max_letters, int d) {
    const int support = (6 - 2 * d) - 1;  // 5-2d, odd
    int pairs = rng.uniform(1, std::max(1, max_letters / 2));
    std::vector<Letter> letters;
    for (int k = 0; k < pairs; ++k) {
        int t = support / 2 + rng.uniform(-1, 1);  // t + (support - t) = support
        letters.push_back({"w" + std::to_string(2 * k), t});
        letters.push_back({"w" + std::to_string(2 * k + 1), support - t});
    }
    FreeBVData data;
    data.sp = make_space(std::move(letters), 6 - 2 * d);
    const GradedSpace& s = *data.sp;
    for (int i = 0; i < s.dim(); ++i)
        for (int j = i; j < s.dim(); ++j) {
            if (s.degree(i) + s.degree(j) != support) continue;
            if (i == j) continue;  // support is odd, diagonals never qualify
            if (rng.coin()) data.omega[{i, j}] = rng.small_rational();
        }
    return free_closed_sector(data);
}

ChainInstance chain_instance(Rng& rng, int d) {
    // Letters a -> b and c -> e, with H(b,c) and H(a,e) chain-coherent, plus a
    // cycle pair z0, z1 paired freely.
    const int support = 6 - 2 * d;
    int t = support / 2 + rng.uniform(-1, 1);
    int sdeg = support - 1 - t;  // (t+1) + sdeg = support for the (b,c) pair
    std::vector<Letter> letters = {
        {"a", t},          {"b", t + 1}, {"c", sdeg},
        {"e", sdeg + 1},   {"z0", support / 2}, {"z1", support - support / 2},
    };
    FreeBVData data;
    data.sp = make_space(std::move(letters), support);
    const GradedSpace& s = *data.sp;
    data.d1.assign(s.dim(), Element::zero(s));
    data.d1[s.id_of("a")] = Element::single(s, Term{SymWord{{s.id_of("b")}}, 0});
    data.d1[s.id_of("c")] = Element::single(s, Term{SymWord{{s.id_of("e")}}, 0});
    BDPresentation closed = free_closed_sector(data);  // omega empty: zero bracket

    std::map<std::pair<int, int>, Rational> h;
    Rational lambda = rng.small_rational();
    h[{s.id_of("b"), s.id_of("c")}] = lambda;
    h[{s.id_of("a"), s.id_of("e")}] = (t % 2 + 2) % 2 ? lambda : Rational(-lambda);
    if (!(s.odd(s.id_of("z0")) && s.id_of("z0") == s.id_of("z1")))
        h[{s.id_of("z0"), s.id_of("z1")}] = rng.small_rational();
    return ChainInstance{std::move(closed), ContractionKernel::build(data.sp, h)};
}

}  // namespace gen

CampaignResult run_gt_campaign(int g_max, int n_max, int m_max, int k_max, int halves_max,
                               DefectMode mode) {
    CampaignResult res;
    res.type = "gt-bijection";
    Json rows = Json::array();
    for (int g = 0; g <= g_max; ++g)
        for (int n = 0; n <= n_max; ++n)
            for (int m = 2; m <= m_max; ++m)
                for (int k1 = 1; k1 <= k_max; ++k1)
                    for (int k2 = 1; k2 <= k_max; ++k2) {
                        // Total half-edges of the pre-split graphs.
                        int e_max = g + m - 2;
                        if (n + 2 * std::max(0, e_max) > halves_max) continue;
                        GtReport rep = verify_gt_bijection(g, n, k1, k2, m, mode);
                        std::ostringstream nm;
                        nm << "gt(g=" << g << ",n=" << n << ",k1=" << k1 << ",k2=" << k2
                           << ",m=" << m << ")";
                        std::string detail = "|A|=" + std::to_string(rep.size_a) +
                                             " |B|=" + std::to_string(rep.size_b) +
                                             " |C|=" + std::to_string(rep.size_c);
                        if (!rep.ok()) detail += " " + rep.counterexample;
                        res.checks.push_back({nm.str(), rep.ok(), detail});
                        res.pass = res.pass && rep.ok();
                        rows.push_back(Json{{"g", g},
                                            {"n", n},
                                            {"k1", k1},
                                            {"k2", k2},
                                            {"m", m},
                                            {"A", rep.size_a},
                                            {"B", rep.size_b},
                                            {"C", rep.size_c},
                                            {"ok", rep.ok()}});
                    }
    res.details["cells"] = rows;
    return res;
}

CampaignResult run_bvinf_campaign(unsigned long long seed, int count, int dim_max, int word_max,
                                  int m_max, int d, bool hand_instances, EvalGuard* guard) {
    CampaignResult res;
    res.type = "bvinf";
    Rng rng(seed);

    if (hand_instances) {
        // Zero kernel, m = 2: both sides reduce to x_i x_j.
        SpacePtr sp = gen::random_space(rng, 3, d);
        ContractionKernel zero = ContractionKernel::build(sp, {});
        std::vector<Term> inputs{gen::random_term(rng, *sp, 2, 1),
                                 gen::random_term(rng, *sp, 2, 1)};
        IdentityCheck c1 = verify_bvinf(inputs, 0, 1, zero, guard);
        Element expect(&*sp);
        {
            Element prod = mul_terms(*sp, inputs[0], inputs[1]);
            int sg = front_extract_sign(
                {term_parity(*sp, inputs[0]), term_parity(*sp, inputs[1])}, {0, 1});
            expect = sg > 0 ? prod : -prod;
        }
        res.checks.push_back({"bvinf_hand_zero_kernel", c1.pass && c1.lhs == expect,
                              c1.pass ? "" : c1.difference().str()});

        // Length-1 inputs against a nonzero pairing: self-loop vs gamma K2.
        SpacePtr sp2 = make_space({{"u", (6 - 2 * d) / 2}, {"v", (6 - 2 * d) - (6 - 2 * d) / 2}},
                                  6 - 2 * d);
        ContractionKernel k2 =
            ContractionKernel::build(sp2, {{{sp2->id_of("u"), sp2->id_of("v")}, rat(1)}});
        std::vector<Term> in2{Term{SymWord{{sp2->id_of("u")}}, 0},
                              Term{SymWord{{sp2->id_of("v")}}, 0}};
        IdentityCheck c2 = verify_bvinf(in2, 0, 1, k2, guard);
        res.checks.push_back({"bvinf_hand_selfloop", c2.pass, c2.pass ? "" : c2.difference().str()});
        res.pass = res.pass && c1.pass && c2.pass;
    }

    for (int k = 0; k < count; ++k) {
        SpacePtr sp = gen::random_space(rng, rng.uniform(2, dim_max), d);
        ContractionKernel kernel = gen::random_kernel(rng, sp);
        int m = rng.uniform(2, m_max);
        std::vector<Term> inputs;
        for (int v = 0; v < m; ++v) inputs.push_back(gen::random_term(rng, *sp, word_max, 1));
        int i = rng.uniform(0, m - 1), j = (i + rng.uniform(1, m - 1)) % m;
        IdentityCheck chk = verify_bvinf(inputs, i, j, kernel, guard);
        if (!chk.pass) {
            res.checks.push_back({"bvinf[" + std::to_string(k) + "]", false,
                                  "diff=" + chk.difference().str()});
            res.pass = false;
        }
    }
    res.checks.push_back({"bvinf_random_suite", res.pass, std::to_string(count) + " instances"});
    res.details["count"] = count;
    return res;
}

CampaignResult run_key_lemma_campaign(unsigned long long seed, int count, int d, int w_letters_max,
                                      EvalGuard* guard) {
    CampaignResult res;
    res.type = "key-lemma";
    Rng rng(seed);
    for (int k = 0; k < count; ++k) {
        SpacePtr sp = gen::random_space(rng, rng.uniform(2, 3), d);
        ContractionKernel kernel = gen::random_kernel(rng, sp);
        BDPresentation w = gen::random_w_presentation(rng, w_letters_max, d);
        int m = rng.uniform(2, 3);
        std::vector<Term> xs, ys;
        for (int v = 0; v < m; ++v) {
            xs.push_back(gen::random_term(rng, *sp, 2, 1));
            ys.push_back(gen::random_term(rng, w.space(), 2, 0));
        }
        IdentityCheck chk = verify_key_lemma(xs, ys, kernel, w, guard);
        if (!chk.pass) {
            res.checks.push_back({"key_lemma[" + std::to_string(k) + "]", false,
                                  "diff=" + chk.difference().str()});
            res.pass = false;
        }
    }
    res.checks.push_back({"key_lemma_suite", res.pass, std::to_string(count) + " instances"});
    res.details["count"] = count;
    return res;
}

namespace {

struct MutationSite {
    std::string where;
    BDPresentation corrupted;
};

std::vector<MutationSite> mutation_sites(const BDPresentation& p) {
    std::vector<MutationSite> sites;
    auto flip_term = [](Element e, const Term& t) {
        Rational c = e.terms().at(t);
        e.add_term(t, Rational(-2 * c));
        return e;
    };
    for (int i = 0; i < static_cast<int>(p.d_letter.size()); ++i)
        for (auto& [t, c] : p.d_letter[i].terms()) {
            BDPresentation q = p;
            q.d_letter[i] = flip_term(p.d_letter[i], t);
            sites.push_back({"d[" + p.space().letter(i).name + "]", std::move(q)});
        }
    for (auto& [ij, e] : p.bracket_pairs)
        for (auto& [t, c] : e.terms()) {
            BDPresentation q = p;
            q.bracket_pairs[ij] = flip_term(e, t);
            sites.push_back({"bracket[" + p.space().letter(ij.first).name + "," +
                                 p.space().letter(ij.second).name + "]",
                             std::move(q)});
        }
    for (auto& [ij, e] : p.delta_pairs)
        for (auto& [t, c] : e.terms()) {
            BDPresentation q = p;
            q.delta_pairs[ij] = flip_term(e, t);
            sites.push_back({"delta[" + p.space().letter(ij.first).name + "," +
                                 p.space().letter(ij.second).name + "]",
                             std::move(q)});
        }
    return sites;
}

// Free-BV instance whose differential is witnessed by the pairing, so every
// single-sign corruption of any table is detectable.
BDPresentation coherent_chain_presentation(Rng& rng, int d) {
    const int support = (6 - 2 * d) - 1;
    int t = support / 2 + rng.uniform(-1, 1);
    int sdeg = support - 1 - t;
    std::vector<Letter> letters = {{"p", t}, {"q", t + 1}, {"u", sdeg}, {"v", sdeg + 1}};
    FreeBVData data;
    data.sp = make_space(std::move(letters), 6 - 2 * d);
    const GradedSpace& s = *data.sp;
    data.d1.assign(s.dim(), Element::zero(s));
    data.d1[s.id_of("p")] = Element::single(s, Term{SymWord{{s.id_of("q")}}, 0});
    data.d1[s.id_of("u")] = Element::single(s, Term{SymWord{{s.id_of("v")}}, 0});
    Rational lambda = rng.small_rational();
    data.omega[{s.id_of("q"), s.id_of("u")}] = lambda;
    data.omega[{s.id_of("p"), s.id_of("v")}] = (t % 2 + 2) % 2 ? lambda : Rational(-lambda);
    return free_closed_sector(data);
}

}  // namespace

CampaignResult run_bd_axiom_campaign(unsigned long long seed, int count, int d,
                                     const TruncationWindow& window, bool mutations) {
    CampaignResult res;
    res.type = "bd-axioms";
    Rng rng(seed);
    int tensor_checked = 0;
    for (int k = 0; k < count; ++k) {
        BDPresentation p = rng.coin() ? gen::random_w_presentation(rng, 4, d)
                                      : coherent_chain_presentation(rng, d);
        BdReport rep = check_bd_axioms(p, window);
        if (!rep.ok()) {
            std::string why;
            for (auto& a : rep.axioms)
                if (!a.pass) why += a.axiom + ": " + a.counterexample + "; ";
            res.checks.push_back({"axioms[" + std::to_string(k) + "]", false, why});
            res.pass = false;
        }
        if (k % 8 == 0) {
            BDPresentation other = gen::random_w_presentation(rng, 4, d);
            BDPresentation t =
                tensor_bd(prefix_letters(p, "a."), prefix_letters(other, "b."));
            BdReport trep = check_bd_axioms(t, window);
            ++tensor_checked;
            if (!trep.ok()) {
                res.checks.push_back({"tensor_axioms[" + std::to_string(k) + "]", false, ""});
                res.pass = false;
            }
        }
    }
    res.checks.push_back({"bd_axiom_suite", res.pass,
                          std::to_string(count) + " presentations, " +
                              std::to_string(tensor_checked) + " tensor products"});

    if (mutations) {
        BDPresentation base = coherent_chain_presentation(rng, d);
        auto sites = mutation_sites(base);
        int detected = 0;
        std::string missed;
        for (auto& site : sites) {
            BdReport rep = check_bd_axioms(site.corrupted, window);
            if (!rep.ok())
                ++detected;
            else
                missed += site.where + " ";
        }
        bool ok = detected == static_cast<int>(sites.size()) && !sites.empty();
        res.checks.push_back({"mutation_coverage", ok,
                              std::to_string(detected) + "/" + std::to_string(sites.size()) +
                                  " corruptions detected" +
                                  (missed.empty() ? "" : "; missed: " + missed)});
        res.pass = res.pass && ok;
    }
    return res;
}

CampaignResult run_commutation_campaign(unsigned long long seed, int instances, int d,
                                        const TruncationWindow& window, int max_arity,
                                        bool certify, EvalGuard* guard) {
    CampaignResult res;
    res.type = "commutation";
    Rng rng(seed);

    if (!certify) {
        gen::ChainInstance inst = gen::chain_instance(rng, d);
        BDPresentation w = gen::random_w_presentation(rng, 2, d);
        CommutationReport rep =
            verify_commutation(inst.closed, inst.kernel, w, window, max_arity, guard, false);
        res.checks.push_back({"commutation_precondition", !rep.ok(),
                              "certificates absent: reported as failure"});
        res.pass = false;  // a campaign without certificates never passes
        return res;
    }

    // Trivial instance: zero kernel, zero bracket, d_c = d_{c,t}.
    {
        gen::ChainInstance inst = gen::chain_instance(rng, d);
        ContractionKernel zero = ContractionKernel::build(inst.kernel.sp, {});
        BDPresentation w = gen::random_w_presentation(rng, 2, d);
        CommutationReport rep =
            verify_commutation(inst.closed, zero, w, window, max_arity, guard);
        res.checks.push_back({"commutation_trivial", rep.ok(), ""});
        res.pass = res.pass && rep.ok();
    }

    for (int k = 0; k < instances; ++k) {
        gen::ChainInstance inst = gen::chain_instance(rng, d);
        BDPresentation w = gen::random_w_presentation(rng, 2, d);
        CommutationReport rep =
            verify_commutation(inst.closed, inst.kernel, w, window, max_arity, guard);

        // Key lemma on a few random inputs over the same data.
        bool key_ok = true;
        for (int t = 0; t < 4; ++t) {
            int m = rng.uniform(2, 3);
            std::vector<Term> xs, ys;
            for (int v = 0; v < m; ++v) {
                xs.push_back(gen::random_term(rng, inst.kernel.space(), 2, 1));
                ys.push_back(gen::random_term(rng, w.space(), 2, 0));
            }
            key_ok = key_ok && verify_key_lemma(xs, ys, inst.kernel, w, guard).pass;
        }

        bool kil_ok = rep.kil.ok();
        bool bd_ok = rep.w_axioms.ok();
        bool comm_ok = rep.relation.ok();
        std::string nm = "commutation[" + std::to_string(k) + "]";
        res.checks.push_back({nm, rep.ok(), ""});
        bool implication = !(bd_ok && kil_ok && key_ok) || comm_ok;
        res.checks.push_back({nm + "_implication", implication,
                              "BDr+KiL+key => commutation on certified instance"});
        res.pass = res.pass && rep.ok() && implication && key_ok;
    }

    // Mutated kernel: break the chain-map coherence; KiL must fail and the
    // relation must localize an arity.
    {
        gen::ChainInstance inst = gen::chain_instance(rng, d);
        BDPresentation w = gen::random_w_presentation(rng, 2, d);
        ContractionKernel broken = inst.kernel;
        auto it = broken.entries.begin();
        it->second = -it->second;
        auto mirror = broken.entries.find({it->first.second, it->first.first});
        if (mirror != broken.entries.end() && mirror != it) mirror->second = -mirror->second;
        CommutationReport rep =
            verify_commutation(inst.closed, broken, w, window, max_arity, guard);
        std::string arity;
        for (auto& c : rep.relation.checks)
            if (!c.pass) {
                arity = c.axiom;
                break;
            }
        bool ok = !rep.kil.ok() && !rep.relation.ok();
        res.checks.push_back(
            {"commutation_mutated_kernel", ok,
             ok ? "KiL certificate fails; relation fails at " + arity : "mutation undetected"});
        res.pass = res.pass && ok;
    }
    return res;
}

CampaignResult run_aut_oracle_campaign(unsigned long long seed, int count, int dim_max, int d,
                                       int halves_max, EvalGuard* guard) {
    CampaignResult res;
    res.type = "aut-oracle";
    Rng rng(seed);
    for (int k = 0; k < count; ++k) {
        SpacePtr sp = gen::random_space(rng, rng.uniform(2, dim_max), d);
        ContractionKernel kernel = gen::random_kernel(rng, sp);
        int m = rng.uniform(1, 3);
        std::vector<Term> inputs;
        int total = 0;
        for (int v = 0; v < m; ++v) {
            Term t = gen::random_term(rng, *sp, 2, 1);
            total += t.word.length();
            inputs.push_back(t);
        }
        if (total > halves_max || total == 0) continue;
        Element via_classes = taylor_K(inputs, kernel, guard);
        Element via_matchings = taylor_K_matching_oracle(inputs, kernel, guard);
        if (!(via_classes == via_matchings)) {
            res.checks.push_back({"aut_oracle[" + std::to_string(k) + "]", false,
                                  (via_classes - via_matchings).str()});
            res.pass = false;
        }
    }
    res.checks.push_back({"aut_oracle_suite", res.pass, std::to_string(count) + " profiles"});
    return res;
}

CampaignResult run_linfty_campaign(unsigned long long seed, int d,
                                   const TruncationWindow& window) {
    CampaignResult res;
    res.type = "linfty";
    Rng rng(seed);

    BDPresentation p = gen::random_w_presentation(rng, 4, d);
    Coderivation q = dgla_to_coderivation(induced_dgla(p));
    LinftyReport sq = square_zero_check(q, {2, 1}, 3);
    res.checks.push_back({"square_zero_free_bv", sq.ok(), ""});
    res.pass = res.pass && sq.ok();

    // Identity morphism between equal dglas.
    IdentityMorphism id(p.sp);
    LinftyReport idrep = check_morphism_relation(id, q, q, {2, 1}, 2);
    res.checks.push_back({"identity_morphism", idrep.ok(), ""});
    res.pass = res.pass && idrep.ok();

    // One-sided bracket corruption: zero differential, so arities 1 and 2
    // pass and the failure surfaces exactly at arity 3.
    BDPresentation broken = p;
    broken.d_letter.clear();
    broken.delta_pairs.clear();
    if (!broken.bracket_pairs.empty()) {
        auto it = broken.bracket_pairs.begin();
        for (; it != broken.bracket_pairs.end(); ++it)
            if (it->first.first != it->first.second) break;
        if (it != broken.bracket_pairs.end()) it->second = -it->second;
        Coderivation qb = dgla_to_coderivation(induced_dgla(broken));
        LinftyReport sqb = square_zero_check(qb, {2, 1}, 3);
        bool located = sqb.checks.size() == 3 && sqb.checks[0].pass && sqb.checks[1].pass &&
                       !sqb.checks[2].pass;
        res.checks.push_back({"corrupted_jacobi_located", located,
                              located ? sqb.checks[2].counterexample : "not localized at arity 3"});
        res.pass = res.pass && located;
    }
    return res;
}

CampaignResult run_enumerate_campaign(
    int g, int n, int m, const std::optional<std::vector<std::pair<int, int>>>& profile,
    bool stable) {
    CampaignResult res;
    res.type = "enumerate";
    EnumOptions opts;
    opts.stable_only = stable;
    std::vector<MarkedGraph> classes;
    try {
        classes = enumerate_graphs(g, n, m, profile, opts);
    } catch (const std::invalid_argument& e) {
        res.input_error = true;
        res.pass = false;
        res.checks.push_back({"enumerate", false, e.what()});
        return res;
    }
    Json arr = Json::array();
    for (auto& gr : classes) {
        Json row;
        row["canonical"] = canonical_form(gr);
        row["aut"] = aut_order(gr);
        Json verts = Json::array();
        for (int v = 0; v < gr.num_vertices(); ++v)
            verts.push_back(Json{{"defect", gr.defect[v]},
                                 {"valency", gr.valency(v)},
                                 {"leaves", gr.leaf_count(v)},
                                 {"halves", gr.halves[v]}});
        row["vertices"] = verts;
        Json edges = Json::array();
        for (auto& [a, b] : gr.edges) edges.push_back(Json::array({a, b}));
        row["edges"] = edges;
        arr.push_back(row);
    }
    res.details["classes"] = arr;
    res.details["count"] = classes.size();
    res.checks.push_back({"enumerate", true, std::to_string(classes.size()) + " classes"});
    return res;
}

CampaignResult run_eval_campaign(const InstanceFile& file, const Json& c) {
    CampaignResult res;
    res.type = "eval";
    expect_keys(c, {"id", "type", "op", "kernel", "w", "inputs"}, "eval campaign");
    std::string op = c.value("op", "K");
    auto kit = file.kernels.find(c.value("kernel", ""));
    if (kit == file.kernels.end()) {
        res.input_error = true;
        res.pass = false;
        res.checks.push_back({"eval", false, "unresolved kernel reference"});
        return res;
    }
    const ContractionKernel& kernel = kit->second;
    const GradedSpace& s = kernel.space();

    auto parse_term = [&](const Json& t, const GradedSpace& sp) {
        std::vector<int> letters;
        for (auto& l : t[0]) letters.push_back(sp.id_of(l.get<std::string>()));
        auto [word, sign] = sym_canonicalize(std::move(letters), sp);
        if (sign == 0) bad_input("eval: input word vanishes (odd square)");
        return Term{word, t[1].get<int>()};
    };

    try {
        Element out(&s);
        if (op == "K") {
            std::vector<Term> inputs;
            for (auto& t : c["inputs"]) {
                Term term = parse_term(t, s);
                if (term.word.length() > file.config.window.max_word_len)
                    bad_input("eval: input word exceeds the window");
                inputs.push_back(term);
            }
            out = taylor_K(inputs, kernel, nullptr);
            res.details["element"] = out.str();
        } else if (op == "oc-K") {
            auto wit = file.presentations.find(c.value("w", ""));
            if (wit == file.presentations.end()) bad_input("eval: unresolved W reference");
            const BDPresentation& w = wit->second;
            BDPresentation shell;
            shell.sp = kernel.sp;
            BDPresentation cP = prefix_letters(shell, "c.");
            BDPresentation wP = prefix_letters(w, "w.");
            BDPresentation tensor = tensor_bd(cP, wP);
            ContractionKernel kP = remap_kernel(kernel, cP.sp, "c.");
            std::vector<std::pair<Term, Term>> pairs;
            for (auto& t : c["inputs"]) {
                if (!t.is_array() || t.size() != 2) bad_input("eval: oc input must be [x, y]");
                Term x = parse_term(t[0], s);
                if (x.word.length() > file.config.window.max_word_len)
                    bad_input("eval: input word exceeds the window");
                Term xm{x.word, x.gamma};
                std::vector<int> ls;
                for (int id : xm.word.letters)
                    ls.push_back(cP.space().id_of("c." + s.letter(id).name));
                std::sort(ls.begin(), ls.end());
                Term y = parse_term(t[1], w.space());
                std::vector<int> lw;
                for (int id : y.word.letters)
                    lw.push_back(wP.space().id_of("w." + w.space().letter(id).name));
                std::sort(lw.begin(), lw.end());
                pairs.push_back({Term{SymWord{ls}, x.gamma}, Term{SymWord{lw}, y.gamma}});
            }
            out = oc_taylor(pairs, kP, wP, tensor, nullptr);
            res.details["element"] = out.str();
        } else {
            bad_input("eval: op must be K or oc-K");
        }
        res.checks.push_back({"eval", true, res.details["element"].get<std::string>()});
    } catch (const std::invalid_argument& e) {
        res.input_error = true;
        res.pass = false;
        res.checks.push_back({"eval", false, e.what()});
    }
    return res;
}

CampaignResult run_campaign(const InstanceFile& file, const Json& c, EvalGuard* guard) {
    std::string type = c["type"].get<std::string>();
    unsigned long long seed = c.value("seed", file.config.seed);
    const int d = file.config.d;
    CampaignResult res;
    if (type == "gt-bijection") {
        expect_keys(c, {"id", "type", "g_max", "n_max", "m_max", "k_max", "halves_max", "mode"},
                    "gt campaign");
        DefectMode mode =
            c.value("mode", "redistribute") == "fixed" ? DefectMode::Fixed : DefectMode::Redistribute;
        res = run_gt_campaign(c.value("g_max", 2), c.value("n_max", 4), c.value("m_max", 3),
                              c.value("k_max", 3), c.value("halves_max", 10), mode);
    } else if (type == "bvinf") {
        expect_keys(c, {"id", "type", "seed", "count", "dim_max", "word_max", "m_max", "hand"},
                    "bvinf campaign");
        res = run_bvinf_campaign(seed, c.value("count", 200), c.value("dim_max", 4),
                                 c.value("word_max", 3), c.value("m_max", 3), d,
                                 c.value("hand", true), guard);
    } else if (type == "key-lemma") {
        expect_keys(c, {"id", "type", "seed", "count", "w_letters_max"}, "key-lemma campaign");
        res = run_key_lemma_campaign(seed, c.value("count", 100), d, c.value("w_letters_max", 6),
                                     guard);
    } else if (type == "bd-axioms") {
        expect_keys(c, {"id", "type", "seed", "count", "mutations"}, "bd campaign");
        res = run_bd_axiom_campaign(seed, c.value("count", 50), d, file.config.window,
                                    c.value("mutations", true));
    } else if (type == "commutation") {
        expect_keys(c, {"id", "type", "seed", "instances", "max_arity", "certify", "window"},
                    "commutation campaign");
        TruncationWindow w = file.config.window;
        if (c.contains("window")) {
            w.max_word_len = c["window"].value("words", w.max_word_len);
            w.max_gamma = c["window"].value("gamma", w.max_gamma);
        }
        res = run_commutation_campaign(seed, c.value("instances", 2), d, w,
                                       c.value("max_arity", 3), c.value("certify", true), guard);
    } else if (type == "linfty") {
        expect_keys(c, {"id", "type", "seed"}, "linfty campaign");
        res = run_linfty_campaign(seed, d, file.config.window);
    } else if (type == "aut-oracle") {
        expect_keys(c, {"id", "type", "seed", "count", "dim_max", "halves_max"}, "aut campaign");
        res = run_aut_oracle_campaign(seed, c.value("count", 50), c.value("dim_max", 3), d,
                                      c.value("halves_max", 6), guard);
    } else if (type == "enumerate") {
        expect_keys(c, {"id", "type", "g", "n", "m", "profile"}, "enumerate campaign");
        std::optional<std::vector<std::pair<int, int>>> profile;
        if (c.contains("profile")) {
            std::vector<std::pair<int, int>> p;
            for (auto& row : c["profile"]) p.push_back({row[0].get<int>(), row[1].get<int>()});
            profile = p;
        }
        res = run_enumerate_campaign(c["g"].get<int>(), c["n"].get<int>(), c["m"].get<int>(),
                                     profile, file.config.stable_graphs);
    } else if (type == "eval") {
        res = run_eval_campaign(file, c);
    } else {
        res.pass = false;
        res.input_error = true;
        res.checks.push_back({"campaign", false, "unknown campaign type " + type});
    }
    res.id = c.value("id", type);
    res.type = type;
    return res;
}

Json element_to_json(const Element& e) {
    Json arr = Json::array();
    for (auto& [t, c] : e.terms()) {
        Json letters = Json::array();
        for (int id : t.word.letters) letters.push_back(e.space().letter(id).name);
        arr.push_back(Json::array({letters, t.gamma, rat_str(c)}));
    }
    return arr;
}

Element element_from_json(const GradedSpace& space, const Json& j) {
    return parse_element_terms(space, j, "element");
}

Json space_to_json(const GradedSpace& s, const std::string& name) {
    Json letters = Json::array();
    for (int i = 0; i < s.dim(); ++i)
        letters.push_back(Json{{"name", s.letter(i).name}, {"degree", s.degree(i)}});
    return Json{{"name", name}, {"letters", letters}};
}

Json kernel_to_json(const ContractionKernel& k, const std::string& name,
                    const std::string& space_name) {
    Json entries = Json::array();
    for (auto& [ij, val] : k.entries)
        entries.push_back(Json::array({k.space().letter(ij.first).name,
                                       k.space().letter(ij.second).name, rat_str(val)}));
    return Json{{"name", name}, {"space", space_name}, {"entries", entries}};
}

Json presentation_to_json(const BDPresentation& p, const std::string& name) {
    const GradedSpace& s = p.space();
    Json d = Json::array();
    for (int i = 0; i < static_cast<int>(p.d_letter.size()); ++i)
        if (!p.d_letter[i].is_zero())
            d.push_back(Json::array({s.letter(i).name, element_to_json(p.d_letter[i])}));
    auto pairs = [&](const PairTable& table) {
        Json out = Json::array();
        for (auto& [ij, e] : table)
            if (!e.is_zero())
                out.push_back(Json::array(
                    {s.letter(ij.first).name, s.letter(ij.second).name, element_to_json(e)}));
        return out;
    };
    return Json{{"name", name},           {"type", "tables"},
                {"space", "?"},           {"d", d},
                {"delta", pairs(p.delta_pairs)}, {"bracket", pairs(p.bracket_pairs)}};
}

Json taylor_to_json(const TableMorphism& f) {
    Json arr = Json::array();
    for (auto& [slots, value] : f.entries()) {
        Json key = Json::array();
        for (auto& t : slots) {
            Json letters = Json::array();
            for (int id : t.word.letters) letters.push_back(f.source().letter(id).name);
            key.push_back(Json::array({letters, t.gamma}));
        }
        arr.push_back(Json{{"arity", slots.size()},
                           {"inputs", key},
                           {"value", element_to_json(value)}});
    }
    return arr;
}

TableMorphism taylor_from_json(SpacePtr src, SpacePtr tgt, const Json& j) {
    TableMorphism f(src, tgt);
    for (auto& row : j) {
        expect_keys(row, {"arity", "inputs", "value"}, "taylor entry");
        std::vector<Term> slots;
        for (auto& t : row["inputs"]) {
            std::vector<int> letters;
            for (auto& l : t[0]) letters.push_back(src->id_of(l.get<std::string>()));
            auto [word, sign] = sym_canonicalize(std::move(letters), *src);
            if (sign == 0) bad_input("taylor entry: input word vanishes");
            slots.push_back(Term{word, t[1].get<int>()});
        }
        if (slots.size() != row["arity"].get<size_t>())
            bad_input("taylor entry: arity mismatch");
        f.set(std::move(slots), parse_element_terms(*tgt, row["value"], "taylor value"));
    }
    return f;
}

Json make_report(const InstanceFile& file, const std::string& input_dump,
                 const std::vector<CampaignResult>& results, bool include_timings,
                 double elapsed_ms) {
    Json rep;
    rep["tool"] = "gsf";
    rep["version"] = "0.1.0";
    std::ostringstream dig;
    dig << std::hex << fnv1a64(input_dump + "#" + std::to_string(file.config.seed) + "#0.1.0");
    rep["input_digest"] = "fnv1a:" + dig.str();
    rep["seed"] = file.config.seed;
    rep["window"] = Json{{"words", file.config.window.max_word_len},
                         {"gamma", file.config.window.max_gamma}};
    bool all = true;
    Json camps = Json::array();
    for (auto& r : results) {
        Json c;
        c["id"] = r.id;
        c["type"] = r.type;
        c["pass"] = r.pass;
        Json checks = Json::array();
        for (auto& chk : r.checks)
            checks.push_back(Json{{"name", chk.name},
                                  {"status", chk.pass ? "pass" : "fail"},
                                  {"detail", chk.detail}});
        c["checks"] = checks;
        if (!r.details.is_null()) c["details"] = r.details;
        camps.push_back(c);
        all = all && r.pass;
    }
    rep["campaigns"] = camps;
    rep["pass"] = all;
    if (include_timings)
        rep["timings_ms"] = elapsed_ms;
    else
        rep["timings_ms"] = nullptr;
    return rep;
}

}  // namespace gsf
