#include "gsf/linfty.hpp"

#include <algorithm>
#include <sstream>

namespace gsf {

DglaView induced_dgla(const BDPresentation& p) { return DglaView{&p}; }

Element DglaView::lie_bracket(const Term& x, const Term& y) const {
    Element b = pres->bracket_terms(x, y);
    return term_parity(pres->space(), x) ? -b : b;
}

Coderivation dgla_to_coderivation(const DglaView& g) { return Coderivation{g}; }

Element Coderivation::q1(const Term& t) const {
    return view.pres->d(Element::single(view.pres->space(), t));
}

Element Coderivation::q2(const Term& a, const Term& b) const {
    // (-1)^{|a|} against the decalage sign in lie_bracket: the net effect is
    // the plain BD bracket.
    Element lb = view.lie_bracket(a, b);
    return term_parity(view.pres->space(), a) ? -lb : lb;
}

Element Coderivation::q2(const Element& a, const Element& b) const {
    Element out(&view.pres->space());
    for (auto& [u, cu] : a.terms())
        for (auto& [v, cv] : b.terms()) out += q2(u, v).scaled(Rational(cu * cv));
    return out;
}

std::vector<Term> basis_terms(const GradedSpace& space, int max_word_len, int max_gamma) {
    std::vector<Term> out;
    for (const SymWord& w : all_words(space, 0, max_word_len))
        for (int g = 0; g <= max_gamma; ++g) out.push_back(Term{w, g});
    std::sort(out.begin(), out.end());
    return out;
}

void for_each_input_tuple(const GradedSpace& space, const std::vector<Term>& basis, int arity,
                          const std::function<void(const std::vector<Term>&)>& fn) {
    std::vector<Term> acc;
    std::function<void(size_t)> rec = [&](size_t start) {
        if (static_cast<int>(acc.size()) == arity) {
            fn(acc);
            return;
        }
        for (size_t i = start; i < basis.size(); ++i) {
            if (!acc.empty() && acc.back() == basis[i] && term_parity(space, basis[i])) continue;
            acc.push_back(basis[i]);
            rec(i);
            acc.pop_back();
        }
    };
    rec(0);
}

namespace {

std::vector<int> parities(const GradedSpace& s, const std::vector<Term>& ts) {
    std::vector<int> p(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) p[i] = term_parity(s, ts[i]);
    return p;
}

std::vector<Term> select(const std::vector<Term>& ts, const std::vector<int>& idx) {
    std::vector<Term> out;
    for (int i : idx) out.push_back(ts[i]);
    return out;
}

std::string tuple_str(const GradedSpace& s, const std::vector<Term>& ts) {
    std::ostringstream os;
    for (size_t i = 0; i < ts.size(); ++i) {
        if (i) os << " (x) ";
        os << Element::single(s, ts[i]).str();
    }
    return os.str();
}

}  // namespace

LinftyReport square_zero_check(const Coderivation& q, const TruncationWindow& window,
                               int max_arity) {
    LinftyReport rep;
    const GradedSpace& s = q.view.pres->space();
    auto basis = basis_terms(s, window.max_word_len, window.max_gamma);

    for (int n = 1; n <= max_arity; ++n) {
        AxiomResult res{"square_zero_arity_" + std::to_string(n), true, ""};
        for_each_input_tuple(s, basis, n, [&](const std::vector<Term>& xs) {
            if (!res.pass) return;
            auto par = parities(s, xs);
            Element acc(&s);
            // I of size 1 or 2 with |J| <= 1, else Q vanishes.
            std::vector<int> all(n);
            for (int i = 0; i < n; ++i) all[i] = i;
            for (int i = 0; i < n; ++i) {
                std::vector<int> I{i}, J;
                for (int k = 0; k < n; ++k)
                    if (k != i) J.push_back(k);
                if (J.size() > 1) continue;
                int sg = shuffle_sign(par, I, J);
                Element inner = q.q1(xs[i]);
                Element term = J.empty() ? q.view.pres->d(inner) : q.q2(inner, Element::single(s, xs[J[0]]));
                acc += sg > 0 ? term : -term;
            }
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    std::vector<int> I{i, j}, J;
                    for (int k = 0; k < n; ++k)
                        if (k != i && k != j) J.push_back(k);
                    if (J.size() > 1) continue;
                    int sg = shuffle_sign(par, I, J);
                    Element inner = q.q2(xs[i], xs[j]);
                    Element term =
                        J.empty() ? q.view.pres->d(inner) : q.q2(inner, Element::single(s, xs[J[0]]));
                    acc += sg > 0 ? term : -term;
                }
            if (!acc.is_zero()) {
                res.pass = false;
                res.counterexample = tuple_str(s, xs) + " -> " + acc.str();
            }
        });
        rep.checks.push_back(res);
    }
    return rep;
}

Element TaylorMorphism::apply_front(const Element& front, const std::vector<Term>& rest) const {
    Element out(&target());
    for (auto& [t, c] : front.terms()) {
        std::vector<Term> slots{t};
        slots.insert(slots.end(), rest.begin(), rest.end());
        out += apply(slots).scaled(c);
    }
    return out;
}

Element IdentityMorphism::apply(const std::vector<Term>& slots) const {
    if (slots.size() != 1) return Element::zero(*sp_);
    return Element::single(*sp_, slots[0]);
}

void TableMorphism::set(std::vector<Term> slots, Element value) {
    std::sort(slots.begin(), slots.end());
    table_[std::move(slots)] = std::move(value);
}

Element TableMorphism::apply(const std::vector<Term>& slots) const {
    // Look up the sorted tuple; the sort contributes the Koszul sign.
    std::vector<Term> key = slots;
    std::vector<int> perm(slots.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::sort(perm.begin(), perm.end(), [&](int a, int b) { return slots[a] < slots[b]; });
    for (size_t i = 0; i < perm.size(); ++i) key[i] = slots[perm[i]];
    std::vector<int> degs(slots.size());
    for (size_t i = 0; i < slots.size(); ++i) degs[i] = term_parity(*src_, slots[i]);
    int sign = koszul_sign(perm, degs);
    for (size_t i = 1; i < key.size(); ++i)
        if (key[i] == key[i - 1] && term_parity(*src_, key[i])) return Element::zero(*tgt_);
    auto it = table_.find(key);
    if (it == table_.end()) return Element::zero(*tgt_);
    return sign > 0 ? it->second : -it->second;
}

CoalgElement sym_product(const GradedSpace& space, const std::vector<Element>& factors) {
    CoalgElement acc;
    acc[{}] = Rational(1);
    for (const Element& f : factors) {
        CoalgElement next;
        for (auto& [key, c] : acc) {
            for (auto& [t, ct] : f.terms()) {
                // Insert t into the sorted key with the Koszul sign of moving
                // it past the larger entries.
                CoalgKey k2 = key;
                auto pos = std::upper_bound(k2.begin(), k2.end(), t);
                int jumped = 0;
                for (auto it = pos; it != k2.end(); ++it) jumped += term_parity(space, *it);
                int sign = (term_parity(space, t) && (jumped % 2)) ? -1 : 1;
                // Repeated odd terms square to zero.
                bool dup_odd = false;
                if (pos != k2.begin() && *(pos - 1) == t && term_parity(space, t)) dup_odd = true;
                if (dup_odd) continue;
                k2.insert(pos, t);
                Rational add = c * ct;
                if (sign < 0) add = -add;
                auto [it2, fresh] = next.emplace(std::move(k2), add);
                if (!fresh) {
                    it2->second += add;
                    if (it2->second == 0) next.erase(it2);
                }
            }
        }
        acc = std::move(next);
    }
    return acc;
}

namespace {

// Unordered set partitions of {0..n-1}, blocks listed by smallest member.
void set_partitions(int n, const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
    std::vector<std::vector<int>> blocks;
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            fn(blocks);
            return;
        }
        const size_t existing = blocks.size();  // recursion grows the vector
        for (size_t k = 0; k < existing; ++k) {
            blocks[k].push_back(i);
            rec(i + 1);
            blocks[k].pop_back();
        }
        blocks.push_back({i});
        rec(i + 1);
        blocks.pop_back();
    };
    rec(0);
}

}  // namespace

CoalgElement extend_taylor(const TaylorMorphism& f, const std::vector<Term>& word) {
    const GradedSpace& src = f.source();
    const GradedSpace& tgt = f.target();
    const int n = static_cast<int>(word.size());
    std::vector<int> par(n);
    for (int i = 0; i < n; ++i) par[i] = term_parity(src, word[i]);

    CoalgElement out;
    set_partitions(n, [&](const std::vector<std::vector<int>>& blocks) {
        // Shuffle sign of rearranging the word into block order.
        std::vector<int> perm;
        for (auto& b : blocks) perm.insert(perm.end(), b.begin(), b.end());
        int sign = koszul_sign(perm, par);
        std::vector<Element> factors;
        for (auto& b : blocks) factors.push_back(f.apply(select(word, b)));
        CoalgElement prod = sym_product(tgt, factors);
        for (auto& [key, c] : prod) {
            Rational add = c * Rational(sign);
            auto [it, fresh] = out.emplace(key, add);
            if (!fresh) {
                it->second += add;
                if (it->second == 0) out.erase(it);
            }
        }
    });
    return out;
}

Element morphism_relation_residual(const TaylorMorphism& f, const Coderivation& src,
                                   const Coderivation& tgt, const std::vector<Term>& inputs) {
    const GradedSpace& ss = src.view.pres->space();
    const GradedSpace& ts = tgt.view.pres->space();
    const int n = static_cast<int>(inputs.size());
    auto par = parities(ss, inputs);
    const Rational half(1, 2);

    Element lhs = tgt.view.pres->d(f.apply(inputs));
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
        std::vector<int> I, J;
        for (int i = 0; i < n; ++i) (mask >> i & 1 ? I : J).push_back(i);
        int sg = shuffle_sign(par, I, J);
        Element fi = f.apply(select(inputs, I));
        Element fj = f.apply(select(inputs, J));
        Element term = tgt.q2(fi, fj).scaled(half);
        lhs += sg > 0 ? term : -term;
    }

    Element rhs(&ts);
    for (int i = 0; i < n; ++i) {
        std::vector<int> rest;
        for (int k = 0; k < n; ++k)
            if (k != i) rest.push_back(k);
        int sg = front_extract_sign(par, {i});
        Element term = f.apply_front(src.q1(inputs[i]), select(inputs, rest));
        rhs += sg > 0 ? term : -term;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            std::vector<int> rest;
            for (int k = 0; k < n; ++k)
                if (k != i && k != j) rest.push_back(k);
            int sg = front_extract_sign(par, {i, j});
            Element term =
                f.apply_front(src.q2(inputs[i], inputs[j]), select(inputs, rest)).scaled(half);
            rhs += sg > 0 ? term : -term;
        }
    return lhs - rhs;
}

LinftyReport check_morphism_relation(const TaylorMorphism& f, const Coderivation& src,
                                     const Coderivation& tgt, const TruncationWindow& window,
                                     int max_arity) {
    LinftyReport rep;
    const GradedSpace& ss = src.view.pres->space();
    auto basis = basis_terms(ss, window.max_word_len, window.max_gamma);
    for (int n = 1; n <= max_arity; ++n) {
        AxiomResult res{"morphism_arity_" + std::to_string(n), true, ""};
        for_each_input_tuple(ss, basis, n, [&](const std::vector<Term>& xs) {
            if (!res.pass) return;
            Element r = morphism_relation_residual(f, src, tgt, xs);
            if (!r.is_zero()) {
                res.pass = false;
                res.counterexample = tuple_str(ss, xs) + " -> " + r.str();
            }
        });
        rep.checks.push_back(res);
    }
    return rep;
}

}  // namespace gsf
