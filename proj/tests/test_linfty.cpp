#include <doctest.h>

#include "gsf/instance.hpp"
#include "gsf/linfty.hpp"

using namespace gsf;

namespace {

BDPresentation small_free_bv() {
    // d = 2: gamma degree 2, twist -1, pairing support 1.
    FreeBVData data;
    data.sp = make_space({{"a", 0}, {"b", 1}, {"c", 0}, {"e", 1}}, 2);
    const GradedSpace& s = *data.sp;
    data.omega[{s.id_of("a"), s.id_of("b")}] = rat(1);
    data.omega[{s.id_of("c"), s.id_of("e")}] = rat(-1, 2);
    return free_closed_sector(data);
}

}  // namespace

TEST_CASE("dgla_to_coderivation Taylor coefficients") {
    BDPresentation p = small_free_bv();
    DglaView g = induced_dgla(p);
    Coderivation q = dgla_to_coderivation(g);
    const GradedSpace& s = p.space();

    // Abelian bracket -> Q2 = 0; zero differential -> Q1 = 0.
    BDPresentation ab = with_zero_bracket(p);
    Coderivation qa = dgla_to_coderivation(induced_dgla(ab));
    Term ta{SymWord{{0}}, 0}, tb{SymWord{{1}}, 0};
    CHECK(qa.q2(ta, tb).is_zero());
    CHECK(qa.q1(ta).is_zero());  // free model has no letterwise differential here

    // Q2 is graded symmetric with the shifted Koszul sign. With the even
    // coalgebra shift the requirement reads Q2(y,x) = (-1)^{|x||y|} Q2(x,y).
    auto basis = basis_terms(s, 2, 0);
    for (auto& x : basis)
        for (auto& y : basis) {
            if (x.word.empty() || y.word.empty()) continue;
            Element xy = q.q2(x, y);
            Element yx = q.q2(y, x);
            int sg = term_parity(s, x) * term_parity(s, y);
            CHECK(xy == (sg % 2 ? -yx : yx));
        }

    // The degree offset of the shifted view: bracket reads degree 0, the
    // differential reads +1, through the 5-2d offset.
    CHECK(g.degree_offset() == 1);  // 5 - 2*2
    Term tc{SymWord{{s.id_of("a"), s.id_of("c")}}, 0};
    Element br = q.q2(ta, tc);
    if (!br.is_zero()) {
        // |{x,y}| = |x| + |y| + r: degree 0 once both slots are read shifted.
        CHECK(br.degree().value() ==
              word_degree(s, ta.word) + word_degree(s, tc.word) + p.twist());
    }
}

TEST_CASE("square_zero_check") {
    BDPresentation p = small_free_bv();
    Coderivation q = dgla_to_coderivation(induced_dgla(p));
    LinftyReport rep = square_zero_check(q, {3, 1}, 3);
    for (auto& c : rep.checks) {
        INFO(c.axiom << ": " << c.counterexample);
        CHECK(c.pass);
    }

    // Zero coderivation passes trivially.
    FreeBVData zero;
    zero.sp = make_space({{"x", 0}}, 2);
    BDPresentation pz = free_closed_sector(zero);
    Coderivation qz = dgla_to_coderivation(induced_dgla(pz));
    CHECK(square_zero_check(qz, {2, 0}, 3).ok());

    // One-sided bracket corruption with zero differential: arity 3 locates it.
    BDPresentation bad = p;
    bad.d_letter.clear();
    bad.delta_pairs.clear();
    auto it = bad.bracket_pairs.find({p.space().id_of("a"), p.space().id_of("b")});
    REQUIRE(it != bad.bracket_pairs.end());
    it->second = -it->second;
    LinftyReport brep = square_zero_check(dgla_to_coderivation(induced_dgla(bad)), {3, 1}, 3);
    CHECK(brep.checks[0].pass);
    CHECK(brep.checks[1].pass);
    CHECK_FALSE(brep.checks[2].pass);
    CHECK(!brep.checks[2].counterexample.empty());
}

TEST_CASE("square-zero arities match the axiom report") {
    // For dgla-induced coderivations the three arities encode d^2 = 0, the
    // d/bracket compatibility and Jacobi; cross-check pass/fail coupling.
    Rng rng(5);
    for (int t = 0; t < 5; ++t) {
        BDPresentation p = gen::random_w_presentation(rng, 4, 2);
        bool bd_ok = check_bd_axioms(p, {3, 1}).ok();
        bool sq_ok = square_zero_check(dgla_to_coderivation(induced_dgla(p)), {2, 1}, 3).ok();
        CHECK(bd_ok);
        CHECK(sq_ok);
    }

    // Failure coupling, arity 1: a differential whose square misses zero is a
    // d_squared failure in the axiom report and an arity-1 failure here.
    FreeBVData chain;
    chain.sp = make_space({{"a", 0}, {"b", 1}, {"c", 0}, {"e", 1}}, 2);
    const GradedSpace& s = *chain.sp;
    chain.d1.assign(s.dim(), Element::zero(s));
    chain.d1[s.id_of("a")] = Element::single(s, Term{SymWord{{s.id_of("b")}}, 0});
    chain.d1[s.id_of("c")] = Element::single(s, Term{SymWord{{s.id_of("e")}}, 0});
    chain.omega[{s.id_of("b"), s.id_of("c")}] = rat(1);
    chain.omega[{s.id_of("a"), s.id_of("e")}] = rat(-1);
    BDPresentation p = free_closed_sector(chain);
    REQUIRE(check_bd_axioms(p, {3, 1}).ok());

    BDPresentation broken = p;
    broken.d_letter[s.id_of("a")] = -broken.d_letter[s.id_of("a")];  // chain map lost
    BdReport axioms = check_bd_axioms(broken, {3, 1});
    bool d2_failed = false;
    for (auto& a : axioms.axioms)
        if (a.axiom == "d_squared") d2_failed = !a.pass;
    CHECK(d2_failed);
    LinftyReport sq = square_zero_check(dgla_to_coderivation(induced_dgla(broken)), {3, 1}, 3);
    CHECK_FALSE(sq.checks[0].pass);  // arity 1 is exactly d^2
}

TEST_CASE("extend_taylor") {
    BDPresentation p = small_free_bv();
    const GradedSpace& s = p.space();
    SpacePtr sp = p.sp;

    IdentityMorphism id(sp);
    Term ta{SymWord{{0}}, 0}, tb{SymWord{{1}}, 0};

    // Length-1 word: F1 only.
    CoalgElement one = extend_taylor(id, {ta});
    REQUIRE(one.size() == 1);
    CHECK(one.begin()->first == CoalgKey{ta});
    CHECK(one.begin()->second == 1);

    // For the identity (F_n = 0 for n >= 2) any word maps letterwise.
    CoalgElement two = extend_taylor(id, {ta, tb});
    REQUIRE(two.size() == 1);
    CHECK(two.begin()->first.size() == 2);

    // Length-2 word with a genuine F2: F2 + F1.F1 with shuffle signs.
    TableMorphism f(sp, sp);
    f.set({ta}, Element::single(s, ta));
    f.set({tb}, Element::single(s, tb));
    Element f2val = Element::unit(s, rat(5));
    f.set({ta, tb}, f2val);
    CoalgElement ext = extend_taylor(f, {ta, tb});
    // Expect: key {unit-term...} from F2 (empty word term) and key {ta, tb}.
    bool saw_f2 = false, saw_f11 = false;
    for (auto& [key, c] : ext) {
        if (key.size() == 1 && key[0].word.empty()) {
            saw_f2 = true;
            CHECK(c == 5);
        }
        if (key.size() == 2) {
            saw_f11 = true;
            CHECK(c == 1);
        }
    }
    CHECK(saw_f2);
    CHECK(saw_f11);
}

TEST_CASE("extend_taylor intertwines the coproduct") {
    // Delta' C(F) = (C(F) x C(F)) Delta on words of length <= 4, for a
    // degree-0 morphism with nontrivial F2. The coalgebra shift is 6-2d = 2,
    // so F2 output degree is |x|+|y|-2.
    SpacePtr sp = make_space({{"a", 0}, {"b", 1}, {"c", 0}, {"e", 1}, {"f", -1}}, 2);
    const GradedSpace& s = *sp;
    TableMorphism f(sp, sp);
    auto basis = basis_terms(s, 1, 0);
    for (auto& t : basis)
        if (!t.word.empty()) f.set({t}, Element::single(s, t));
    Term ta{SymWord{{s.id_of("a")}}, 0}, tb{SymWord{{s.id_of("b")}}, 0},
        tc{SymWord{{s.id_of("c")}}, 0};
    f.set({ta, tb}, Element::single(s, Term{SymWord{{s.id_of("f")}}, 0}, rat(3)));
    f.set({tb, tc}, Element::single(s, Term{SymWord{{s.id_of("f")}}, 0}, rat(-2)));
    f.set({ta, tc},
          Element::single(s, Term{SymWord{{s.id_of("f"), s.id_of("b")}}, 0}, rat(5)));

    auto coalg_comult = [&](const CoalgElement& x) {
        std::map<std::pair<CoalgKey, CoalgKey>, Rational> out;
        for (auto& [key, c] : x) {
            const int n = static_cast<int>(key.size());
            if (n < 2) continue;
            std::vector<int> par(n);
            for (int i = 0; i < n; ++i) par[i] = term_parity(s, key[i]);
            for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
                std::vector<int> I, J;
                for (int i = 0; i < n; ++i) (mask >> i & 1 ? I : J).push_back(i);
                CoalgKey left, right;
                for (int i : I) left.push_back(key[i]);
                for (int j : J) right.push_back(key[j]);
                Rational add = c * Rational(shuffle_sign(par, I, J));
                auto [it, fresh] = out.emplace(std::make_pair(left, right), add);
                if (!fresh) {
                    it->second += add;
                    if (it->second == 0) out.erase(it);
                }
            }
        }
        return out;
    };

    std::vector<std::vector<Term>> words = {
        {ta, tb}, {ta, tb, tc}, {ta, ta, tb, tc}, {tb, tc, Term{SymWord{{s.id_of("e")}}, 0}, ta}};
    for (auto& w : words) {
        // LHS: comultiply after extending.
        auto lhs = coalg_comult(extend_taylor(f, w));
        // RHS: comultiply the source word, extend both legs, tensor.
        std::map<std::pair<CoalgKey, CoalgKey>, Rational> rhs;
        const int n = static_cast<int>(w.size());
        std::vector<int> par(n);
        for (int i = 0; i < n; ++i) par[i] = term_parity(s, w[i]);
        for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
            std::vector<int> I, J;
            for (int i = 0; i < n; ++i) (mask >> i & 1 ? I : J).push_back(i);
            std::vector<Term> wi, wj;
            for (int i : I) wi.push_back(w[i]);
            for (int j : J) wj.push_back(w[j]);
            int sg = shuffle_sign(par, I, J);
            // Koszul sign of the leg swap is handled by enumerating ordered
            // splits, matching the comultiplication convention.
            CoalgElement li = extend_taylor(f, wi);
            CoalgElement lj = extend_taylor(f, wj);
            for (auto& [ki, ci] : li)
                for (auto& [kj, cj] : lj) {
                    Rational add = ci * cj * Rational(sg);
                    auto [it, fresh] = rhs.emplace(std::make_pair(ki, kj), add);
                    if (!fresh) {
                        it->second += add;
                        if (it->second == 0) rhs.erase(it);
                    }
                }
        }
        CHECK(lhs == rhs);
    }
}

TEST_CASE("morphism relation basics") {
    BDPresentation p = small_free_bv();
    Coderivation q = dgla_to_coderivation(induced_dgla(p));

    // Identity morphism between equal dglas passes.
    IdentityMorphism id(p.sp);
    LinftyReport rep = check_morphism_relation(id, q, q, {2, 1}, 3);
    for (auto& c : rep.checks) {
        INFO(c.axiom << ": " << c.counterexample);
        CHECK(c.pass);
    }

    // A letterwise chain map between abelian dglas passes.
    FreeBVData da;
    da.sp = make_space({{"x", 0}, {"y", 1}}, 2);
    da.d1.assign(2, Element::zero(*da.sp));
    da.d1[da.sp->id_of("x")] = Element::single(*da.sp, Term{SymWord{{da.sp->id_of("y")}}, 0});
    BDPresentation ab = free_closed_sector(da);
    Coderivation qa = dgla_to_coderivation(induced_dgla(ab));
    IdentityMorphism chain(ab.sp);
    CHECK(check_morphism_relation(chain, qa, qa, {2, 1}, 2).ok());
}

TEST_CASE("half factors cancel the ordered double count") {
    // Summing the Q2' term over ordered splits and halving equals summing
    // over unordered splits: verified by comparing against an explicitly
    // unordered accumulation on random instances.
    Rng rng(17);
    BDPresentation p = gen::random_w_presentation(rng, 4, 2);
    Coderivation q = dgla_to_coderivation(induced_dgla(p));
    const GradedSpace& s = p.space();
    auto basis = basis_terms(s, 1, 0);
    std::vector<Term> xs;
    for (auto& t : basis)
        if (t.word.length() == 1) xs.push_back(t);
    REQUIRE(xs.size() >= 3);
    std::vector<Term> inputs{xs[0], xs[1], xs[2]};
    std::vector<int> par;
    for (auto& t : inputs) par.push_back(term_parity(s, t));

    Element ordered(&s);
    for (unsigned mask = 1; mask + 1 < (1u << 3); ++mask) {
        std::vector<int> I, J;
        for (int i = 0; i < 3; ++i) (mask >> i & 1 ? I : J).push_back(i);
        int sg = shuffle_sign(par, I, J);
        Element fi = I.size() == 1 ? Element::single(s, inputs[I[0]]) : Element::zero(s);
        Element fj = J.size() == 1 ? Element::single(s, inputs[J[0]]) : Element::zero(s);
        Element term = q.q2(fi, fj).scaled(rat(1, 2));
        ordered += sg > 0 ? term : -term;
    }
    Element unordered(&s);
    for (unsigned mask = 1; mask + 1 < (1u << 3); ++mask) {
        if (!(mask & 1)) continue;  // fix 0 in I: each unordered split once
        std::vector<int> I, J;
        for (int i = 0; i < 3; ++i) (mask >> i & 1 ? I : J).push_back(i);
        int sg = shuffle_sign(par, I, J);
        Element fi = I.size() == 1 ? Element::single(s, inputs[I[0]]) : Element::zero(s);
        Element fj = J.size() == 1 ? Element::single(s, inputs[J[0]]) : Element::zero(s);
        Element term = q.q2(fi, fj);
        unordered += sg > 0 ? term : -term;
    }
    CHECK(ordered == unordered);
}
