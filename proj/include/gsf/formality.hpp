#pragma once

#include <random>
#include <string>
#include <vector>

#include "gsf/graphs.hpp"
#include "gsf/linfty.hpp"

namespace gsf {

// The graded-symmetric even pairing contracted along edges; supported on
// letter pairs of total degree 6-2d.
struct ContractionKernel {
    SpacePtr sp;
    std::map<std::pair<int, int>, Rational> entries;  // full symmetric storage

    const GradedSpace& space() const { return *sp; }
    Rational value(int a, int b) const;
    bool is_zero() const { return entries.empty(); }

    // Validates support and graded symmetry, fills the mirror entries.
    static ContractionKernel build(SpacePtr sp,
                                   const std::map<std::pair<int, int>, Rational>& given);
};

ContractionKernel remap_kernel(const ContractionKernel& k, SpacePtr to,
                               const std::string& prefix = "");

// Runtime guards for the Feynman evaluation: every call checks the degree
// count; optionally each call is repeated with a shuffled edge list and
// swapped half-edge pairs and compared.
struct EvalGuard {
    bool check_invariance = true;
    unsigned long long evals = 0;
    unsigned long long degree_checks = 0;
    unsigned long long degree_failures = 0;
    unsigned long long invariance_checks = 0;
    unsigned long long invariance_failures = 0;
    std::mt19937_64 rng{0x5DEECE66Dull};

    bool clean() const { return degree_failures == 0 && invariance_failures == 0; }
};

// Feynman evaluation of one decorated marked graph: decorate each vertex with
// the desymmetrization of its input word, contract the kernel along every
// edge (bringing the two half-edge slots to the front), read off the leaves
// and weight by gamma^{betti}. Inputs must match the profile: word length =
// valency, gamma exponent = loop defect.
Element eval_graph(const MarkedGraph& g, const std::vector<Term>& inputs,
                   const ContractionKernel& kernel, EvalGuard* guard = nullptr);

// Graph-sum Taylor coefficient: sum over all profile-matching classes,
// weighted 1/|Aut|.
Element taylor_K(const std::vector<Term>& inputs, const ContractionKernel& kernel,
                 EvalGuard* guard = nullptr);

// Independent route for the Aut weights: sum over all partial matchings on
// the concrete half-edge slots divided by the full relabelling count.
Element taylor_K_matching_oracle(const std::vector<Term>& inputs,
                                 const ContractionKernel& kernel, EvalGuard* guard = nullptr);

// Open-closed Taylor coefficient on pure tensors: the Koszul sign of moving
// the x's left and the y's right, times K(x's) tensor the product of the y's.
Element oc_taylor(const std::vector<std::pair<Term, Term>>& pairs, const ContractionKernel& kernel,
                  const BDPresentation& w, const BDPresentation& tensor,
                  EvalGuard* guard = nullptr);

// Taylor family of C(K (x) m) on the tensor algebra, for the morphism checker.
class OcMorphism : public TaylorMorphism {
public:
    OcMorphism(const BDPresentation& tensor, const BDPresentation& closed_part,
               const BDPresentation& w_part, ContractionKernel kernel, EvalGuard* guard = nullptr);

    Element apply(const std::vector<Term>& slots) const override;
    const GradedSpace& source() const override { return tensor_->space(); }
    const GradedSpace& target() const override { return tensor_->space(); }

    // Splits a term of the tensor algebra into its closed and w parts with
    // the unshuffle sign; the whole gamma exponent rides on the closed part.
    std::tuple<Term, Term, int> split_term(const Term& t) const;

private:
    const BDPresentation* tensor_;
    const BDPresentation* closed_;
    const BDPresentation* w_;
    ContractionKernel kernel_;
    EvalGuard* guard_;
    std::vector<int> to_closed_, to_w_;  // tensor letter id -> factor letter id or -1
    mutable std::map<std::vector<Term>, Element> cache_;  // slot tuples recur heavily
};

// Pure closed-sector Taylor family (the K maps themselves).
class KMorphism : public TaylorMorphism {
public:
    KMorphism(ContractionKernel kernel, EvalGuard* guard = nullptr)
        : kernel_(std::move(kernel)), guard_(guard) {}
    Element apply(const std::vector<Term>& slots) const override {
        auto it = cache_.find(slots);
        if (it != cache_.end()) return it->second;
        Element e = taylor_K(slots, kernel_, guard_);
        cache_.emplace(slots, e);
        return e;
    }
    const GradedSpace& source() const override { return kernel_.space(); }
    const GradedSpace& target() const override { return kernel_.space(); }

private:
    ContractionKernel kernel_;
    EvalGuard* guard_;
    mutable std::map<std::vector<Term>, Element> cache_;
};

struct IdentityCheck {
    Element lhs, rhs;
    bool pass = false;
    Element difference() const { return lhs - rhs; }
};

// Theorem-level identity: eps(i,j|rest) K_{m-1}((x_i x_j) . rest)
//   = gamma K_m(x_1 ... x_m) + sum_{L1 ni i, L2 ni j} eps(L1,L2) K_L1 K_L2.
IdentityCheck verify_bvinf(const std::vector<Term>& inputs, int i, int j,
                           const ContractionKernel& kernel, EvalGuard* guard = nullptr);

// Key lemma over the tensor algebra closed (x) W; xs live in the kernel's
// space, ys in w's space.
IdentityCheck verify_key_lemma(const std::vector<Term>& xs, const std::vector<Term>& ys,
                               const ContractionKernel& kernel, const BDPresentation& w,
                               EvalGuard* guard = nullptr);

struct CommutationReport {
    bool certificates_run = false;
    LinftyReport kil;          // L-infinity morphism relation for K alone
    BdReport w_axioms;         // W is a BD algebra
    bool preconditions_ok = false;
    LinftyReport relation;     // the full tensor morphism relation
    bool ok() const { return certificates_run && preconditions_ok && relation.ok(); }
};

// Theorem-level commutation check C(K (x) m) d = d' C(K (x) m), run through
// the generic morphism checker on the tensor dglas. Certificates (eq. KiL for
// K at arities <= max_arity, BD axioms for W) are earned first; with
// run_certificates = false the report carries a precondition failure.
CommutationReport verify_commutation(const BDPresentation& closed,
                                     const ContractionKernel& kernel, const BDPresentation& w,
                                     const TruncationWindow& window, int max_arity = 3,
                                     EvalGuard* guard = nullptr, bool run_certificates = true);

// Plain derivation given on generators (no BD twist); used for the
// Maurer-Cartan gauge action.
struct Derivation {
    SpacePtr sp;
    std::vector<Element> on_letter;
    int degree = 0;

    Element apply(const Element& x) const;
};

// d(S) + Delta(S) + {S,S} + extra(S); the presentation differential carries
// both its derivation and second-order parts.
Element mce_residual(const Element& s, const BDPresentation& p,
                     const Derivation* extra = nullptr);

// exp(D)(S) truncated when D^k(S) vanishes; throws if it never does within
// the iteration cap.
Element gauge_exp(const Derivation& d, const Element& s, int cap);

}  // namespace gsf
