#pragma once

#include <map>
#include <string>
#include <vector>

#include "gsf/graded.hpp"

namespace gsf {

struct TruncationWindow {
    int max_word_len = 4;
    int max_gamma = 2;
};

// Ordered-pair table (i,j) -> Element. Stored redundantly in both orders so
// that graded symmetry is a checkable axiom, not a storage convention.
using PairTable = std::map<std::pair<int, int>, Element>;

// A twisted BD algebra presented on generators of the free graded-commutative
// algebra: d = (derivation extension of d_letter) + gamma * (second-order
// contraction with delta_pairs); the bracket is the biderivation extension of
// bracket_pairs. For a presentation satisfying d(ab)=d(a)b±a d(b)+gamma{a,b}
// the two pair tables coincide; they are kept separate so that relation can
// fail on corrupted data.
struct BDPresentation {
    SpacePtr sp;
    std::vector<Element> d_letter;
    PairTable delta_pairs;
    PairTable bracket_pairs;

    const GradedSpace& space() const { return *sp; }
    int twist() const { return sp->twist(); }

    Element d(const Element& x) const;
    Element d_term(const Term& t) const;
    Element derivation_part(const Term& t) const;
    Element delta(const Element& x) const;  // pair contraction alone, no gamma factor

    Element bracket(const Element& x, const Element& y) const;
    Element bracket_terms(const Term& u, const Term& v) const;
};

// Generating data for the free closed sector: letterwise differentials d1 and
// b1 and a graded-symmetric pairing omega supported in total degree 5-2d.
struct FreeBVData {
    SpacePtr sp;
    std::vector<Element> d1, b1;  // empty vectors mean zero
    std::map<std::pair<int, int>, Rational> omega;
};

// Presentation whose differential is the derivation extension of d1+b1 plus
// gamma times the omega-contraction, and whose bracket is the biderivation
// extension of omega. Throws when the FreeBVData invariants fail.
BDPresentation free_closed_sector(const FreeBVData& data);

// Same algebra with zero bracket and the derivation-only differential.
BDPresentation with_zero_bracket(const BDPresentation& p);

// Tensor product over k[[gamma]]. Letter names must be disjoint; use
// prefix_letters to arrange that. Twists must agree.
BDPresentation tensor_bd(const BDPresentation& a, const BDPresentation& b);

BDPresentation prefix_letters(const BDPresentation& p, const std::string& prefix);

// Maps an element into another space containing the same letter names
// (optionally prefixed there).
Element transport(const Element& x, const GradedSpace& to, const std::string& prefix = "");

struct AxiomResult {
    std::string axiom;
    bool pass = true;
    std::string counterexample;
};

struct BdReport {
    TruncationWindow window;
    std::vector<AxiomResult> axioms;
    bool ok() const {
        for (auto& a : axioms)
            if (!a.pass) return false;
        return true;
    }
};

// d^2 = 0, the BD relation, bracket symmetry, degree-r Jacobi, Leibniz and
// homogeneity of the structure tables, on all basis words in the window.
BdReport check_bd_axioms(const BDPresentation& p, const TruncationWindow& window);

// Bracket of the tensor algebra on pure tensors, assembled from the factor
// operations with the tensor-product signs; cross-checks tensor_bd.
Element tensor_bracket_pure(const BDPresentation& tensor, const BDPresentation& a,
                            const BDPresentation& b, const Term& a1, const Term& b1,
                            const Term& a2, const Term& b2);

}  // namespace gsf
