#pragma once

#include <functional>
#include <vector>

#include "gsf/bd.hpp"

namespace gsf {

// Shifted Lie view of a BD presentation: the product is hidden, degrees are
// re-read through the 5-2d offset, and the lie bracket carries the decalage
// sign (-1)^{|x|}{x,y} that makes it antisymmetric in the shifted grading.
struct DglaView {
    const BDPresentation* pres = nullptr;

    int degree_offset() const { return pres->space().gamma_degree() - 1; }  // 5-2d
    Element d(const Element& x) const { return pres->d(x); }
    Element lie_bracket(const Term& x, const Term& y) const;
};

DglaView induced_dgla(const BDPresentation& p);

// Degree-1 coderivation on Sym(A[6-2d]) determined by its Taylor
// coefficients: Q1 = d, Q2(x,y) = (-1)^{|x|}[x,y] with |x| the coalgebra
// grading, Qn = 0 for n >= 3. The coalgebra shift 6-2d is even, so sign
// computations read unshifted parities.
struct Coderivation {
    DglaView view;

    Element q1(const Term& t) const;
    Element q2(const Term& a, const Term& b) const;
    Element q2(const Element& a, const Element& b) const;
};

Coderivation dgla_to_coderivation(const DglaView& g);

struct LinftyReport {
    std::vector<AxiomResult> checks;
    bool ok() const {
        for (auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

std::vector<Term> basis_terms(const GradedSpace& space, int max_word_len, int max_gamma);

// Componentwise L-infinity relations Sum eps(I,J) Q_{|J|+1}(Q_{|I|}(.) . .) = 0
// on all unordered tuples of basis terms, arity by arity.
LinftyReport square_zero_check(const Coderivation& q, const TruncationWindow& window,
                               int max_arity = 3);

// Arity-indexed Taylor coefficients of a degree-0 coalgebra morphism; applied
// to basis terms of the source algebra, landing in the target algebra.
class TaylorMorphism {
public:
    virtual ~TaylorMorphism() = default;
    virtual Element apply(const std::vector<Term>& slots) const = 0;
    virtual const GradedSpace& source() const = 0;
    virtual const GradedSpace& target() const = 0;

    // Multilinear extension with an Element in the first slot.
    Element apply_front(const Element& front, const std::vector<Term>& rest) const;
};

class IdentityMorphism : public TaylorMorphism {
public:
    explicit IdentityMorphism(SpacePtr sp) : sp_(std::move(sp)) {}
    Element apply(const std::vector<Term>& slots) const override;
    const GradedSpace& source() const override { return *sp_; }
    const GradedSpace& target() const override { return *sp_; }

private:
    SpacePtr sp_;
};

// Sparse table-backed family: entries keyed by the sorted slot tuple.
class TableMorphism : public TaylorMorphism {
public:
    TableMorphism(SpacePtr src, SpacePtr tgt) : src_(std::move(src)), tgt_(std::move(tgt)) {}
    void set(std::vector<Term> slots, Element value);
    Element apply(const std::vector<Term>& slots) const override;
    const GradedSpace& source() const override { return *src_; }
    const GradedSpace& target() const override { return *tgt_; }
    const std::map<std::vector<Term>, Element>& entries() const { return table_; }

private:
    SpacePtr src_, tgt_;
    std::map<std::vector<Term>, Element> table_;
};

// Element of Sym(target algebra): multiset of basis terms -> coefficient.
using CoalgKey = std::vector<Term>;  // sorted
using CoalgElement = std::map<CoalgKey, Rational>;

// Symmetric product of algebra elements as a coalgebra element.
CoalgElement sym_product(const GradedSpace& space, const std::vector<Element>& factors);

// The unique coalgebra-morphism value on a word: sum over unordered set
// partitions of the slots, shuffle-signed product of blockwise coefficients.
CoalgElement extend_taylor(const TaylorMorphism& f, const std::vector<Term>& word);

// Residual of the dgla L-infinity morphism relation at one input tuple
// (zero iff the relation holds there):
//   Q1' F_n + 1/2 sum eps(I,J) Q2'(F_I . F_J)
//   - sum_i eps(i|rest) F_n(Q1 x_i . rest)
//   - 1/2 sum_{i!=j} eps(i,j|rest) F_{n-1}(Q2(x_i,x_j) . rest)
Element morphism_relation_residual(const TaylorMorphism& f, const Coderivation& src,
                                   const Coderivation& tgt, const std::vector<Term>& inputs);

LinftyReport check_morphism_relation(const TaylorMorphism& f, const Coderivation& src,
                                     const Coderivation& tgt, const TruncationWindow& window,
                                     int max_arity = 3);

// Unordered tuples (with repetition) of basis terms; tuples with a repeated
// odd term vanish in Sym and are skipped.
void for_each_input_tuple(const GradedSpace& space, const std::vector<Term>& basis, int arity,
                          const std::function<void(const std::vector<Term>&)>& fn);

}  // namespace gsf
