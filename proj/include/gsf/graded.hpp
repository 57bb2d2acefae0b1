#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gsf/rational.hpp"

namespace gsf {

struct Letter {
    std::string name;
    int degree = 0;
};

// Finite graded basis. Letters are kept sorted by (degree, name); a letter id
// is its index in that order, so canonical words are just sorted id vectors.
// gamma_degree is the degree 6-2d of the formal variable gamma; the bracket
// twist r = 2d-5 is 1 - gamma_degree.
class GradedSpace {
public:
    GradedSpace() = default;
    GradedSpace(std::vector<Letter> letters, int gamma_degree);

    int dim() const { return static_cast<int>(letters_.size()); }
    const Letter& letter(int id) const { return letters_.at(id); }
    int degree(int id) const { return letters_.at(id).degree; }
    bool odd(int id) const { return (letters_.at(id).degree % 2 + 2) % 2 == 1; }
    int id_of(const std::string& name) const;

    int gamma_degree() const { return gamma_degree_; }
    int twist() const { return 1 - gamma_degree_; }

    bool operator==(const GradedSpace& o) const {
        return gamma_degree_ == o.gamma_degree_ && names_equal(o);
    }

private:
    bool names_equal(const GradedSpace& o) const;
    std::vector<Letter> letters_;
    std::map<std::string, int> index_;
    int gamma_degree_ = 0;
};

// Spaces are shared between presentations, kernels and the Elements that
// reference them; Elements keep a raw pointer into the shared instance.
using SpacePtr = std::shared_ptr<const GradedSpace>;

inline SpacePtr make_space(std::vector<Letter> letters, int gamma_degree) {
    return std::make_shared<GradedSpace>(std::move(letters), gamma_degree);
}

// Canonically ordered symmetric word (multiset of letter ids, sorted).
struct SymWord {
    std::vector<int> letters;

    int length() const { return static_cast<int>(letters.size()); }
    bool empty() const { return letters.empty(); }
    auto operator<=>(const SymWord&) const = default;
};

// One basis term of Sym(H)[[gamma]]: a canonical word times gamma^gamma.
struct Term {
    SymWord word;
    int gamma = 0;

    auto operator<=>(const Term&) const = default;
};

// All canonical words over the basis with min_len <= length <= max_len,
// skipping words that vanish (repeated odd letter), in lexicographic order.
std::vector<SymWord> all_words(const GradedSpace& space, int min_len, int max_len);

// An ordered (tensor) word with a scalar coefficient, as produced by
// desymmetrization.
struct TensorTerm {
    std::vector<int> letters;
    Rational coeff;
};

// Sign of permuting graded letters: -1 for every transposition of two
// odd-degree entries. perm[k] is the source position placed at slot k.
int koszul_sign(const std::vector<int>& perm, const std::vector<int>& degrees);

// Sorts letters into canonical order. Returns the Koszul sign of the sorting
// permutation, or 0 when an odd letter repeats (x.x = -x.x forces 0).
std::pair<SymWord, int> sym_canonicalize(std::vector<int> letters, const GradedSpace& space);

// Shuffle sign epsilon(I, J) for splitting positions of a word into I and J
// (both sorted): counts odd-odd pairs (j, i), j in J, i in I, j < i.
int shuffle_sign(const std::vector<int>& degrees, const std::vector<int>& I,
                 const std::vector<int>& J);

// Koszul sign of extracting the letters at `front` (in the given order) to the
// start of the word, keeping the rest in place.
int front_extract_sign(const std::vector<int>& degrees, const std::vector<int>& front);

std::vector<TensorTerm> desymmetrize(const SymWord& word, const GradedSpace& space);

struct CoproductTerm {
    SymWord left, right;
    int sign;
};

// Shuffle coproduct: all splits with both sides nonempty. Repeated splits of a
// multiset appear as separate summands.
std::vector<CoproductTerm> comultiply(const SymWord& word, const GradedSpace& space);

// Finite Q-linear combination of Terms over a fixed ambient space.
class Element {
public:
    Element() = default;
    explicit Element(const GradedSpace* space) : space_(space) {}

    static Element zero(const GradedSpace& space) { return Element(&space); }
    static Element unit(const GradedSpace& space, Rational c = Rational(1), int gamma = 0);
    static Element single(const GradedSpace& space, Term t, Rational c = Rational(1));

    const GradedSpace& space() const;
    bool is_zero() const { return terms_.empty(); }
    const std::map<Term, Rational>& terms() const { return terms_; }

    // Canonicalizes `letters` and accumulates c * sign * (word, gamma).
    void accumulate(std::vector<int> letters, int gamma, const Rational& c);
    void add_term(const Term& t, const Rational& c);

    Element& operator+=(const Element& o);
    Element& operator-=(const Element& o);
    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    Element operator-() const;
    Element scaled(const Rational& c) const;
    Element gamma_shifted(int k) const;  // multiply by gamma^k

    bool operator==(const Element& o) const { return terms_ == o.terms_; }

    int term_degree(const Term& t) const;
    // Degree when homogeneous, nullopt otherwise (zero counts as homogeneous).
    std::optional<int> degree() const;

    Element project_gn(int g, int n) const;

    std::string str() const;

private:
    const GradedSpace* space_ = nullptr;
    std::map<Term, Rational> terms_;
};

// Free graded-symmetric product with Koszul canonicalization.
Element mul(const Element& a, const Element& b);
Element mul_terms(const GradedSpace& space, const Term& a, const Term& b);

int term_parity(const GradedSpace& space, const Term& t);
int word_degree(const GradedSpace& space, const SymWord& w);

}  // namespace gsf
