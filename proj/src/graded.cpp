#include "gsf/graded.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace gsf {

GradedSpace::GradedSpace(std::vector<Letter> letters, int gamma_degree)
    : letters_(std::move(letters)), gamma_degree_(gamma_degree) {
    std::sort(letters_.begin(), letters_.end(), [](const Letter& a, const Letter& b) {
        return std::tie(a.degree, a.name) < std::tie(b.degree, b.name);
    });
    for (int i = 0; i < static_cast<int>(letters_.size()); ++i) {
        if (!index_.emplace(letters_[i].name, i).second)
            throw std::invalid_argument("GradedSpace: duplicate letter name " + letters_[i].name);
    }
}

int GradedSpace::id_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("GradedSpace: unknown letter " + name);
    return it->second;
}

bool GradedSpace::names_equal(const GradedSpace& o) const {
    if (letters_.size() != o.letters_.size()) return false;
    for (size_t i = 0; i < letters_.size(); ++i)
        if (letters_[i].name != o.letters_[i].name || letters_[i].degree != o.letters_[i].degree)
            return false;
    return true;
}

int koszul_sign(const std::vector<int>& perm, const std::vector<int>& degrees) {
    if (perm.size() != degrees.size())
        throw std::invalid_argument("koszul_sign: permutation/degree length mismatch");
    int sign = 1;
    for (size_t k = 0; k < perm.size(); ++k)
        for (size_t l = k + 1; l < perm.size(); ++l)
            if (perm[k] > perm[l] && (degrees[perm[k]] & 1) && (degrees[perm[l]] & 1)) sign = -sign;
    return sign;
}

std::pair<SymWord, int> sym_canonicalize(std::vector<int> letters, const GradedSpace& space) {
    // Insertion sort, counting odd-odd transpositions.
    int sign = 1;
    for (size_t i = 1; i < letters.size(); ++i) {
        size_t j = i;
        while (j > 0 && letters[j - 1] > letters[j]) {
            if (space.odd(letters[j - 1]) && space.odd(letters[j])) sign = -sign;
            std::swap(letters[j - 1], letters[j]);
            --j;
        }
    }
    for (size_t i = 1; i < letters.size(); ++i)
        if (letters[i] == letters[i - 1] && space.odd(letters[i])) return {SymWord{}, 0};
    return {SymWord{std::move(letters)}, sign};
}

int shuffle_sign(const std::vector<int>& degrees, const std::vector<int>& I,
                 const std::vector<int>& J) {
    int sign = 1;
    for (int j : J)
        for (int i : I)
            if (j < i && (degrees[i] & 1) && (degrees[j] & 1)) sign = -sign;
    return sign;
}

int front_extract_sign(const std::vector<int>& degrees, const std::vector<int>& front) {
    // Pull front[0], front[1], ... to the start one at a time; each extraction
    // jumps over the not-yet-extracted letters to its left.
    int sign = 1;
    std::vector<bool> taken(degrees.size(), false);
    for (int pos : front) {
        if (degrees[pos] & 1) {
            for (int l = 0; l < pos; ++l)
                if (!taken[l] && (degrees[l] & 1)) sign = -sign;
        }
        taken[pos] = true;
    }
    return sign;
}

std::vector<TensorTerm> desymmetrize(const SymWord& word, const GradedSpace& space) {
    const int n = word.length();
    std::vector<int> degrees(n);
    for (int i = 0; i < n; ++i) degrees[i] = space.degree(word.letters[i]);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<TensorTerm> out;
    do {
        TensorTerm t;
        t.letters.reserve(n);
        for (int k = 0; k < n; ++k) t.letters.push_back(word.letters[perm[k]]);
        t.coeff = Rational(koszul_sign(perm, degrees));
        out.push_back(std::move(t));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

std::vector<CoproductTerm> comultiply(const SymWord& word, const GradedSpace& space) {
    const int n = word.length();
    if (n == 0) throw std::invalid_argument("comultiply: empty word");
    std::vector<int> degrees(n);
    for (int i = 0; i < n; ++i) degrees[i] = space.degree(word.letters[i]);
    std::vector<CoproductTerm> out;
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
        std::vector<int> I, J;
        for (int i = 0; i < n; ++i) (mask >> i & 1 ? I : J).push_back(i);
        CoproductTerm t;
        for (int i : I) t.left.letters.push_back(word.letters[i]);
        for (int j : J) t.right.letters.push_back(word.letters[j]);
        t.sign = shuffle_sign(degrees, I, J);
        out.push_back(std::move(t));
    }
    return out;
}

Element Element::unit(const GradedSpace& space, Rational c, int gamma) {
    Element e(&space);
    e.add_term(Term{SymWord{}, gamma}, c);
    return e;
}

Element Element::single(const GradedSpace& space, Term t, Rational c) {
    Element e(&space);
    e.add_term(t, c);
    return e;
}

const GradedSpace& Element::space() const {
    if (!space_) throw std::logic_error("Element: no ambient space");
    return *space_;
}

void Element::accumulate(std::vector<int> letters, int gamma, const Rational& c) {
    if (c == 0) return;
    auto [word, sign] = sym_canonicalize(std::move(letters), space());
    if (sign == 0) return;
    add_term(Term{std::move(word), gamma}, sign > 0 ? c : Rational(-c));
}

void Element::add_term(const Term& t, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(t);
    if (it == terms_.end()) {
        terms_.emplace(t, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Element& Element::operator+=(const Element& o) {
    if (!space_) space_ = o.space_;
    for (auto& [t, c] : o.terms_) add_term(t, c);
    return *this;
}

Element& Element::operator-=(const Element& o) {
    if (!space_) space_ = o.space_;
    for (auto& [t, c] : o.terms_) add_term(t, Rational(-c));
    return *this;
}

Element Element::operator-() const { return scaled(Rational(-1)); }

Element Element::scaled(const Rational& c) const {
    Element e(space_);
    if (c == 0) return e;
    for (auto& [t, v] : terms_) e.terms_.emplace(t, Rational(v * c));
    return e;
}

Element Element::gamma_shifted(int k) const {
    Element e(space_);
    for (auto& [t, v] : terms_) {
        Term s = t;
        s.gamma += k;
        if (s.gamma < 0) throw std::invalid_argument("gamma_shifted: negative gamma exponent");
        e.terms_.emplace(std::move(s), v);
    }
    return e;
}

int Element::term_degree(const Term& t) const {
    return word_degree(space(), t.word) + t.gamma * space().gamma_degree();
}

std::optional<int> Element::degree() const {
    std::optional<int> d;
    for (auto& [t, c] : terms_) {
        int td = term_degree(t);
        if (!d)
            d = td;
        else if (*d != td)
            return std::nullopt;
    }
    return is_zero() ? std::optional<int>(0) : d;
}

Element Element::project_gn(int g, int n) const {
    Element e(space_);
    for (auto& [t, c] : terms_)
        if (t.gamma == g && t.word.length() == n) e.terms_.emplace(t, c);
    return e;
}

std::string Element::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [t, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << rat_str(c) << "*";
        if (t.word.empty()) {
            os << "1";
        } else {
            for (size_t i = 0; i < t.word.letters.size(); ++i) {
                if (i) os << ".";
                os << space().letter(t.word.letters[i]).name;
            }
        }
        if (t.gamma) os << " g^" << t.gamma;
    }
    return os.str();
}

Element mul_terms(const GradedSpace& space, const Term& a, const Term& b) {
    Element e(&space);
    std::vector<int> letters = a.word.letters;
    letters.insert(letters.end(), b.word.letters.begin(), b.word.letters.end());
    e.accumulate(std::move(letters), a.gamma + b.gamma, Rational(1));
    return e;
}

Element mul(const Element& a, const Element& b) {
    Element e(&a.space());
    for (auto& [ta, ca] : a.terms())
        for (auto& [tb, cb] : b.terms()) e += mul_terms(a.space(), ta, tb).scaled(Rational(ca * cb));
    return e;
}

int term_parity(const GradedSpace& space, const Term& t) {
    // gamma_degree is even (6-2d), so gamma never changes parity.
    return ((word_degree(space, t.word) % 2) + 2) % 2;
}

std::vector<SymWord> all_words(const GradedSpace& space, int min_len, int max_len) {
    std::vector<SymWord> out;
    std::vector<int> acc;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(acc.size()) >= min_len) out.push_back(SymWord{acc});
        if (static_cast<int>(acc.size()) == max_len) return;
        for (int id = start; id < space.dim(); ++id) {
            if (!acc.empty() && acc.back() == id && space.odd(id)) continue;
            acc.push_back(id);
            rec(id);
            acc.pop_back();
        }
    };
    rec(0);
    return out;
}

int word_degree(const GradedSpace& space, const SymWord& w) {
    int d = 0;
    for (int id : w.letters) d += space.degree(id);
    return d;
}

}  // namespace gsf
