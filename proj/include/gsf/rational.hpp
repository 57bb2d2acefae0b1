#pragma once

#include <gmpxx.h>
#include <string>

namespace gsf {

// Exact rationals over Q. mpq_class keeps gcd-reduced form with positive
// denominator as long as every entry point canonicalizes.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational rat_parse(const std::string& s) {
    Rational q(s);
    q.canonicalize();
    return q;
}

inline std::string rat_str(const Rational& q) { return q.get_str(); }

}  // namespace gsf
