#pragma once

#include <gmpxx.h>

#include <string>

#include "obstructa/errors.hpp"

namespace obstructa {

// Exact rational scalar. All coefficient and exponent arithmetic in the
// engine goes through this type; there is no floating-point mode.
using Rat = mpq_class;

inline Rat rat(long n, long d = 1) {
    Rat r(n, d);
    r.canonicalize();
    return r;
}

// Accepts "p", "-p", "p/q" with optional sign.
inline Rat parse_rat(const std::string& s) {
    try {
        Rat r(s);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal: '" + s + "'", 0, 0);
    }
}

inline std::string to_string(const Rat& r) {
    return r.get_str();
}

inline bool is_integer(const Rat& r) {
    return r.get_den() == 1;
}

// Positive generator of the group generated by a set of rationals,
// accumulated pairwise: gcd(a/b, c/d) = gcd(ad, cb)/bd.
inline Rat rat_gcd(const Rat& a, const Rat& b) {
    if (a == 0) return abs(b);
    if (b == 0) return abs(a);
    mpz_class num;
    mpz_gcd(num.get_mpz_t(), mpz_class(a.get_num() * b.get_den()).get_mpz_t(),
            mpz_class(b.get_num() * a.get_den()).get_mpz_t());
    Rat r(num, a.get_den() * b.get_den());
    r.canonicalize();
    return abs(r);
}

}  // namespace obstructa
