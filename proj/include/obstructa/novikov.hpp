#pragma once

#include <optional>
#include <string>
#include <vector>

#include "obstructa/rational.hpp"

namespace obstructa {

// One monomial a * T^energy * e^eexp of the truncated Novikov ring.
struct NovTerm {
    Rat coeff;
    Rat energy;   // exponent of T (lambda)
    long eexp;    // exponent of e (q = mu/2 for gapped classes)
};

// Valuation of a scalar: the minimum energy exponent, +infinity for zero.
// This is the min over lambda_i, not over q_i; see nov_valuation.
struct Valuation {
    std::optional<Rat> value;  // empty = +infinity

    bool is_infinite() const { return !value.has_value(); }
    bool operator==(const Valuation& o) const { return value == o.value; }
    // +infinity compares greater than everything.
    bool operator<(const Valuation& o) const {
        if (is_infinite()) return false;
        if (o.is_infinite()) return true;
        return *value < *o.value;
    }
};

// Finite sum sum_i a_i T^{lambda_i} e^{q_i} with exact rational coefficients
// and exponents, truncated at a fixed energy ceiling. Terms with
// energy >= e_ceiling are dropped at normalization; a term with energy below
// e_floor is a domain error (the floor is 0 on the algebra side and may be
// negative on the dual side). Canonical form: terms sorted ascending by
// (energy, eexp), no duplicates, no zero coefficients. Values are immutable
// once built; every operation returns a fresh normalized scalar.
class NovikovScalar {
  public:
    NovikovScalar() : ceiling_(0), floor_(0) {}  // zero scalar, degenerate window

    static NovikovScalar zero(const Rat& ceiling, const Rat& floor = 0);
    static NovikovScalar one(const Rat& ceiling, const Rat& floor = 0);
    // c * T^energy * e^eexp
    static NovikovScalar monomial(const Rat& c, const Rat& energy, long eexp,
                                  const Rat& ceiling, const Rat& floor = 0);
    static NovikovScalar normalized(std::vector<NovTerm> raw, const Rat& ceiling,
                                    const Rat& floor = 0);

    const std::vector<NovTerm>& terms() const { return terms_; }
    const Rat& ceiling() const { return ceiling_; }
    const Rat& floor() const { return floor_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;

    Valuation valuation() const;

    NovikovScalar operator+(const NovikovScalar& o) const;
    NovikovScalar operator-(const NovikovScalar& o) const;
    NovikovScalar operator*(const NovikovScalar& o) const;
    NovikovScalar operator-() const;
    NovikovScalar scaled(const Rat& c) const;
    // Multiply by the monomial T^energy e^eexp.
    NovikovScalar shifted(const Rat& energy, long eexp) const;
    // Re-truncate into a different window.
    NovikovScalar retruncated(const Rat& ceiling, const Rat& floor) const;

    bool operator==(const NovikovScalar& o) const;
    bool operator!=(const NovikovScalar& o) const { return !(*this == o); }

    // Inverse of a monomial-invertible scalar: the minimal-energy part must
    // be a single term c T^{l0} e^{q0}. Factors a = c T^{l0} e^{q0} (1 + h)
    // with val(h) > 0 and expands the geometric series, so a * result = 1 up
    // to the ceiling shifted by l0. The result's floor is lowered to -l0 when
    // needed. Throws DivisionError on zero, NotMonomialInvertibleError when
    // the leading part has several (lambda_min, q) terms (e.g. 1 + e).
    NovikovScalar inverted() const;

    // sum_j (-1)^j h^j for val(h) > 0 (or h nilpotent in the window); throws
    // DivergenceError otherwise. (1 + h) * result = 1 within the window.
    NovikovScalar geometric_alt() const;

    std::string str() const;
    // Parses the text form produced by str(): terms 'c*T^l*e^q' joined by
    // '+'/'-', with exact rational syntax p/q for c and l.
    static NovikovScalar parse(const std::string& text, const Rat& ceiling,
                               const Rat& floor = 0);

  private:
    std::vector<NovTerm> terms_;
    Rat ceiling_;
    Rat floor_;

    void check_compatible(const NovikovScalar& o) const;
};

// Free-function spellings used by the reports and tests.
NovikovScalar nov_normalize(std::vector<NovTerm> raw, const Rat& ceiling, const Rat& floor = 0);
inline NovikovScalar nov_mul(const NovikovScalar& a, const NovikovScalar& b) { return a * b; }
inline Valuation nov_valuation(const NovikovScalar& a) { return a.valuation(); }
inline NovikovScalar nov_invert(const NovikovScalar& a) { return a.inverted(); }
inline NovikovScalar nov_geometric_alt(const NovikovScalar& h) { return h.geometric_alt(); }

}  // namespace obstructa
