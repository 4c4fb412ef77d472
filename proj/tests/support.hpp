#pragma once

// Shared hand-built specimens for the unit tests.

#include "obstructa/algebra.hpp"
#include "obstructa/window.hpp"

namespace testsupport {

using namespace obstructa;

// Unital DGA-flavored strict algebra: I unit, m1(p) = q.
inline AlgebraSpec dga_spec() {
    AlgebraSpec a;
    a.name = "Tdga";
    a.basis = {{"I", 0, true}, {"p", 1, false}, {"q", 2, false}};
    a.classes = {{"b0", 0, 0}};
    OpTable m1;
    m1[{1}] = QOut{{2, 1}};  // m1(p) = q
    a.ops[{1, 0}] = m1;
    OpTable m2;
    for (int16_t x = 0; x < 3; ++x) {
        m2[{0, x}] = QOut{{x, 1}};
        m2[{x, 0}] = QOut{{x, a.basis[x].degree % 2 == 0 ? Rat(1) : Rat(-1)}};
    }
    m2[{0, 0}] = QOut{{0, 1}};
    a.ops[{2, 0}] = m2;
    return a;
}

// Weak filtered algebra with a single positive class and m0 = T v.
inline AlgebraSpec weak_spec() {
    AlgebraSpec a;
    a.name = "Tweak";
    a.basis = {{"I", 0, true}, {"v", 2, false}};
    a.classes = {{"b0", 0, 0}, {"b1", 1, 0}};
    OpTable m0;
    m0[{}] = QOut{{1, 1}};  // m0(1) = v at T^1
    a.ops[{0, 1}] = m0;
    OpTable m2;
    for (int16_t x = 0; x < 2; ++x) {
        m2[{0, x}] = QOut{{x, 1}};
        m2[{x, 0}] = QOut{{x, 1}};  // both degrees even
    }
    a.ops[{2, 0}] = m2;
    return a;
}

// Single ternary operation with pairwise distinct degrees; exercises signs.
inline AlgebraSpec m3_spec() {
    AlgebraSpec a;
    a.name = "Tm3";
    a.basis = {{"a", 1, false}, {"b", 2, false}, {"c", 1, false}, {"d", 3, false}};
    a.classes = {{"b0", 0, 0}};
    OpTable m3;
    m3[{0, 1, 2}] = QOut{{3, 1}};  // m3(a,b,c) = d, degrees 0+1+0+1 = 2 = |d|'
    a.ops[{3, 0}] = m3;
    return a;
}

inline Window small_window(int lmax = 4, long emax = 3) {
    Window w;
    w.lmax = lmax;
    w.emax = emax;
    w.kmax = 8;
    return w;
}

inline SignedVector unit_vector(const Word& w, const Rat& ceiling, Flavor f = Flavor::Plain) {
    SignedVector v(f, ceiling);
    v.add(w, NovikovScalar::one(ceiling));
    return v;
}

}  // namespace testsupport
