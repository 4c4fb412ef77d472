#pragma once

#include "obstructa/algebra.hpp"
#include "obstructa/window.hpp"

namespace obstructa {

// Hochschild boundary of C_*(A, M): tail operations, m_0 insertions into the
// tail, and the wrap-around n_{i,j} family. Words are module-marked with the
// mark first.
SignedVector dhoch_word(const AlgebraSpec& a, const BimoduleSpec& m, const Word& w,
                        const Rat& ceiling, const Rat& floor, int kmax);
SignedVector dhoch_apply(const AlgebraSpec& a, const BimoduleSpec& m, const SignedVector& v,
                         const Window& w);
DefectReport dhoch_square_defect(const AlgebraSpec& a, const BimoduleSpec& m,
                                 const Window& w);

WindowedComplex hochschild_complex(const AlgebraSpec& a, const BimoduleSpec& m,
                                   const Window& w);
HomologyReport hochschild_homology(const AlgebraSpec& a, const BimoduleSpec& m,
                                   const Window& w);

// Quotient complex on cells whose tail letters avoid the strict unit.
WindowedComplex reduced_complex(const AlgebraSpec& a, const BimoduleSpec& m,
                                const Window& w);
HomologyReport reduced_hochschild_homology(const AlgebraSpec& a, const BimoduleSpec& m,
                                           const Window& w);

// Chain map phi_* of a bimodule homomorphism over (alpha, alpha).
SignedVector chainmap_apply(const BimoduleHomSpec& phi, const SignedVector& v,
                            const Window& w);
DefectReport chainmap_defect(const BimoduleHomSpec& phi, const Window& w);

// d-hat(e^b): zero iff b is a bounding cochain to window precision. Throws
// DivergenceError when val(b) = 0.
SignedVector mc_defect(const AlgebraSpec& a, const SignedVector& b, const Window& w);

// e^b as a plain word series.
SignedVector exp_b(const SignedVector& b, const Window& w);

// Deformed structure maps m^b_k(x) = m(e^b, x_1, e^b, ..., x_k, e^b),
// materialized to the window's arity and energy bounds. Requires a vanishing
// Maurer-Cartan residual.
AlgebraSpec deform(const AlgebraSpec& a, const SignedVector& b, const Window& w);

// gamma_b = I (x) e^b as a Hochschild chain of the diagonal bimodule.
SignedVector build_gamma_b(const AlgebraSpec& a, const SignedVector& b, const Window& w);

// Coefficient of the given word in d-hat(e^b); the augmentation identity
// says every window coordinate functional evaluates to zero.
NovikovScalar augmentation_eval(const AlgebraSpec& a, const SignedVector& b, const Word& word,
                                const Window& w);
DefectReport augmentation_check(const AlgebraSpec& a, const SignedVector& b, const Window& w);

// The homotopy equivalence i^b : (C, m^b) -> (C, m) with i^b_0(1) = b,
// i^b_1 = id.
HomomorphismSpec ib_homomorphism(const AlgebraSpec& a, const AlgebraSpec& deformed,
                                 const SignedVector& b, const Window& w);

}  // namespace obstructa
