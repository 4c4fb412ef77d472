#pragma once

#include <optional>

#include "obstructa/algebra.hpp"
#include "obstructa/window.hpp"

namespace obstructa {

// Shipped synthetic gapped filtered specs, each realizing one hypothesis
// class of the theory:
//   E-zero  zero operations over several degrees (baseline counting)
//   E-free  unital DGA with graded-commutative product and differential,
//           cohomology spanned by the unit (no quantum contribution)
//   E1      unital strict algebra with nontrivial m1 and known homology
//   E2      obstructed: single positive class, m0 a non-exact m1-bar cycle
//   E3      unobstructed: m0 = T m1(u), bounding cochain solvable order by
//           order (a second-order correction is genuinely needed)
//   E4      unital, all Maslov indices <= 0, the alpha-cycle target
AlgebraSpec build_example(const std::string& name);
std::vector<std::string> example_names();

// Order-by-order bounding cochain solver: seeds nothing, solves
// m1-bar(b_n) = -(lower-order residual) per energy level, throws DomainError
// when a level obstructs. Returns b with mc_defect(a, b, w) = 0.
SignedVector solve_bounding_cochain(const AlgebraSpec& a, const Window& w);

// A second bounding cochain of E3 differing by a kernel element, for the
// gauge-independence dimension checks.
SignedVector e3_second_cochain(const AlgebraSpec& e3, const Window& w);

// Spec file schema (UTF-8 JSON): {name, basis:[{id,degree,unit?}],
// classes:[{label,energy,maslov}], ops:[{arity,class,terms:[{in:[ids],
// out:[{id,coeff}]}]}]}; `module_basis`/`n_ops` extend it for bimodules and
// `f_ops` for homomorphisms. Rationals are integers or "p/q" strings.
std::string save_algebra(const AlgebraSpec& a);
AlgebraSpec load_algebra(const std::string& text);
std::string save_bimodule(const BimoduleSpec& m);
BimoduleSpec load_bimodule(const std::string& text);
std::string save_homomorphism(const HomomorphismSpec& f);
HomomorphismSpec load_homomorphism(const std::string& text);

// Loads any of the three spec kinds from a file, dispatching on the fields
// present; validation failures carry the offending element names.
struct LoadedSpec {
    std::optional<AlgebraSpec> algebra;
    std::optional<BimoduleSpec> bimodule;
    std::optional<HomomorphismSpec> homomorphism;
};
LoadedSpec load_spec_file(const std::string& path);

}  // namespace obstructa
