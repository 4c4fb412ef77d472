#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "obstructa/words.hpp"

namespace obstructa {

struct Window;

struct BasisElement {
    std::string id;
    int degree = 0;
    bool is_unit = false;
};

// One class beta of the gapped monoid G, with energy lambda(beta) >= 0 and
// even Maslov index mu(beta). The filtered operation is
// m_k = sum_beta T^{lambda(beta)} e^{mu(beta)/2} m_{k,beta}.
struct ClassInfo {
    std::string label;
    Rat energy;
    long maslov = 0;

    long eexp() const { return maslov / 2; }
};

// Rational output combination of basis letters of an unfiltered table entry.
using QOut = std::vector<std::pair<int16_t, Rat>>;
// Sparse operation table m_{k,beta}: exact input word -> output combination.
using OpTable = std::map<std::vector<int16_t>, QOut>;

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Gapped filtered A-infinity algebra on a finite graded basis.
struct AlgebraSpec {
    std::string name;
    std::vector<BasisElement> basis;
    std::vector<ClassInfo> classes;
    std::map<std::pair<int, int>, OpTable> ops;  // (arity, class index) -> table
    bool z2_mode = false;

    int index_of(const std::string& id) const;
    int unit_index() const;  // -1 when no unit is flagged
    int beta0_index() const; // -1 when no (0,0) class exists
    int sdeg(int letter) const { return basis.at(letter).degree - 1; }
    std::vector<int> sdegs() const;
    std::vector<std::string> ids() const;
    int max_arity() const;
    // Positive class energies all lie on a common grid; 0 when none exist.
    Rat energy_gcd() const;

    // m_0(1) as a length-one vector (all classes combined).
    SignedVector m0(const Rat& ceiling, const Rat& floor = 0) const;
};

// Degrees mod 2 with the e-exponents erased (the Lambda / Z2-graded mode).
AlgebraSpec to_z2_mode(const AlgebraSpec& a);

ValidationReport validate_spec(const AlgebraSpec& a);
ValidationReport unit_check(const AlgebraSpec& a);

// Coderivation d-hat = sum_k m-hat_k on one plain word (no length clipping;
// scalars are truncated at their energy ceiling). kmax bounds the operation
// arity consumed; only_arity >= 0 restricts to the single summand m-hat_k.
SignedVector dhat_word(const AlgebraSpec& a, const Word& w, const Rat& ceiling,
                       const Rat& floor, int kmax, int only_arity = -1);

// d-hat on a plain / cyclic / symmetric vector, truncated to the window.
// Cyclic and symmetric inputs are expanded to their orbit sums, transported
// through the plain coderivation and re-canonicalized in the same flavor.
SignedVector dhat_apply(const AlgebraSpec& a, const SignedVector& v, const Window& w);

struct DefectEntry {
    Word word;
    SignedVector residual;
};

struct DefectReport {
    std::vector<DefectEntry> entries;
    bool empty() const { return entries.empty(); }
    // Entry whose residual has the smallest valuation (the worst violation).
    const DefectEntry* worst() const;
};

// d-hat o d-hat residuals on every window basis word.
DefectReport ainfty_defect(const AlgebraSpec& a, const Window& w);
// Independent route: the quadratic relation evaluated term by term through
// direct table composition, never through dhat_apply.
DefectReport ainfty_defect_direct(const AlgebraSpec& a, const Window& w);

// ---- Filtered A-infinity homomorphisms ----

struct HomomorphismSpec {
    std::string name;
    AlgebraSpec source, target;
    std::vector<ClassInfo> classes;
    std::map<std::pair<int, int>, OpTable> fops;  // (arity, class index) -> table

    SignedVector f0(const Rat& ceiling, const Rat& floor = 0) const;
};

HomomorphismSpec identity_homomorphism(const AlgebraSpec& a);
ValidationReport validate_hom(const HomomorphismSpec& f);

// Coalgebra-map expansion f-hat, truncated to the window; f-hat(1) expands
// the exponential of f_0(1).
SignedVector hom_apply(const HomomorphismSpec& f, const SignedVector& v, const Window& w);
DefectReport hom_chainmap_defect(const HomomorphismSpec& f, const Window& w);

// ---- Filtered A-infinity bimodules ----

// Tables keyed by the full marked word (mark position = k1).
using NTable = std::map<Word, QOut>;

struct BimoduleSpec {
    std::string name;
    AlgebraSpec left, right;
    std::vector<BasisElement> module_basis;
    std::vector<ClassInfo> classes;
    std::map<std::tuple<int, int, int>, NTable> nops;  // (k1, k0, class index)

    int module_index_of(const std::string& id) const;
    std::vector<int> mod_sdegs() const;
    std::vector<std::string> mod_ids() const;
};

BimoduleSpec diagonal_bimodule(const AlgebraSpec& a);
ValidationReport validate_bimodule(const BimoduleSpec& m);

// Extended differential D^M on the marked bar space
// B(C1) (x) M[1] (x) B(C0): left-bar coderivation, wrap n_{p,q} middle terms,
// and the right-bar coderivation with the crossing sign.
SignedVector bimodule_dhat_word(const BimoduleSpec& m, const Word& w, const Rat& ceiling,
                                const Rat& floor, int kmax);
SignedVector bimodule_dhat_apply(const BimoduleSpec& m, const SignedVector& v,
                                 const Window& w);
DefectReport bimodule_defect(const BimoduleSpec& m, const Window& w);

// (f1,f0)^* n (x, y, z) = n(f1-hat(x), y, f0-hat(z)), materialized up to the
// window's arity and energy bounds.
BimoduleSpec pullback_bimodule(const HomomorphismSpec& f1, const HomomorphismSpec& f0,
                               const BimoduleSpec& m, const Window& w);

// Bimodule homomorphism phi: M -> N over (alpha, alpha).
struct BimoduleHomSpec {
    std::string name;
    BimoduleSpec source, target;
    HomomorphismSpec alpha;  // both algebra legs
    std::vector<ClassInfo> classes;
    std::map<std::tuple<int, int, int>, NTable> phiops;  // (k1, k0, class index)
};

BimoduleHomSpec identity_bimodule_hom(const BimoduleSpec& m);

// The cycle gamma = sum_k (-1)^k (L (x) m_0)^{(x) k} of the filtered unital
// bar complex, truncated at the window ceiling.
SignedVector build_gamma(const AlgebraSpec& a, const Window& w);

// Tensor concatenation of plain vectors (word concat, scalar product).
SignedVector tensor(const SignedVector& a, const SignedVector& b);

// sum_k b^{(x)k} for a positive-valuation length-one vector b.
SignedVector exp_word_series(const SignedVector& b, int lmax_hint = 1 << 20);

}  // namespace obstructa
