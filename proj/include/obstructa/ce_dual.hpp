#pragma once

#include <random>

#include "obstructa/linfinity.hpp"
#include "obstructa/window.hpp"

namespace obstructa {

// Graded-commutative monomial of dual variables x_i = e_i^* with
// |x_i|' = -|e_i|'. Monomials with a module variable are the dual side of
// the CE module chains; at most one module variable per monomial.
struct DualMonomial {
    std::vector<int16_t> vars;  // sorted ascending
    int16_t module_var = -1;

    bool operator<(const DualMonomial& o) const {
        if (module_var != o.module_var) return module_var < o.module_var;
        if (vars.size() != o.vars.size()) return vars.size() < o.vars.size();
        return vars < o.vars;
    }
    bool operator==(const DualMonomial& o) const {
        return module_var == o.module_var && vars == o.vars;
    }
    std::size_t length() const { return vars.size(); }
};

// Sparse series of dual monomials with Novikov coefficients; the floor is
// negative on this side, realizing bounded-below infinite sums.
class DualSeries {
  public:
    DualSeries() : ceiling_(0), floor_(0) {}
    DualSeries(const Rat& ceiling, const Rat& floor) : ceiling_(ceiling), floor_(floor) {}

    static DualSeries unit(const Rat& ceiling, const Rat& floor);
    static DualSeries variable(int16_t var, const Rat& ceiling, const Rat& floor);

    const std::map<DualMonomial, NovikovScalar>& coef() const { return coef_; }
    const Rat& ceiling() const { return ceiling_; }
    const Rat& floor() const { return floor_; }
    bool is_zero() const { return coef_.empty(); }

    void add(const DualMonomial& m, const NovikovScalar& c);
    NovikovScalar at(const DualMonomial& m) const;
    DualSeries operator+(const DualSeries& o) const;
    DualSeries operator-(const DualSeries& o) const;
    DualSeries scaled(const NovikovScalar& c) const;
    bool operator==(const DualSeries& o) const;

    // Minimal coefficient valuation (tau-tilde); +infinity when zero.
    Valuation valuation() const;

    std::string str(const std::vector<std::string>& ids,
                    const std::vector<std::string>& mod_ids = {}) const;

  private:
    std::map<DualMonomial, NovikovScalar> coef_;
    Rat ceiling_, floor_;
};

// Graded-commutative product; monomials longer than max_len are dropped
// (the window cap realizes nilpotence of positive-length series). Module
// shifted degrees are needed when a factor carries a module variable.
DualSeries dual_product(const LInfinitySpec& l, const DualSeries& f, const DualSeries& g,
                        int max_len, const std::vector<int>* mod_sdeg = nullptr);

// (d-hat^* f)(w) = f(d-hat w) materialized over the symmetric window words
// (the extended cyclic CE cochain side).
DualSeries dual_differential(const LInfinitySpec& l, const DualSeries& f, const Window& w);

// d^CE on module-marked symmetric chains, via the displayed eta/l shuffle
// formula; the restriction of the bimodule bar differential to the fixed
// subspace is the cross-check oracle.
SignedVector dce_word(const LModuleSpec& lm, const Word& w, const Rat& ceiling, int kmax);
SignedVector dce_apply(const LModuleSpec& lm, const SignedVector& v, const Window& w);
DefectReport dce_square_defect(const LModuleSpec& lm, const Window& w);

WindowedComplex ce_chain_complex(const LModuleSpec& lm, const Window& w);
HomologyReport ce_chain_homology(const LModuleSpec& lm, const Window& w);

WindowedComplex cyclic_ce_complex(const LInfinitySpec& l, const Window& w);
HomologyReport cyclic_ce_homology(const LInfinitySpec& l, const Window& w);

// d^{CE*} on the dual module side.
DualSeries dual_module_differential(const LModuleSpec& lm, const DualSeries& f,
                                    const Window& w);

// Vanishing certificate: d-hat^*(y) = 1 + h with tau(h) >= 0 and h of
// positive length, after normalizing by the monomial-invertible length-zero
// coefficient. Carries the contraction data.
struct VanishingCertificate {
    bool ok = false;
    std::string detail;
    DualSeries y;       // normalized candidate
    DualSeries h;       // d-hat^* y - 1
    DualSeries hprime;  // alternating geometric series of h
};

VanishingCertificate vanishing_certificate(const LInfinitySpec& l, const DualSeries& x,
                                           const Window& w);

// Coboundary witness for a cyclic-CE cocycle z: w with d-hat^* w = z,
// verified by independent evaluation.
std::optional<DualSeries> coboundary_witness(const LInfinitySpec& l,
                                             const VanishingCertificate& cert,
                                             const DualSeries& z, const Window& w);

// Primary obstruction data of a gapped spec.
struct ObstructionReport {
    bool has_obstruction = false;   // m_0 != 0
    Rat lambda_min = 0;
    struct Entry {
        std::string class_label;
        SignedVector cycle;      // O_s = m_{0,beta_s}(1)
        bool m1_cycle = false;
        bool m1_exact = false;
        SignedVector preimage;   // when exact
    };
    std::vector<Entry> entries;
    bool candidate_found = false;
    DualSeries candidate;        // y = (1/a0) T^{-lambda} x_s
    VanishingCertificate certificate;
};

ObstructionReport obstruction_extract(const AlgebraSpec& a, const Window& w);

// Module-over-DGA vanishing: samples d^{CE*}-cocycles in the dual module
// window and produces verified coboundary witnesses via the certificate.
struct ModuleVanishingReport {
    int sampled = 0;
    int witnessed = 0;
    std::vector<std::string> failures;
    bool ok() const { return sampled > 0 ? witnessed == sampled : true; }
};

ModuleVanishingReport ce_module_vanishing(const LModuleSpec& lm,
                                          const VanishingCertificate& cert, const Window& w,
                                          int samples, unsigned seed);

// Same sampling on the cyclic-CE dual side.
ModuleVanishingReport cyclic_ce_vanishing(const LInfinitySpec& l,
                                          const VanishingCertificate& cert, const Window& w,
                                          int samples, unsigned seed);

// Per-degree dual cohomology dims (transpose route); degrees are reported as
// the negated chain degree so the differential raises them by one.
std::vector<DegreeDims> dual_cohomology_dims(const WindowedComplex& chain);

}  // namespace obstructa
