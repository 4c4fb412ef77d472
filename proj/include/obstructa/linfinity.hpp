#pragma once

#include "obstructa/algebra.hpp"

namespace obstructa {

// L-infinity algebra derived from an A-infinity algebra by restricting the
// bar coderivation to the symmetric subspace. Brackets are materialized as
// sparse per-class tables on canonical multiset words.
struct LInfinitySpec {
    AlgebraSpec algebra;
    std::map<std::pair<int, int>, OpTable> lops;  // (arity, class index), sorted keys
    int kmax = 0;

    // l_k evaluated on a canonical multiset, as a length-one vector.
    SignedVector bracket(const std::vector<int16_t>& multiset, const Rat& ceiling,
                         const Rat& floor = 0) const;
};

LInfinitySpec symmetrize_algebra(const AlgebraSpec& a, int kmax);

// Shuffle-sum residuals of the L-infinity structure equation on all
// symmetric window words; table-shape violations (unsorted or self-cancelling
// keys) are reported before the shuffle check.
DefectReport linfty_defect(const LInfinitySpec& l, const Window& w);

// L-infinity module structure eta_k : M[1] (x) E_k C -> M[1] extracted from
// the symmetric-group-fixed part of an (A,A)-bimodule bar differential.
struct LModuleSpec {
    LInfinitySpec l;
    std::vector<BasisElement> module_basis;
    // key: canonical marked word (mark first, sorted tail)
    std::map<Word, std::vector<std::pair<int16_t, NovikovScalar>>> eta;
    int kmax = 0;
    Rat ceiling = 1;

    std::vector<int> mod_sdegs() const;
    std::vector<std::string> mod_ids() const;
    SignedVector eta_apply(const Word& marked, const Rat& ceiling, const Rat& floor = 0) const;
};

LModuleSpec lmodule_from_bimodule(const BimoduleSpec& m, const Window& w);

// Residuals of the L-infinity module equation on window words. The displayed
// equation carries the sign eps(sigma, x_{>=1}) on both families; the module
// degree enters through the eta-inside-eta composition only.
DefectReport lmodule_defect(const LModuleSpec& lm, const Window& w);

// Shared combinatorial helpers for the shuffle sums.
std::vector<std::vector<int16_t>> canonical_multisets(const AlgebraSpec& a, int k);
// Koszul sign of the unshuffle moving the masked positions to the front.
int shuffle_sign(const std::vector<int16_t>& word, const std::vector<int>& sdeg,
                 unsigned mask);
// On the orbit-sum basis the shuffle sums run over distinct multiset splits:
// a position subset represents its split iff equal letters are selected
// left-first.
bool canonical_split(const std::vector<int16_t>& word, unsigned mask);
// Sign of sorting (y, rest...) with rest already sorted.
int insert_sign(int16_t y, int ydeg, const std::vector<int16_t>& rest,
                const std::vector<int>& sdeg);

}  // namespace obstructa
