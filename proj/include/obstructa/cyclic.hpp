#pragma once

#include "obstructa/algebra.hpp"
#include "obstructa/window.hpp"

namespace obstructa {

// Signed cyclic generator on plain words: the last letter moves to the front,
// t(x_1 ... x_n) = (-1)^{|x_n|'(|x_1|'+...+|x_{n-1}|')} x_n x_1 ... x_{n-1}.
SignedVector t_apply(const AlgebraSpec& a, const SignedVector& v);
// N = 1 + t + ... + t^{n-1}, length-wise, as a plain vector.
SignedVector N_apply(const AlgebraSpec& a, const SignedVector& v);

// b' = d-hat on positive-length plain words; b = d^Hoch of the diagonal
// bimodule under the mark-first identification.
SignedVector bprime_apply(const AlgebraSpec& a, const SignedVector& v, const Window& w);
SignedVector b_apply(const AlgebraSpec& a, const SignedVector& v, const Window& w);

// Homology of the cyclic-flavor windowed bar complex (B^cyc_{>=1}, d-hat).
WindowedComplex cyclic_complex(const AlgebraSpec& a, const Window& w);
HomologyReport cyclic_homology(const AlgebraSpec& a, const Window& w);
// Quotient convention: homology of coker(1 - t) with the induced b.
HomologyReport cyclic_homology_quotient(const AlgebraSpec& a, const Window& w);

// Residuals of b(1-t) = (1-t)b' and b'N = Nb, plus (1-t)N = N(1-t) = 0,
// on all window words.
DefectReport bicomplex_identities(const AlgebraSpec& a, const Window& w);

// Homology of the P-column truncation of the cyclic bicomplex: even columns
// b, odd columns -b', horizontal 1-t and N; total degree = cell degree - p.
HomologyReport tsygan_total_homology(const AlgebraSpec& a, const Window& w, int columns);

// The corrected contracting homotopy s~ of (C_*(A,A), d-hat): s on a chosen
// complement V of ker(d-hat), I (x) p - m_0 (x) I (x) q on the kernel.
struct StildeData {
    CellBasis cells;        // extended basis the operators live on
    std::vector<char> requested;  // cells inside the requested window
    ColMat dhat;            // b' on the extended basis
    ColMat stilde;
    ColMat splain;          // the uncorrected s = I (x) -
    DefectReport identity;  // s~ d + d s~ - id residuals on requested cells
    bool ok = false;
};

StildeData stilde_build(const AlgebraSpec& a, const Window& w);

// B = (1-t) s~ N with B^2 = 0 and bB + Bb = 0 verified on the requested
// window cells.
struct ConnesBData {
    StildeData base;
    ColMat B;
    ColMat b;
    bool b_squared_zero = false;
    bool B_squared_zero = false;
    bool anticommute = false;
};

ConnesBData connes_B(const AlgebraSpec& a, const Window& w);

// Truncated (b,B) total complex on `columns` columns; total degree =
// cell degree - 2p. Normalized variant on reduced cells.
HomologyReport bb_total_homology(const AlgebraSpec& a, const Window& w, int columns,
                                 bool normalized = false);

// Rank bookkeeping of the Connes exact sequence nodes built from the column
// filtration of the Tsygan bicomplex.
struct ConnesSequenceReport {
    // per total degree: dims of H(sub), H(total), H(quotient) and the ranks
    // of the three maps; exact = (composition zero and im = ker) at each node
    struct Node {
        int degree;
        int dim_sub, dim_total, dim_quot;
        int rank_i, rank_p, rank_delta;
        bool exact_at_total, exact_at_quot, exact_at_sub;
    };
    std::vector<Node> nodes;
    bool all_exact() const;
};

ConnesSequenceReport connes_sequence_check(const AlgebraSpec& a, const Window& w,
                                           int columns);

// alpha = sum_k (-1)^k N_{2k+1}( (L (x) m_0)^{(x) k} (x) L ), with the per-k
// identity m-hat_0(alpha_{2k-1}) = m-hat_2(alpha_{2k+1}), the total cycle
// check, and the leading-term certificate in the cyclic window.
struct AlphaReport {
    SignedVector alpha;        // plain invariant vector
    SignedVector alpha_cyc;    // canonical cyclic flavor
    int kmax = 0;
    bool per_k_ok = false;
    bool cycle_ok = false;
    Certificate certificate;
};

AlphaReport alpha_build(const AlgebraSpec& a, const Window& w);

}  // namespace obstructa
