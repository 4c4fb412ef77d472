#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "obstructa/linalg.hpp"
#include "obstructa/words.hpp"

namespace obstructa {

struct AlgebraSpec;
struct BimoduleSpec;
struct ClassInfo;

// Finite truncation window of a completed complex. All computations inside a
// window are exact; truncation is the only approximation and the defect
// ledger records where it breaks d^2 = 0.
struct Window {
    int lmax = 4;           // max tensor length
    Rat emax = 1;           // energy ceiling (exclusive)
    int kmax = 16;          // max operation arity consumed
    std::optional<int> deg_lo, deg_hi;
    // When set, a cell of length l at energy level n*lambda0 is admitted if
    // l - n <= lmax: length spent above lmax must be paid for by energy, so
    // every m-hat_0 insertion stays inside the window and truncation is
    // energy-only. Plain length cutoff when false.
    bool credit_length = false;
    std::size_t cell_cap = 0;  // 0 = use OBSTRUCTA_CAP or the default

    Window with_lmax(int l) const {
        Window w = *this;
        w.lmax = l;
        return w;
    }
    std::size_t effective_cap() const;
};

enum class SpaceKind {
    Bar,        // plain words, lengths 0..lmax (includes the empty word)
    BarGe1,     // plain words, lengths >= 1
    Cyc,        // cyclic canonical orbits, lengths >= 1
    Sym,        // symmetric canonical words, lengths 0..lmax
    SymGe1,     // symmetric canonical words, lengths >= 1
    Hochschild, // marked words, mark first, total length 1..lmax
    CEChain,    // marked symmetric canonical words, total length 1..lmax
};

std::string space_name(SpaceKind k);

struct Cell {
    Word word;
    Rat energy;
    long eexp = 0;
    int degree = 0;
};

// Deterministic ordered finite cell basis: canonical words x monomial
// coefficient slots (lambda, q) generated by the spec's class monoid below
// the ceiling.
struct CellBasis {
    SpaceKind kind = SpaceKind::Bar;
    Flavor flavor = Flavor::Plain;
    Window window;
    Rat lambda0;  // energy grid step (0 = no positive classes)
    std::vector<Cell> cells;
    std::map<std::tuple<Word, Rat, long>, int> index;

    int find(const Word& w, const Rat& energy, long eexp) const;
    std::size_t size() const { return cells.size(); }
    // Q-linearization of a flavored vector; terms outside the basis are
    // dropped (window projection) and counted in *clipped when given.
    QVec linearize(const SignedVector& v, int* clipped = nullptr) const;
    std::string cell_name(int i, const std::vector<std::string>& alg_ids,
                          const std::vector<std::string>& mod_ids = {}) const;
};

// The (lambda, q) monoid generated by the declared classes below the ceiling.
std::vector<std::pair<Rat, long>> class_monoid(const std::vector<ClassInfo>& classes,
                                               const Rat& emax, std::size_t cap);

CellBasis enumerate_window(SpaceKind kind, const AlgebraSpec& a, const Window& w);
CellBasis enumerate_window_module(SpaceKind kind, const AlgebraSpec& a,
                                  const BimoduleSpec& m, const Window& w);

struct LedgerEntry {
    int cell = -1;
    QVec residual;
};

struct WindowedComplex {
    CellBasis basis;
    ColMat d;
    std::vector<LedgerEntry> ledger;

    bool clean() const { return ledger.empty(); }
    std::vector<int> degrees() const;  // sorted distinct cell degrees
};

// Assembles the exact matrix of `op` on the cell basis. The operator is
// evaluated per word and transported across the monomial slots; the ledger
// records every cell where the squared matrix fails to vanish (truncation
// clipping made visible).
WindowedComplex assemble(const CellBasis& cells,
                         const std::function<SignedVector(const Word&)>& op);

struct DegreeDims {
    int degree = 0;
    int cells = 0;
    int ker = 0;
    int im_in = 0;  // rank of the incoming differential
    int hom = 0;
};

struct GradedDims {
    int degree = 0;
    long level = 0;  // energy = level * lambda0
    int dim = 0;
};

struct HomologyReport {
    std::string space;
    Window window;
    std::vector<DegreeDims> rows;
    std::vector<GradedDims> graded;  // associated-graded (page-1) dims
    std::vector<std::string> certificates;

    int dim_at(int degree) const;
    int total_dim() const;
};

// Exact rational homology of the Q-linearized windowed complex. Refuses with
// RefusalError when the ledger is dirty inside the requested degree range.
HomologyReport homology(const WindowedComplex& c);

struct PageDims {
    int degree = 0;
    long level = 0;
    int dim = 0;
};

// Literal Z_r / B_r subspace dimensions of the energy filtration. Page r
// reports E_{r+1} of the raw filtration indexing, so page 1 is the homology
// of the energy-graded differential and page 2 its subquotient.
std::vector<PageDims> spectral_page(const WindowedComplex& c, int r);

struct Certificate {
    bool certified = false;     // true: leading term is not a graded boundary
    std::string detail;
    QVec functional;            // witness functional (certified case)
    QVec leading;               // Q-linearized leading part
    QVec preimage;              // refutation case: graded preimage
    long level = 0;
};

// Leading-term non-boundary certificate: extracts the minimal-energy graded
// part of a clean cycle z and decides by exact linear solve whether it can be
// hit at that level by cells of level <= the leading level. Returns either a
// machine-checkable killing functional or a preimage refutation.
Certificate nonboundary_certificate(const WindowedComplex& c, const SignedVector& z);

// Quotient of the complex by the span of the given cells (which must be
// closed under d up to the window); returns the projected complex on the
// complementary cells.
WindowedComplex quotient_complex(const WindowedComplex& c,
                                 const std::vector<int>& killed_cells);

// Homology rows of a bare degree-homogeneous matrix complex (used by the
// bicomplex totals, whose cells are (column, window cell) pairs). The caller
// guarantees d^2 = 0.
std::vector<DegreeDims> matrix_homology(const ColMat& d, const std::vector<int>& degrees);

// Quotient of a matrix complex by a set of coordinates; throws unless the
// killed coordinates span a subcomplex. Returns the projected matrix and the
// index map from old kept coordinates to new ones.
std::pair<ColMat, std::vector<int>> matrix_quotient(const ColMat& d,
                                                    const std::vector<char>& killed);

// Window-stable homology: per-degree dims of the image of
// H(small) -> H(big) along a cell-basis inclusion that is a chain map
// (credit windows of growing lmax). Top-of-window boundary leaks of either
// window drop out, so the stable dims are the honest truncation answer.
struct StableDims {
    std::vector<DegreeDims> rows;  // hom = stable dim; ker/im from the small side
    int dim_at(int degree) const;
    int total_dim() const;
};
StableDims persistent_dims(const WindowedComplex& small_cx, const WindowedComplex& big_cx);

}  // namespace obstructa
