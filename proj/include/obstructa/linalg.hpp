#pragma once

#include <map>
#include <optional>
#include <vector>

#include "obstructa/rational.hpp"

namespace obstructa {

// Sparse exact rational vector, indexed by cell number.
using QVec = std::map<int, Rat>;

inline void qvec_add(QVec& a, const QVec& b, const Rat& c) {
    if (c == 0) return;
    for (const auto& [i, v] : b) {
        auto it = a.find(i);
        if (it == a.end()) {
            Rat nv = v * c;
            if (nv != 0) a.emplace(i, std::move(nv));
        } else {
            it->second += v * c;
            if (it->second == 0) a.erase(it);
        }
    }
}

inline Rat qvec_dot(const QVec& a, const QVec& b) {
    Rat s = 0;
    const QVec& small = a.size() <= b.size() ? a : b;
    const QVec& big = a.size() <= b.size() ? b : a;
    for (const auto& [i, v] : small) {
        auto it = big.find(i);
        if (it != big.end()) s += v * it->second;
    }
    return s;
}

// Incremental exact row reduction holding a fully reduced (RREF) basis of the
// span of the vectors fed to it. Deterministic: pivots are the smallest
// nonzero index at insertion time, and older rows are back-reduced against
// every new pivot. Tracks combinations over the inserted vectors so that
// memberships come with explicit certificates and dependencies yield kernel
// elements.
class Rref {
  public:
    // Returns true when v was independent of the span so far. When false and
    // relation != nullptr, *relation holds coefficients over previously added
    // vectors (by insertion index) with v = sum relation_j * v_j.
    bool add(QVec v, QVec* relation = nullptr);

    int rank() const { return (int)rows_.size(); }

    // Reduces b against the basis; returns the residue and, if wanted, the
    // combination of *inserted* vectors used.
    QVec residue(QVec b, QVec* combo = nullptr) const;

    bool contains(const QVec& b) const { return residue(b).empty(); }

    // Coefficients x over the inserted vectors with sum x_j v_j = b, if any.
    std::optional<QVec> express(const QVec& b) const;

    // A functional phi (sparse over cell indices) with phi(v) = 0 for every
    // vector in the span and phi(z) != 0; empty optional when z lies in the
    // span. Certificate of non-membership, checkable by plain dot products.
    std::optional<QVec> killing_functional(const QVec& z) const;

    const std::vector<QVec>& basis() const { return rows_; }
    const std::vector<int>& pivots() const { return pivots_; }

  private:
    std::vector<QVec> rows_;    // RREF basis rows
    std::vector<QVec> combos_;  // rows_[k] = sum combos_[k][j] * inserted_j
    std::vector<int> pivots_;   // pivot index of rows_[k]
    std::map<int, int> pivot_of_;  // pivot index -> row slot
    int n_inserted_ = 0;
};

// Sparse column-major matrix of a linear map: col(j) = image of domain cell j
// as a QVec over target cells.
struct ColMat {
    int domain = 0, target = 0;
    std::vector<QVec> cols;

    void resize(int dom, int tgt) {
        domain = dom;
        target = tgt;
        cols.assign(dom, {});
    }
    QVec apply(const QVec& x) const {
        QVec y;
        for (const auto& [j, c] : x) qvec_add(y, cols.at(j), c);
        return y;
    }
    bool is_zero() const {
        for (const auto& c : cols)
            if (!c.empty()) return false;
        return true;
    }
};

int rank(const ColMat& m);
std::vector<QVec> kernel_basis(const ColMat& m);
// One solution x of M x = b, if any.
std::optional<QVec> solve(const ColMat& m, const QVec& b);
ColMat compose(const ColMat& a, const ColMat& b);  // a after b
ColMat add(const ColMat& a, const ColMat& b, const Rat& ca = 1, const Rat& cb = 1);

}  // namespace obstructa
