#include "obstructa/linalg.hpp"

namespace obstructa {

bool Rref::add(QVec v, QVec* relation) {
    QVec combo;
    combo[n_inserted_] = 1;
    // Clear every pivot index of v so new rows carry only their own pivot
    // plus non-pivot indices (the invariant residue() relies on).
    bool progress = true;
    while (progress && !v.empty()) {
        progress = false;
        for (auto it = v.begin(); it != v.end(); ++it) {
            auto hit = pivot_of_.find(it->first);
            if (hit != pivot_of_.end()) {
                Rat c = -it->second;  // pivot rows are normalized to 1
                qvec_add(v, rows_[hit->second], c);
                qvec_add(combo, combos_[hit->second], c);
                progress = true;
                break;
            }
        }
    }
    ++n_inserted_;
    if (v.empty()) {
        if (relation) {
            // v_inserted = -(combo minus its own entry) scaled appropriately:
            // combo says v + sum c_j v_j reduced to 0.
            QVec rel;
            for (const auto& [j, c] : combo)
                if (j != n_inserted_ - 1) rel[j] = -c;
            *relation = std::move(rel);
        }
        return false;
    }
    // Normalize pivot to 1.
    int p = v.begin()->first;
    Rat inv = 1 / v.begin()->second;
    if (inv != 1) {
        for (auto& [i, c] : v) c *= inv;
        for (auto& [i, c] : combo) c *= inv;
    }
    // Back-reduce older rows so the basis stays fully reduced.
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        auto it = rows_[k].find(p);
        if (it != rows_[k].end()) {
            Rat c = -it->second;
            qvec_add(rows_[k], v, c);
            qvec_add(combos_[k], combo, c);
        }
    }
    pivot_of_[p] = (int)rows_.size();
    pivots_.push_back(p);
    rows_.push_back(std::move(v));
    combos_.push_back(std::move(combo));
    return true;
}

QVec Rref::residue(QVec b, QVec* combo) const {
    // Basis rows carry their pivot plus non-pivot indices only, so every
    // subtraction clears one pivot entry of b without introducing new ones;
    // the loop terminates with a residue supported on non-pivot indices.
    QVec used;
    bool progress = true;
    while (progress && !b.empty()) {
        progress = false;
        for (auto it = b.begin(); it != b.end(); ++it) {
            auto hit = pivot_of_.find(it->first);
            if (hit != pivot_of_.end()) {
                Rat c = -it->second;
                qvec_add(b, rows_[hit->second], c);
                if (combo) qvec_add(used, combos_[hit->second], c);
                progress = true;
                break;
            }
        }
    }
    if (combo) *combo = std::move(used);
    return b;
}

std::optional<QVec> Rref::express(const QVec& b) const {
    QVec combo;
    QVec r = residue(b, &combo);
    if (!r.empty()) return std::nullopt;
    QVec x;
    for (const auto& [j, c] : combo)
        if (c != 0) x[j] = -c;  // residue subtracted combo rows: b = sum(-c) v_j
    return x;
}

std::optional<QVec> Rref::killing_functional(const QVec& z) const {
    QVec r = residue(z);
    if (r.empty()) return std::nullopt;
    int lead = r.begin()->first;  // non-pivot index by construction
    QVec phi;
    phi[lead] = 1;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        auto it = rows_[k].find(lead);
        if (it != rows_[k].end() && it->second != 0) phi[pivots_[k]] = -it->second;
    }
    return phi;
}

int rank(const ColMat& m) {
    Rref r;
    for (const auto& c : m.cols) r.add(c);
    return r.rank();
}

std::vector<QVec> kernel_basis(const ColMat& m) {
    Rref r;
    std::vector<QVec> ker;
    for (int j = 0; j < m.domain; ++j) {
        QVec rel;
        if (!r.add(m.cols[j], &rel)) {
            // col_j = sum rel_i col_i  =>  kernel vector e_j - rel.
            QVec k;
            k[j] = 1;
            for (const auto& [i, v] : rel) k[i] = -v;
            ker.push_back(std::move(k));
        }
    }
    return ker;
}

std::optional<QVec> solve(const ColMat& m, const QVec& b) {
    Rref r;
    for (const auto& c : m.cols) r.add(c);
    return r.express(b);
}

ColMat compose(const ColMat& a, const ColMat& b) {
    ColMat r;
    r.resize(b.domain, a.target);
    for (int j = 0; j < b.domain; ++j) r.cols[j] = a.apply(b.cols[j]);
    return r;
}

ColMat add(const ColMat& a, const ColMat& b, const Rat& ca, const Rat& cb) {
    ColMat r;
    r.resize(a.domain, a.target);
    for (int j = 0; j < a.domain; ++j) {
        qvec_add(r.cols[j], a.cols[j], ca);
        qvec_add(r.cols[j], b.cols[j], cb);
    }
    return r;
}

}  // namespace obstructa
