#include "obstructa/cyclic.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "obstructa/errors.hpp"
#include "obstructa/hochschild.hpp"

namespace obstructa {

SignedVector t_apply(const AlgebraSpec& a, const SignedVector& v) {
    const auto sd = a.sdegs();
    SignedVector out(v.flavor(), v.ceiling(), v.floor());
    for (const auto& [w, s] : v.coef()) {
        const std::size_t n = w.size();
        if (n <= 1) {
            out.add(w, s);
            continue;
        }
        int last = sd[w.letters[n - 1]] & 1;
        int rest = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) rest += sd[w.letters[i]] & 1;
        int sign = (last && (rest & 1)) ? -1 : 1;
        Word nw;
        nw.letters.reserve(n);
        nw.letters.push_back(w.letters[n - 1]);
        nw.letters.insert(nw.letters.end(), w.letters.begin(), w.letters.end() - 1);
        out.add(nw, sign > 0 ? s : -s);
    }
    return out;
}

SignedVector N_apply(const AlgebraSpec& a, const SignedVector& v) {
    SignedVector acc(v.flavor(), v.ceiling(), v.floor());
    for (const auto& [w, s] : v.coef()) {
        SignedVector cur(v.flavor(), v.ceiling(), v.floor());
        cur.add(w, s);
        for (std::size_t j = 0; j < std::max<std::size_t>(w.size(), 1); ++j) {
            acc = acc + cur;
            cur = t_apply(a, cur);
        }
    }
    return acc;
}

SignedVector bprime_apply(const AlgebraSpec& a, const SignedVector& v, const Window& w) {
    return dhat_apply(a, v, w);
}

SignedVector b_apply(const AlgebraSpec& a, const SignedVector& v, const Window& w) {
    static thread_local std::map<std::string, BimoduleSpec> cache;
    auto it = cache.find(a.name);
    if (it == cache.end()) it = cache.emplace(a.name, diagonal_bimodule(a)).first;
    const BimoduleSpec& diag = it->second;
    SignedVector marked(Flavor::Module, v.ceiling(), v.floor());
    for (const auto& [word, s] : v.coef()) {
        if (word.size() < 1) throw DomainError("b acts on positive-length words");
        Word mw = word;
        mw.mark = 0;
        marked.add(mw, s);
    }
    SignedVector img = dhoch_apply(a, diag, marked, w);
    SignedVector out(Flavor::Plain, v.ceiling(), v.floor());
    for (const auto& [word, s] : img.coef()) {
        Word pw = word;
        pw.mark = -1;
        out.add(pw, s);
    }
    return out;
}

WindowedComplex cyclic_complex(const AlgebraSpec& a, const Window& win) {
    CellBasis cb = enumerate_window(SpaceKind::Cyc, a, win);
    Window exact = win;
    exact.lmax = 1 << 20;
    return assemble(cb, [&a, exact](const Word& word) {
        SignedVector v(Flavor::Cyclic, exact.emax);
        v.add(word, NovikovScalar::one(exact.emax));
        return dhat_apply(a, v, exact);
    });
}

HomologyReport cyclic_homology(const AlgebraSpec& a, const Window& win) {
    auto rep = homology(cyclic_complex(a, win));
    rep.space = "cyclic";
    return rep;
}

HomologyReport cyclic_homology_quotient(const AlgebraSpec& a, const Window& win) {
    CellBasis cb = enumerate_window(SpaceKind::BarGe1, a, win);
    Window exact = win;
    exact.lmax = 1 << 20;
    WindowedComplex plain = assemble(cb, [&a, exact](const Word& word) {
        SignedVector v(Flavor::Plain, exact.emax);
        v.add(word, NovikovScalar::one(exact.emax));
        return b_apply(a, v, exact);
    });
    // image of (1 - t) on the Q-linearized window
    ColMat one_minus_t;
    one_minus_t.resize((int)cb.size(), (int)cb.size());
    for (int j = 0; j < (int)cb.size(); ++j) {
        const Cell& c = cb.cells[j];
        SignedVector v(Flavor::Plain, win.emax);
        v.add(c.word, NovikovScalar::monomial(1, c.energy, c.eexp, win.emax));
        SignedVector img = v - t_apply(a, v);
        one_minus_t.cols[j] = cb.linearize(img);
    }
    // pivot coordinates of im(1-t) get killed; the complement is a section
    // of coker(1-t)
    Rref im;
    for (const auto& col : one_minus_t.cols) im.add(col);
    // Change coordinates: quotient by im(1-t). Build the projection matrix
    // onto the non-pivot coordinates along the image.
    const auto& pivots = im.pivots();
    std::set<int> pivot_set(pivots.begin(), pivots.end());
    auto project = [&](QVec x) {
        QVec r = im.residue(std::move(x));
        return r;  // supported on non-pivot coordinates
    };
    std::vector<int> keep;
    std::vector<int> newidx((int)cb.size(), -1);
    for (int i = 0; i < (int)cb.size(); ++i)
        if (!pivot_set.count(i)) {
            newidx[i] = (int)keep.size();
            keep.push_back(i);
        }
    WindowedComplex q;
    q.basis.kind = SpaceKind::BarGe1;
    q.basis.flavor = Flavor::Plain;
    q.basis.window = win;
    q.basis.lambda0 = cb.lambda0;
    for (int i : keep) {
        const Cell& c = cb.cells[i];
        q.basis.index[{c.word, c.energy, c.eexp}] = (int)q.basis.cells.size();
        q.basis.cells.push_back(c);
    }
    q.d.resize((int)keep.size(), (int)keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
        QVec img2 = project(plain.d.cols[keep[k]]);
        for (const auto& [i, v] : img2) {
            if (newidx[i] < 0)
                throw DomainError("quotient projection left a pivot coordinate");
            q.d.cols[k][newidx[i]] = v;
        }
    }
    for (int j = 0; j < q.d.domain; ++j) {
        QVec r = q.d.apply(q.d.cols[j]);
        if (!r.empty()) q.ledger.push_back({j, std::move(r)});
    }
    auto rep = homology(q);
    rep.space = "cyclic-quotient";
    return rep;
}

DefectReport bicomplex_identities(const AlgebraSpec& a, const Window& win) {
    Window exact = win;
    exact.lmax = 1 << 20;
    DefectReport rep;
    CellBasis cb = enumerate_window(SpaceKind::BarGe1, a, win);
    std::set<Word> words;
    for (const auto& c : cb.cells) words.insert(c.word);
    for (const auto& word : words) {
        SignedVector v(Flavor::Plain, win.emax);
        v.add(word, NovikovScalar::one(win.emax));
        SignedVector r1 = b_apply(a, v - t_apply(a, v), exact) -
                          (bprime_apply(a, v, exact) -
                           t_apply(a, bprime_apply(a, v, exact)));
        if (!r1.is_zero()) rep.entries.push_back({word, r1});
        SignedVector r2 =
            bprime_apply(a, N_apply(a, v), exact) - N_apply(a, b_apply(a, v, exact));
        if (!r2.is_zero()) rep.entries.push_back({word, r2});
        SignedVector nt = N_apply(a, v - t_apply(a, v));
        SignedVector tn = N_apply(a, v) - t_apply(a, N_apply(a, v));
        if (!nt.is_zero()) rep.entries.push_back({word, nt});
        if (!tn.is_zero()) rep.entries.push_back({word, tn});
    }
    return rep;
}

namespace {

// Assembled operator matrices on a cell basis.
ColMat assemble_op(const CellBasis& cb,
                   const std::function<SignedVector(const SignedVector&)>& op) {
    ColMat m;
    m.resize((int)cb.size(), (int)cb.size());
    std::map<Word, SignedVector> cache;
    for (int j = 0; j < (int)cb.size(); ++j) {
        const Cell& c = cb.cells[j];
        auto it = cache.find(c.word);
        if (it == cache.end()) {
            SignedVector v(cb.flavor, cb.window.emax);
            v.add(c.word, NovikovScalar::one(cb.window.emax));
            it = cache.emplace(c.word, op(v)).first;
        }
        for (const auto& [w, s] : it->second.coef())
            for (const auto& t : s.terms()) {
                Rat energy = t.energy + c.energy;
                if (energy >= cb.window.emax) continue;
                int i = cb.find(w, energy, t.eexp + c.eexp);
                if (i < 0) continue;
                m.cols[j][i] += t.coeff;
                if (m.cols[j][i] == 0) m.cols[j].erase(i);
            }
    }
    return m;
}

}  // namespace

HomologyReport tsygan_total_homology(const AlgebraSpec& a, const Window& win, int columns) {
    Window exact = win;
    exact.lmax = 1 << 20;
    CellBasis cb = enumerate_window(SpaceKind::BarGe1, a, win);
    const int n = (int)cb.size();
    ColMat bmat = assemble_op(cb, [&](const SignedVector& v) { return b_apply(a, v, exact); });
    ColMat bpmat =
        assemble_op(cb, [&](const SignedVector& v) { return bprime_apply(a, v, exact); });
    ColMat tmat = assemble_op(cb, [&](const SignedVector& v) { return t_apply(a, v); });
    ColMat nmat = assemble_op(cb, [&](const SignedVector& v) { return N_apply(a, v); });

    const int total = n * columns;
    ColMat D;
    D.resize(total, total);
    std::vector<int> degrees(total);
    for (int p = 0; p < columns; ++p)
        for (int i = 0; i < n; ++i) degrees[p * n + i] = cb.cells[i].degree - p;
    auto put = [&](int pto, const QVec& img, int pfrom, int j, const Rat& scale) {
        for (const auto& [i, v] : img) {
            Rat& e = D.cols[pfrom * n + j][pto * n + i];
            e += v * scale;
            if (e == 0) D.cols[pfrom * n + j].erase(pto * n + i);
        }
    };
    for (int p = 0; p < columns; ++p)
        for (int j = 0; j < n; ++j) {
            if (p % 2 == 0) {
                put(p, bmat.cols[j], p, j, 1);
                if (p > 0) put(p - 1, nmat.cols[j], p, j, 1);
            } else {
                put(p, bpmat.cols[j], p, j, -1);
                QVec omt;
                omt[j] = 1;
                qvec_add(omt, tmat.cols[j], Rat(-1));
                put(p - 1, omt, p, j, 1);
            }
        }
    // d^2 = 0 must hold exactly on the truncation
    for (int j = 0; j < total; ++j) {
        QVec r = D.apply(D.cols[j]);
        if (!r.empty()) throw RefusalError("tsygan total complex does not square to zero");
    }
    HomologyReport rep;
    rep.space = "tsygan-total";
    rep.window = win;
    rep.rows = matrix_homology(D, degrees);
    return rep;
}

StildeData stilde_build(const AlgebraSpec& a, const Window& win) {
    if (a.unit_index() < 0) throw DomainError("s~ needs a strict unit");
    StildeData out;
    Window ext = win;
    // The kernel solves walk boundaries up the energy levels, so the
    // extension needs one length slot per level plus the s~ growth.
    int levels = 0;
    Rat l0 = a.energy_gcd();
    if (l0 > 0) {
        Rat lv = win.emax / l0;
        levels = (int)(lv.get_num().get_si() / std::max<long>(lv.get_den().get_si(), 1)) + 1;
    }
    ext.lmax = win.lmax + 3 + levels;
    out.cells = enumerate_window(SpaceKind::BarGe1, a, ext);
    const int n = (int)out.cells.size();
    out.requested.assign(n, 0);
    {
        CellBasis req = enumerate_window(SpaceKind::BarGe1, a, win);
        for (const auto& c : req.cells) {
            int i = out.cells.find(c.word, c.energy, c.eexp);
            if (i >= 0) out.requested[i] = 1;
        }
    }
    Window exact = win;
    exact.lmax = 1 << 20;
    out.dhat =
        assemble_op(out.cells, [&](const SignedVector& v) { return dhat_apply(a, v, exact); });

    // splitting C = ker(d) (+) V with V spanned by pivot cells of the matrix
    Rref colspace;
    std::vector<char> in_V(n, 0);
    for (int j = 0; j < n; ++j)
        if (colspace.add(out.dhat.cols[j])) in_V[j] = 1;
    // solver for d q = p with q supported on V
    Rref vr;
    std::vector<int> vcells;
    for (int j = 0; j < n; ++j)
        if (in_V[j]) {
            vr.add(out.dhat.cols[j]);
            vcells.push_back(j);
        }
    // kernel projection: x = x_V + x_ker with x_V supported on V solving
    // d(x_V) = d(x)
    const int unit = a.unit_index();
    auto prepend_unit = [&](const QVec& x) {
        QVec y;
        for (const auto& [i, v] : x) {
            const Cell& c = out.cells.cells[i];
            Word w = c.word;
            w.letters.insert(w.letters.begin(), (int16_t)unit);
            int k = out.cells.find(w, c.energy, c.eexp);
            if (k >= 0) y[k] += v;
        }
        return y;
    };
    SignedVector m0 = a.m0(win.emax);
    auto prepend_m0_unit = [&](const QVec& x) {
        QVec y;
        for (const auto& [i, v] : x) {
            const Cell& c = out.cells.cells[i];
            for (const auto& [mw, ms] : m0.coef())
                for (const auto& t : ms.terms()) {
                    Word w = c.word;
                    w.letters.insert(w.letters.begin(), (int16_t)unit);
                    w.letters.insert(w.letters.begin(), mw.letters[0]);
                    Rat energy = c.energy + t.energy;
                    if (energy >= win.emax) continue;
                    int k = out.cells.find(w, energy, c.eexp + t.eexp);
                    if (k >= 0) y[k] += v * t.coeff;
                }
        }
        return y;
    };

    out.splain.resize(n, n);
    out.stilde.resize(n, n);
    // Columns whose kernel solve fails at the extension boundary stay zero;
    // the identity report exposes them if they are ever reached from the
    // requested window.
    for (int j = 0; j < n; ++j) {
        QVec e;
        e[j] = 1;
        out.splain.cols[j] = prepend_unit(e);
        // decompose e_j = x_V + x_ker along d
        QVec dj = out.dhat.cols[j];
        QVec xV;
        if (!dj.empty()) {
            auto sol = vr.express(dj);
            if (!sol) continue;
            for (const auto& [k, v] : *sol) xV[vcells[k]] = v;
        }
        QVec xker = e;
        qvec_add(xker, xV, Rat(-1));
        // s~ = s on the V part
        QVec acc = prepend_unit(xV);
        // kernel part p: q with d q = p, q in V; s~(p) = I p - m0 I q
        if (!xker.empty()) {
            // p is in the kernel; p = d(q) solvable iff p lies in im(d)
            auto qsol = vr.express(xker);
            if (!qsol) continue;
            QVec q;
            for (const auto& [k, v] : *qsol) q[vcells[k]] = v;
            qvec_add(acc, prepend_unit(xker), Rat(1));
            qvec_add(acc, prepend_m0_unit(q), Rat(-1));
        }
        out.stilde.cols[j] = std::move(acc);
    }

    // identity report on requested cells
    for (int j = 0; j < n; ++j) {
        if (!out.requested[j]) continue;
        QVec lhs = out.stilde.apply(out.dhat.cols[j]);
        qvec_add(lhs, out.dhat.apply(out.stilde.cols[j]), Rat(1));
        QVec e;
        e[j] = 1;
        qvec_add(lhs, e, Rat(-1));
        if (!lhs.empty()) {
            SignedVector marker(Flavor::Plain, win.emax);
            for (const auto& [i, v] : lhs) {
                const Cell& c = out.cells.cells[i];
                marker.add(c.word, NovikovScalar::monomial(v, c.energy, c.eexp, win.emax));
            }
            out.identity.entries.push_back({out.cells.cells[j].word, marker});
        }
    }
    out.ok = out.identity.empty();
    return out;
}

ConnesBData connes_B(const AlgebraSpec& a, const Window& win) {
    ConnesBData out;
    out.base = stilde_build(a, win);
    if (!out.base.ok) throw RefusalError("s~ construction failed; B unavailable");
    const CellBasis& cb = out.base.cells;
    Window exact = win;
    exact.lmax = 1 << 20;
    ColMat tmat = assemble_op(cb, [&](const SignedVector& v) { return t_apply(a, v); });
    ColMat nmat = assemble_op(cb, [&](const SignedVector& v) { return N_apply(a, v); });
    out.b = assemble_op(cb, [&](const SignedVector& v) { return b_apply(a, v, exact); });
    const int n = (int)cb.size();
    out.B.resize(n, n);
    for (int j = 0; j < n; ++j) {
        QVec x = nmat.cols[j];
        x = out.base.stilde.apply(x);
        QVec y = x;
        qvec_add(y, tmat.apply(x), Rat(-1));
        out.B.cols[j] = std::move(y);
    }
    out.b_squared_zero = true;
    out.B_squared_zero = true;
    out.anticommute = true;
    for (int j = 0; j < n; ++j) {
        if (!out.base.requested[j]) continue;
        if (!out.b.apply(out.b.cols[j]).empty()) out.b_squared_zero = false;
        if (!out.B.apply(out.B.cols[j]).empty()) out.B_squared_zero = false;
        QVec anti = out.b.apply(out.B.cols[j]);
        qvec_add(anti, out.B.apply(out.b.cols[j]), Rat(1));
        if (!anti.empty()) out.anticommute = false;
    }
    return out;
}

HomologyReport bb_total_homology(const AlgebraSpec& a, const Window& win, int columns,
                                 bool normalized) {
    // Column p keeps cells whose length budget allows p more B applications.
    Window wide = win;
    wide.lmax = win.lmax + 2 * (columns - 1);
    ConnesBData data = connes_B(a, wide);
    const CellBasis& cb = data.base.cells;
    const int n = (int)cb.size();

    std::vector<char> reduced_ok(n, 1);
    if (normalized) {
        const int u = a.unit_index();
        for (int i = 0; i < n; ++i) {
            const Word& w = cb.cells[i].word;
            for (std::size_t p = 1; p < w.size(); ++p)
                if (w.letters[p] == (int16_t)u) reduced_ok[i] = 0;
        }
    }

    // membership per column: length <= win.lmax + 2*(columns-1-p) (+ credit)
    auto in_column = [&](int p, int i) {
        if (normalized && !reduced_ok[i]) return false;
        const Cell& c = cb.cells[i];
        int budget = win.lmax + 2 * (columns - 1 - p);
        int len = (int)c.word.size();
        if (len <= budget) return true;
        if (win.credit_length && cb.lambda0 > 0) {
            Rat credit = c.energy / cb.lambda0;
            return Rat(len) - credit <= budget;
        }
        return false;
    };
    std::vector<std::vector<int>> colcells(columns);
    std::vector<std::vector<int>> colindex(columns, std::vector<int>(n, -1));
    int total = 0;
    for (int p = 0; p < columns; ++p)
        for (int i = 0; i < n; ++i)
            if (in_column(p, i)) {
                colindex[p][i] = total++;
                colcells[p].push_back(i);
            }
    ColMat D;
    D.resize(total, total);
    std::vector<int> degrees(total);
    for (int p = 0; p < columns; ++p)
        for (int i : colcells[p]) degrees[colindex[p][i]] = cb.cells[i].degree - 2 * p;
    // b within the column, B to the previous column; in the normalized case
    // both are projected onto reduced coordinates.
    for (int p = 0; p < columns; ++p)
        for (int i : colcells[p]) {
            int j = colindex[p][i];
            for (const auto& [k, v] : data.b.cols[i])
                if (colindex[p][k] >= 0) D.cols[j][colindex[p][k]] = v;
            if (p > 0)
                for (const auto& [k, v] : data.B.cols[i])
                    if (colindex[p - 1][k] >= 0) D.cols[j][colindex[p - 1][k]] = v;
        }
    for (int j = 0; j < total; ++j) {
        QVec r = D.apply(D.cols[j]);
        if (!r.empty())
            throw RefusalError(std::string(normalized ? "normalized " : "") +
                               "(b,B) total complex does not square to zero");
    }
    HomologyReport rep;
    rep.space = normalized ? "bB-total-normalized" : "bB-total";
    rep.window = win;
    rep.rows = matrix_homology(D, degrees);
    return rep;
}

bool ConnesSequenceReport::all_exact() const {
    for (const auto& n : nodes)
        if (!n.exact_at_total || !n.exact_at_quot || !n.exact_at_sub) return false;
    return true;
}

ConnesSequenceReport connes_sequence_check(const AlgebraSpec& a, const Window& win,
                                           int columns) {
    if (columns < 3) throw ConfigError("connes sequence needs at least 3 columns");
    Window exact = win;
    exact.lmax = 1 << 20;
    CellBasis cb = enumerate_window(SpaceKind::BarGe1, a, win);
    const int n = (int)cb.size();
    ColMat bmat = assemble_op(cb, [&](const SignedVector& v) { return b_apply(a, v, exact); });
    ColMat bpmat =
        assemble_op(cb, [&](const SignedVector& v) { return bprime_apply(a, v, exact); });
    ColMat tmat = assemble_op(cb, [&](const SignedVector& v) { return t_apply(a, v); });
    ColMat nmat = assemble_op(cb, [&](const SignedVector& v) { return N_apply(a, v); });

    const int total = n * columns;
    ColMat D;
    D.resize(total, total);
    std::vector<int> degrees(total);
    for (int p = 0; p < columns; ++p)
        for (int i = 0; i < n; ++i) degrees[p * n + i] = cb.cells[i].degree - p;
    auto put = [&](int pto, const QVec& img, int pfrom, int j, const Rat& scale) {
        for (const auto& [i, v] : img) {
            Rat& e = D.cols[pfrom * n + j][pto * n + i];
            e += v * scale;
            if (e == 0) D.cols[pfrom * n + j].erase(pto * n + i);
        }
    };
    for (int p = 0; p < columns; ++p)
        for (int j = 0; j < n; ++j) {
            if (p % 2 == 0) {
                put(p, bmat.cols[j], p, j, 1);
                if (p > 0) put(p - 1, nmat.cols[j], p, j, 1);
            } else {
                put(p, bpmat.cols[j], p, j, -1);
                QVec omt;
                omt[j] = 1;
                qvec_add(omt, tmat.cols[j], Rat(-1));
                put(p - 1, omt, p, j, 1);
            }
        }
    for (int j = 0; j < total; ++j)
        if (!D.apply(D.cols[j]).empty())
            throw RefusalError("tsygan total complex does not square to zero");

    // sub = columns {0,1}, quotient = columns {2..}
    auto in_sub = [&](int idx) { return idx < 2 * n; };
    std::map<int, std::vector<int>> by_deg;
    for (int i = 0; i < total; ++i) by_deg[degrees[i]].push_back(i);

    // cycle/boundary data per degree for the three complexes
    struct HData {
        std::vector<QVec> cycles;  // kernel basis, in total coordinates
        Rref boundaries;           // image of D from one degree below
        int dim = 0;
    };
    auto restrict_cols = [&](const std::vector<int>& cells, bool subpart, bool quotpart) {
        // returns the differential columns of the requested part
        std::vector<std::pair<int, QVec>> cols;
        for (int j : cells) {
            if (subpart && !in_sub(j)) continue;
            if (quotpart && in_sub(j)) continue;
            QVec c;
            for (const auto& [i, v] : D.cols[j]) {
                if (subpart && !in_sub(i)) continue;  // sub is closed anyway
                if (quotpart && in_sub(i)) continue;  // quotient projection
                c[i] = v;
            }
            cols.push_back({j, std::move(c)});
        }
        return cols;
    };
    auto build = [&](int deg, bool subpart, bool quotpart) {
        HData h;
        auto cols = restrict_cols(by_deg.count(deg) ? by_deg[deg] : std::vector<int>{},
                                  subpart, quotpart);
        Rref r;
        std::vector<int> order;
        for (auto& [j, c] : cols) {
            QVec rel;
            if (!r.add(c, &rel)) {
                QVec k;
                k[j] = 1;
                for (const auto& [idx, v] : rel) k[cols[idx].first] = -v;
                h.cycles.push_back(std::move(k));
            }
        }
        auto below = restrict_cols(by_deg.count(deg - 1) ? by_deg[deg - 1]
                                                         : std::vector<int>{},
                                   subpart, quotpart);
        for (auto& [j, c] : below) h.boundaries.add(c);
        Rref joint = h.boundaries;
        int indep = 0;
        for (auto& z : h.cycles)
            if (joint.add(z)) ++indep;
        h.dim = indep;
        return h;
    };

    ConnesSequenceReport rep;
    for (const auto& [deg, cells] : by_deg) {
        HData hs = build(deg, true, false);
        HData ht = build(deg, false, false);
        HData hq = build(deg, false, true);
        HData hs1 = build(deg + 1, true, false);

        // maps on homology: i_* (inclusion), p_* (projection), delta (lift)
        auto image_rank = [&](const std::vector<QVec>& srcCycles, bool proj_quot,
                              bool lift_delta, Rref boundaries_target) {
            Rref joint = boundaries_target;
            int rank = 0;
            for (const auto& z : srcCycles) {
                QVec img;
                if (lift_delta) {
                    img = D.apply(z);  // lands in the sub part
                    QVec filtered;
                    for (const auto& [i, v] : img)
                        if (in_sub(i)) filtered[i] = v;
                    img = std::move(filtered);
                } else if (proj_quot) {
                    for (const auto& [i, v] : z)
                        if (!in_sub(i)) img[i] = v;
                } else {
                    img = z;
                }
                if (joint.add(img)) ++rank;
            }
            return rank;
        };
        ConnesSequenceReport::Node node;
        node.degree = deg;
        node.dim_sub = hs.dim;
        node.dim_total = ht.dim;
        node.dim_quot = hq.dim;
        node.rank_i = image_rank(hs.cycles, false, false, ht.boundaries);
        node.rank_p = image_rank(ht.cycles, true, false, hq.boundaries);
        node.rank_delta = image_rank(hq.cycles, false, true, hs1.boundaries);
        // exactness: rank(im into node) + rank(out of node) = dim(node)
        node.exact_at_total = node.rank_i + node.rank_p == node.dim_total;
        node.exact_at_quot = node.rank_p + node.rank_delta == node.dim_quot;
        // at sub in degree deg+1: incoming delta from quotient deg, outgoing i
        HData ht1 = build(deg + 1, false, false);
        int rank_i1 = image_rank(hs1.cycles, false, false, ht1.boundaries);
        node.exact_at_sub = node.rank_delta + rank_i1 == hs1.dim;
        rep.nodes.push_back(node);
    }
    return rep;
}

AlphaReport alpha_build(const AlgebraSpec& a, const Window& win) {
    AlphaReport out;
    const int u = a.unit_index();
    if (u < 0) throw DomainError("alpha needs a strict unit");
    SignedVector m0 = a.m0(win.emax);
    if (m0.is_zero()) throw DomainError("alpha needs m_0 != 0");
    Valuation vm = m0.valuation();

    SignedVector unit(Flavor::Plain, win.emax);
    unit.add(plain_word({(int16_t)u}), NovikovScalar::one(win.emax));
    SignedVector block = tensor(unit, m0);

    // k_max from the ceiling: alpha_{2k+1} carries k copies of m_0
    int kmax = 0;
    {
        SignedVector p = block;
        while (!p.is_zero()) {
            ++kmax;
            p = tensor(p, block);
        }
    }
    out.kmax = kmax;

    Window exact = win;
    exact.lmax = 1 << 20;
    SignedVector alpha(Flavor::Plain, win.emax);
    SignedVector power(Flavor::Plain, win.emax);
    power.add(plain_word({}), NovikovScalar::one(win.emax));
    std::vector<SignedVector> alphas;  // alpha_{2k+1} as plain invariant sums
    for (int k = 0; ; ++k) {
        SignedVector word_k = tensor(power, unit);  // (L m0)^k L
        if (word_k.is_zero()) break;
        SignedVector ak = N_apply(a, word_k);
        alphas.push_back(ak);
        alpha.add_scaled(ak, Rat(k % 2 == 0 ? 1 : -1));
        power = tensor(power, block);
    }
    out.alpha = alpha;
    out.alpha_cyc = read_off_canonical(alpha, Flavor::Cyclic);

    // per-k identity m-hat_0(alpha_{2k-1}) = m-hat_2(alpha_{2k+1})
    out.per_k_ok = true;
    auto apply_arity = [&](const SignedVector& v, int arity) {
        SignedVector r(Flavor::Plain, win.emax);
        for (const auto& [w, s] : v.coef())
            r.add_scaled(dhat_word(a, w, win.emax, 0, win.kmax, arity), s);
        return r;
    };
    for (std::size_t k = 1; k < alphas.size(); ++k) {
        SignedVector lhs = apply_arity(alphas[k - 1], 0);
        SignedVector rhs = apply_arity(alphas[k], 2);
        if (!(lhs == rhs)) out.per_k_ok = false;
    }
    out.cycle_ok = dhat_apply(a, alpha, exact).is_zero();

    auto cx = cyclic_complex(a, win);
    if (cx.clean()) out.certificate = nonboundary_certificate(cx, out.alpha_cyc);
    return out;
}

}  // namespace obstructa
