#include "obstructa/window.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "obstructa/algebra.hpp"
#include "obstructa/errors.hpp"

namespace obstructa {

std::string space_name(SpaceKind k) {
    switch (k) {
        case SpaceKind::Bar: return "bar";
        case SpaceKind::BarGe1: return "bar>=1";
        case SpaceKind::Cyc: return "cyc";
        case SpaceKind::Sym: return "sym";
        case SpaceKind::SymGe1: return "sym>=1";
        case SpaceKind::Hochschild: return "hochschild";
        case SpaceKind::CEChain: return "ce-chain";
    }
    return "?";
}

std::vector<std::pair<Rat, long>> class_monoid(const std::vector<ClassInfo>& classes,
                                               const Rat& emax, std::size_t cap) {
    std::set<std::pair<Rat, long>> slots;
    slots.insert({Rat(0), 0L});
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::pair<Rat, long>> cur(slots.begin(), slots.end());
        for (const auto& s : cur)
            for (const auto& c : classes) {
                if (c.energy == 0) continue;
                std::pair<Rat, long> n{s.first + c.energy, s.second + c.eexp()};
                if (n.first >= emax) continue;
                if (slots.insert(n).second) {
                    grew = true;
                    if (slots.size() > cap)
                        throw ResourceError("class monoid exceeds cap", slots.size());
                }
            }
    }
    return {slots.begin(), slots.end()};
}

int CellBasis::find(const Word& w, const Rat& energy, long eexp) const {
    auto it = index.find({w, energy, eexp});
    return it == index.end() ? -1 : it->second;
}

QVec CellBasis::linearize(const SignedVector& v, int* clipped) const {
    QVec out;
    for (const auto& [w, s] : v.coef())
        for (const auto& t : s.terms()) {
            int i = find(w, t.energy, t.eexp);
            if (i < 0) {
                if (clipped) ++*clipped;
                continue;
            }
            out[i] += t.coeff;
            if (out[i] == 0) out.erase(i);
        }
    return out;
}

std::string CellBasis::cell_name(int i, const std::vector<std::string>& alg_ids,
                                 const std::vector<std::string>& mod_ids) const {
    const Cell& c = cells.at(i);
    std::ostringstream os;
    os << format_word(c.word, flavor, alg_ids, mod_ids);
    if (c.energy != 0) os << "@T^" << to_string(c.energy);
    if (c.eexp != 0) os << "@e^" << c.eexp;
    return os.str();
}

namespace {

struct EnumCtx {
    SpaceKind kind;
    const AlgebraSpec* alg = nullptr;
    const BimoduleSpec* mod = nullptr;
    Window win;
    std::vector<int> alg_sdeg, mod_sdeg;

    bool word_ok(const Word& w) const {
        switch (kind) {
            case SpaceKind::Bar:
                return true;
            case SpaceKind::BarGe1:
                return w.size() >= 1;
            case SpaceKind::Cyc: {
                if (w.size() < 1) return false;
                Canon c = canonicalize(w, Flavor::Cyclic, pos_degs(w, alg_sdeg));
                return !c.zero && c.rep == w && c.sign == 1;
            }
            case SpaceKind::Sym:
            case SpaceKind::SymGe1: {
                if (kind == SpaceKind::SymGe1 && w.size() < 1) return false;
                Canon c = canonicalize(w, Flavor::Symmetric, pos_degs(w, alg_sdeg));
                return !c.zero && c.rep == w;
            }
            case SpaceKind::Hochschild:
                return w.marked() && w.mark == 0;
            case SpaceKind::CEChain: {
                if (!w.marked() || w.mark != 0) return false;
                Canon c = canonicalize(w, Flavor::ModuleSym,
                                       pos_degs(w, alg_sdeg, mod_sdeg));
                return !c.zero && c.rep == w;
            }
        }
        return false;
    }

    int degree_of(const Word& w, long eexp) const {
        int d = 0;
        for (std::size_t i = 0; i < w.size(); ++i)
            d += ((int)i == w.mark) ? mod_sdeg[w.letters[i]] : alg_sdeg[w.letters[i]];
        d += 2 * (int)eexp;
        if (alg && alg->z2_mode) d = ((d % 2) + 2) % 2;
        return d;
    }
};

Flavor flavor_of(SpaceKind k) {
    switch (k) {
        case SpaceKind::Bar:
        case SpaceKind::BarGe1: return Flavor::Plain;
        case SpaceKind::Cyc: return Flavor::Cyclic;
        case SpaceKind::Sym:
        case SpaceKind::SymGe1: return Flavor::Symmetric;
        case SpaceKind::Hochschild: return Flavor::Module;
        case SpaceKind::CEChain: return Flavor::ModuleSym;
    }
    return Flavor::Plain;
}

CellBasis enumerate_impl(EnumCtx ctx) {
    CellBasis basis;
    basis.kind = ctx.kind;
    basis.flavor = flavor_of(ctx.kind);
    basis.window = ctx.win;
    basis.lambda0 = ctx.alg->energy_gcd();

    auto slots = class_monoid(ctx.alg->classes, ctx.win.emax, ctx.win.effective_cap());
    long max_level = 0;
    if (ctx.win.credit_length && basis.lambda0 > 0)
        for (const auto& s : slots) {
            Rat lvl = s.first / basis.lambda0;
            max_level = std::max(max_level, (long)lvl.get_num().get_si());
        }
    const int abs_lmax = ctx.win.lmax + (int)max_level;

    const bool marked = ctx.kind == SpaceKind::Hochschild || ctx.kind == SpaceKind::CEChain;
    const int nletters = (int)ctx.alg->basis.size();
    const int nmod = marked ? (int)ctx.mod->module_basis.size() : 0;
    const std::size_t cap = ctx.win.effective_cap();

    std::vector<Word> words;
    if (marked) {
        std::vector<std::vector<int16_t>> tails{{}};
        std::vector<std::vector<int16_t>> prev = tails;
        for (int len = 1; len < abs_lmax; ++len) {
            std::vector<std::vector<int16_t>> next;
            for (const auto& p : prev)
                for (int16_t l = 0; l < nletters; ++l) {
                    auto q = p;
                    q.push_back(l);
                    next.push_back(std::move(q));
                }
            tails.insert(tails.end(), next.begin(), next.end());
            prev = std::move(next);
            if ((tails.size() + 1) * (std::size_t)std::max(nmod, 1) > cap * 4)
                throw ResourceError("window enumeration exceeds cap", tails.size());
        }
        for (int16_t v = 0; v < nmod; ++v)
            for (const auto& t : tails) {
                Word w = marked_word(v, t);
                if (ctx.word_ok(w)) words.push_back(std::move(w));
            }
    } else {
        std::vector<Word> prev{plain_word({})};
        if (ctx.word_ok(prev[0])) words.push_back(prev[0]);
        for (int len = 1; len <= abs_lmax; ++len) {
            std::vector<Word> next;
            for (const auto& p : prev)
                for (int16_t l = 0; l < nletters; ++l) {
                    Word w = p;
                    w.letters.push_back(l);
                    next.push_back(std::move(w));
                }
            for (const auto& w : next)
                if (ctx.word_ok(w)) words.push_back(w);
            prev = std::move(next);
            if (prev.size() > cap * 8)
                throw ResourceError("window enumeration exceeds cap", prev.size());
        }
    }

    std::sort(words.begin(), words.end());
    for (const auto& w : words)
        for (const auto& s : slots) {
            int len = (int)w.size();
            if (ctx.win.credit_length && basis.lambda0 > 0) {
                Rat credit = s.first / basis.lambda0;
                if (Rat(len) - credit > ctx.win.lmax) continue;
            } else if (len > ctx.win.lmax) {
                continue;
            }
            int deg = ctx.degree_of(w, s.second);
            if (ctx.win.deg_lo && deg < *ctx.win.deg_lo) continue;
            if (ctx.win.deg_hi && deg > *ctx.win.deg_hi) continue;
            Cell c{w, s.first, s.second, deg};
            basis.index[{w, s.first, s.second}] = (int)basis.cells.size();
            basis.cells.push_back(std::move(c));
            if (basis.cells.size() > cap)
                throw ResourceError("window cell count exceeds cap", basis.cells.size());
        }
    return basis;
}

}  // namespace

CellBasis enumerate_window(SpaceKind kind, const AlgebraSpec& a, const Window& w) {
    EnumCtx ctx;
    ctx.kind = kind;
    ctx.alg = &a;
    ctx.win = w;
    ctx.alg_sdeg = a.sdegs();
    return enumerate_impl(std::move(ctx));
}

CellBasis enumerate_window_module(SpaceKind kind, const AlgebraSpec& a,
                                  const BimoduleSpec& m, const Window& w) {
    EnumCtx ctx;
    ctx.kind = kind;
    ctx.alg = &a;
    ctx.mod = &m;
    ctx.win = w;
    ctx.alg_sdeg = a.sdegs();
    ctx.mod_sdeg = m.mod_sdegs();
    return enumerate_impl(std::move(ctx));
}

std::vector<int> WindowedComplex::degrees() const {
    std::set<int> ds;
    for (const auto& c : basis.cells) ds.insert(c.degree);
    return {ds.begin(), ds.end()};
}

WindowedComplex assemble(const CellBasis& cells,
                         const std::function<SignedVector(const Word&)>& op) {
    WindowedComplex cx;
    cx.basis = cells;
    cx.d.resize((int)cells.size(), (int)cells.size());

    std::map<Word, SignedVector> cache;
    for (int j = 0; j < (int)cells.cells.size(); ++j) {
        const Cell& c = cells.cells[j];
        auto it = cache.find(c.word);
        if (it == cache.end()) it = cache.emplace(c.word, op(c.word)).first;
        const SignedVector& img = it->second;
        QVec& col = cx.d.cols[j];
        for (const auto& [w, s] : img.coef())
            for (const auto& t : s.terms()) {
                Rat energy = t.energy + c.energy;
                long ee = t.eexp + c.eexp;
                if (energy >= cells.window.emax) continue;
                int i = cells.find(w, energy, ee);
                if (i < 0) continue;  // window projection
                col[i] += t.coeff;
                if (col[i] == 0) col.erase(i);
            }
    }
    for (int j = 0; j < cx.d.domain; ++j) {
        QVec r = cx.d.apply(cx.d.cols[j]);
        if (!r.empty()) cx.ledger.push_back({j, std::move(r)});
    }
    return cx;
}

int HomologyReport::dim_at(int degree) const {
    for (const auto& r : rows)
        if (r.degree == degree) return r.hom;
    return 0;
}

int HomologyReport::total_dim() const {
    int t = 0;
    for (const auto& r : rows) t += r.hom;
    return t;
}

HomologyReport homology(const WindowedComplex& c) {
    HomologyReport rep;
    rep.space = space_name(c.basis.kind);
    rep.window = c.basis.window;

    std::set<int> dirty;
    for (const auto& e : c.ledger) dirty.insert(c.basis.cells[e.cell].degree + 1);
    if (!c.ledger.empty()) {
        const auto lo = c.basis.window.deg_lo;
        const auto hi = c.basis.window.deg_hi;
        bool in_range = false;
        for (int d : dirty)
            if ((!lo || d >= *lo) && (!hi || d <= *hi)) in_range = true;
        if (in_range) {
            std::ostringstream os;
            os << "dirty defect ledger (" << c.ledger.size() << " cells;";
            for (std::size_t i = 0; i < std::min<std::size_t>(c.ledger.size(), 4); ++i)
                os << " cell#" << c.ledger[i].cell;
            os << "): homology refused";
            throw RefusalError(os.str());
        }
    }

    std::map<int, std::vector<int>> by_deg;
    for (int i = 0; i < (int)c.basis.cells.size(); ++i)
        by_deg[c.basis.cells[i].degree].push_back(i);

    // Degree homogeneity guard: every entry must raise the degree by 1.
    for (int j = 0; j < c.d.domain; ++j)
        for (const auto& [i, v] : c.d.cols[j])
            if (c.basis.cells[i].degree != c.basis.cells[j].degree + 1)
                throw DomainError("assembled differential is not degree-homogeneous");

    std::map<int, int> rank_from;  // degree -> rank of D restricted to that degree
    for (const auto& [deg, cellsd] : by_deg) {
        Rref r;
        for (int j : cellsd) r.add(c.d.cols[j]);
        rank_from[deg] = r.rank();
    }
    for (const auto& [deg, cellsd] : by_deg) {
        if (dirty.count(deg)) continue;
        DegreeDims row;
        row.degree = deg;
        row.cells = (int)cellsd.size();
        row.ker = row.cells - rank_from[deg];
        auto below = rank_from.find(deg - 1);
        row.im_in = below == rank_from.end() ? 0 : below->second;
        row.hom = row.ker - row.im_in;
        rep.rows.push_back(row);
    }

    // Associated-graded dims: homology of the level-preserving part of D per
    // (degree, level) block. Matches page 1 of the energy spectral sequence.
    bool on_grid = true;
    for (const auto& cell : c.basis.cells) {
        if (cell.energy == 0) continue;
        if (c.basis.lambda0 == 0 || !is_integer(cell.energy / c.basis.lambda0))
            on_grid = false;
    }
    if (on_grid) {
        auto level_of = [&](int i) -> long {
            if (c.basis.cells[i].energy == 0) return 0;
            Rat lv = c.basis.cells[i].energy / c.basis.lambda0;
            return lv.get_num().get_si();
        };
        std::map<std::pair<int, long>, std::vector<int>> blocks;
        for (int i = 0; i < (int)c.basis.cells.size(); ++i)
            blocks[{c.basis.cells[i].degree, level_of(i)}].push_back(i);
        std::map<std::pair<int, long>, int> grank;
        for (const auto& [key, cellsb] : blocks) {
            Rref r;
            for (int j : cellsb) {
                QVec col;
                for (const auto& [i, v] : c.d.cols[j])
                    if (level_of(i) == key.second) col[i] = v;
                r.add(col);
            }
            grank[key] = r.rank();
        }
        for (const auto& [key, cellsb] : blocks) {
            if (dirty.count(key.first)) continue;
            int ker = (int)cellsb.size() - grank[key];
            auto below = grank.find({key.first - 1, key.second});
            int im = below == grank.end() ? 0 : below->second;
            if (ker - im != 0)
                rep.graded.push_back({key.first, key.second, ker - im});
        }
    }
    return rep;
}

std::vector<PageDims> spectral_page(const WindowedComplex& c, int r) {
    if (r != 1 && r != 2) throw ConfigError("spectral pages r=1,2 only");
    const Rat l0 = c.basis.lambda0;
    // Level of each cell on the lambda0 grid.
    std::vector<long> level(c.basis.cells.size(), 0);
    long max_level = 0;
    for (std::size_t i = 0; i < c.basis.cells.size(); ++i) {
        const Rat& en = c.basis.cells[i].energy;
        if (en == 0) continue;
        if (l0 == 0 || !is_integer(en / l0))
            throw ConfigError("cell energies are not multiples of a common lambda0; "
                              "page grading undefined");
        Rat lv = en / l0;
        level[i] = lv.get_num().get_si();
        max_level = std::max(max_level, level[i]);
    }
    if (!c.ledger.empty()) throw RefusalError("spectral pages refused on a dirty ledger");

    const int rp = r + 1;  // literal Z_{r+1}/B_{r+1} of the filtration formulas
    std::map<int, std::vector<int>> by_deg;
    for (int i = 0; i < (int)c.basis.cells.size(); ++i)
        by_deg[c.basis.cells[i].degree].push_back(i);

    auto filtered = [&](int deg, long q) {
        std::vector<int> v;
        auto it = by_deg.find(deg);
        if (it == by_deg.end()) return v;
        for (int i : it->second)
            if (level[i] >= q) v.push_back(i);
        return v;
    };
    auto proj_rank = [&](const std::vector<int>& domain, long below) {
        // rank of proj_{level < below} o D restricted to the domain cells
        Rref rr;
        for (int j : domain) {
            QVec col;
            for (const auto& [i, v] : c.d.cols[j])
                if (level[i] < below) col[i] = v;
            rr.add(col);
        }
        return rr.rank();
    };
    auto kernel_of_proj = [&](const std::vector<int>& domain, long below) {
        ColMat m;
        m.resize((int)domain.size(), (int)c.basis.cells.size());
        for (std::size_t k = 0; k < domain.size(); ++k)
            for (const auto& [i, v] : c.d.cols[domain[k]])
                if (level[i] < below) m.cols[k][i] = v;
        auto ker = kernel_basis(m);
        // back to cell coordinates
        std::vector<QVec> out;
        for (const auto& kv : ker) {
            QVec x;
            for (const auto& [k, v] : kv) x[domain[k]] = v;
            out.push_back(std::move(x));
        }
        return out;
    };

    std::vector<PageDims> page;
    for (const auto& [deg, cells_p] : by_deg) {
        for (long q = 0; q <= max_level; ++q) {
            auto Fq = filtered(deg, q);
            if (Fq.empty()) continue;
            // Z_{rp}^{p,q}
            int dimZ;
            {
                int rk_q = proj_rank(Fq, q + rp - 1);
                int dimA = (int)Fq.size() - rk_q;
                if (rp == 2) {
                    dimZ = dimA;
                } else {
                    auto Fq1 = filtered(deg, q + 1);
                    int rk_q1 = proj_rank(Fq1, q + rp - 1);
                    dimZ = dimA + rk_q1;  // dimA + dimF^{q+1} - dim(A cap F^{q+1})
                }
            }
            // B_{rp}^{p,q} = (D(F^{q-rp+2} C^{p-1}) cap F^q) + F^{q+1}
            int dimB;
            {
                auto dom = filtered(deg - 1, q - rp + 2);
                auto K = kernel_of_proj(dom, q);  // x with Dx in F^q
                Rref span;
                for (const auto& x : K) span.add(c.d.apply(x));
                for (int i : filtered(deg, q + 1)) {
                    QVec e;
                    e[i] = 1;
                    span.add(e);
                }
                dimB = span.rank();
            }
            PageDims pd;
            pd.degree = deg;
            pd.level = q;
            pd.dim = dimZ - dimB;
            if (pd.dim != 0 || q == 0) page.push_back(pd);
        }
    }
    return page;
}

Certificate nonboundary_certificate(const WindowedComplex& c, const SignedVector& z) {
    Certificate cert;
    int clipped = 0;
    QVec zq = c.basis.linearize(z, &clipped);
    if (clipped > 0)
        throw DomainError("cycle has components outside the window basis");
    if (zq.empty()) {
        cert.certified = false;
        cert.detail = "zero is a boundary";
        return cert;
    }
    if (!c.ledger.empty()) throw RefusalError("certificate refused on a dirty ledger");
    QVec dz = c.d.apply(zq);
    if (!dz.empty()) throw DomainError("input is not a cycle in the window");

    int deg = c.basis.cells[zq.begin()->first].degree;
    for (const auto& [i, v] : zq)
        if (c.basis.cells[i].degree != deg)
            throw DomainError("certificate needs a degree-homogeneous cycle");

    const Rat l0 = c.basis.lambda0;
    auto level_of = [&](int i) -> Rat {
        return l0 == 0 ? c.basis.cells[i].energy : c.basis.cells[i].energy / l0;
    };
    Rat lead = level_of(zq.begin()->first);
    for (const auto& [i, v] : zq) lead = std::min(lead, level_of(i));
    QVec z0;
    for (const auto& [i, v] : zq)
        if (level_of(i) == lead) z0[i] = v;
    cert.leading = z0;
    cert.level = lead.get_num().get_si();

    // Can cells of level <= lead (one degree down) hit z0 at the leading
    // level? Classes have energy >= 0, so no higher level reaches down; this
    // is the level-by-level leading-order argument made exact.
    std::vector<int> domain;
    for (int i = 0; i < (int)c.basis.cells.size(); ++i)
        if (c.basis.cells[i].degree == deg - 1 && level_of(i) <= lead) domain.push_back(i);
    Rref rr;
    std::vector<QVec> cols;
    for (int j : domain) {
        QVec col;
        for (const auto& [i, v] : c.d.cols[j])
            if (level_of(i) == lead) col[i] = v;
        cols.push_back(col);
        rr.add(col);
    }
    auto sol = rr.express(z0);
    if (sol) {
        cert.certified = false;
        for (const auto& [k, v] : *sol) cert.preimage[domain[k]] = v;
        cert.detail = "leading part is a graded boundary (preimage refutation)";
        return cert;
    }
    auto phi = rr.killing_functional(z0);
    cert.certified = true;
    cert.functional = *phi;
    std::ostringstream os;
    os << "leading part at level " << to_string(lead)
       << " is not in the image of the energy-graded differential; witness functional on "
       << phi->size() << " cells";
    cert.detail = os.str();
    return cert;
}

std::vector<DegreeDims> matrix_homology(const ColMat& d, const std::vector<int>& degrees) {
    for (int j = 0; j < d.domain; ++j)
        for (const auto& [i, v] : d.cols[j])
            if (degrees[i] != degrees[j] + 1)
                throw DomainError("matrix complex is not degree-homogeneous");
    std::map<int, std::vector<int>> by_deg;
    for (int i = 0; i < d.domain; ++i) by_deg[degrees[i]].push_back(i);
    std::map<int, int> rank_from;
    for (const auto& [deg, cells] : by_deg) {
        Rref r;
        for (int j : cells) r.add(d.cols[j]);
        rank_from[deg] = r.rank();
    }
    std::vector<DegreeDims> rows;
    for (const auto& [deg, cells] : by_deg) {
        DegreeDims row;
        row.degree = deg;
        row.cells = (int)cells.size();
        row.ker = row.cells - rank_from[deg];
        auto below = rank_from.find(deg - 1);
        row.im_in = below == rank_from.end() ? 0 : below->second;
        row.hom = row.ker - row.im_in;
        rows.push_back(row);
    }
    return rows;
}

std::pair<ColMat, std::vector<int>> matrix_quotient(const ColMat& d,
                                                    const std::vector<char>& killed) {
    for (int j = 0; j < d.domain; ++j)
        if (killed[j])
            for (const auto& [i, v] : d.cols[j])
                if (!killed[i])
                    throw DomainError("matrix quotient: killed set is not a subcomplex");
    std::vector<int> newidx(d.domain, -1);
    int n = 0;
    for (int i = 0; i < d.domain; ++i)
        if (!killed[i]) newidx[i] = n++;
    ColMat q;
    q.resize(n, n);
    for (int j = 0; j < d.domain; ++j) {
        if (killed[j]) continue;
        for (const auto& [i, v] : d.cols[j])
            if (!killed[i]) q.cols[newidx[j]][newidx[i]] = v;
    }
    return {q, newidx};
}

int StableDims::dim_at(int degree) const {
    for (const auto& r : rows)
        if (r.degree == degree) return r.hom;
    return 0;
}

int StableDims::total_dim() const {
    int t = 0;
    for (const auto& r : rows) t += r.hom;
    return t;
}

StableDims persistent_dims(const WindowedComplex& small_cx, const WindowedComplex& big_cx) {
    if (!small_cx.clean() || !big_cx.clean())
        throw RefusalError("persistent dims refused on dirty ledgers");
    // Map small cells into the big basis and verify the inclusion is a chain
    // map: the small differential must be the restriction of the big one.
    std::vector<int> into(small_cx.basis.cells.size(), -1);
    for (int i = 0; i < (int)small_cx.basis.cells.size(); ++i) {
        const Cell& c = small_cx.basis.cells[i];
        into[i] = big_cx.basis.find(c.word, c.energy, c.eexp);
        if (into[i] < 0)
            throw DomainError("small window is not contained in the big window");
    }
    for (int j = 0; j < small_cx.d.domain; ++j) {
        QVec expect;
        for (const auto& [i, v] : small_cx.d.cols[j]) expect[into[i]] = v;
        if (!(big_cx.d.cols[into[j]] == expect))
            throw DomainError("window inclusion is not a chain map; "
                              "use credit-length windows");
    }

    std::map<int, std::vector<int>> small_by_deg, big_by_deg;
    for (int i = 0; i < (int)small_cx.basis.cells.size(); ++i)
        small_by_deg[small_cx.basis.cells[i].degree].push_back(i);
    for (int i = 0; i < (int)big_cx.basis.cells.size(); ++i)
        big_by_deg[big_cx.basis.cells[i].degree].push_back(i);

    StableDims out;
    for (const auto& [deg, cells_small] : small_by_deg) {
        // kernel of the small differential at this degree, in big coordinates
        ColMat m;
        m.resize((int)cells_small.size(), (int)small_cx.basis.cells.size());
        for (std::size_t k = 0; k < cells_small.size(); ++k)
            m.cols[k] = small_cx.d.cols[cells_small[k]];
        auto ker = kernel_basis(m);

        Rref image_big;
        auto below = big_by_deg.find(deg - 1);
        if (below != big_by_deg.end())
            for (int j : below->second) image_big.add(big_cx.d.cols[j]);
        int rank_im = image_big.rank();
        Rref joint = image_big;
        for (const auto& kv : ker) {
            QVec z;
            for (const auto& [k, v] : kv) z[into[cells_small[k]]] = v;
            joint.add(z);
        }
        DegreeDims row;
        row.degree = deg;
        row.cells = (int)cells_small.size();
        row.ker = (int)ker.size();
        row.im_in = rank_im;
        row.hom = joint.rank() - rank_im;  // dim of the stable image
        out.rows.push_back(row);
    }
    return out;
}

WindowedComplex quotient_complex(const WindowedComplex& c,
                                 const std::vector<int>& killed_cells) {
    std::set<int> killed(killed_cells.begin(), killed_cells.end());
    // The killed span must be a subcomplex.
    for (int j : killed)
        for (const auto& [i, v] : c.d.cols[j])
            if (!killed.count(i))
                throw DomainError("quotient: killed cells do not span a subcomplex");

    WindowedComplex q;
    q.basis.kind = c.basis.kind;
    q.basis.flavor = c.basis.flavor;
    q.basis.window = c.basis.window;
    q.basis.lambda0 = c.basis.lambda0;
    std::vector<int> keep;
    std::vector<int> newidx(c.basis.cells.size(), -1);
    for (int i = 0; i < (int)c.basis.cells.size(); ++i)
        if (!killed.count(i)) {
            newidx[i] = (int)keep.size();
            keep.push_back(i);
            const Cell& cell = c.basis.cells[i];
            q.basis.index[{cell.word, cell.energy, cell.eexp}] = newidx[i];
            q.basis.cells.push_back(cell);
        }
    q.d.resize((int)keep.size(), (int)keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k)
        for (const auto& [i, v] : c.d.cols[keep[k]])
            if (newidx[i] >= 0) q.d.cols[k][newidx[i]] = v;
    for (int j = 0; j < q.d.domain; ++j) {
        QVec r = q.d.apply(q.d.cols[j]);
        if (!r.empty()) q.ledger.push_back({j, std::move(r)});
    }
    return q;
}

}  // namespace obstructa
