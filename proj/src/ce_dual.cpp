#include "obstructa/ce_dual.hpp"

#include <algorithm>
#include <sstream>

#include "obstructa/errors.hpp"

namespace obstructa {

DualSeries DualSeries::unit(const Rat& ceiling, const Rat& floor) {
    DualSeries s(ceiling, floor);
    s.add(DualMonomial{}, NovikovScalar::one(ceiling, floor));
    return s;
}

DualSeries DualSeries::variable(int16_t var, const Rat& ceiling, const Rat& floor) {
    DualSeries s(ceiling, floor);
    s.add(DualMonomial{{var}, -1}, NovikovScalar::one(ceiling, floor));
    return s;
}

void DualSeries::add(const DualMonomial& m, const NovikovScalar& c) {
    if (c.is_zero()) return;
    auto it = coef_.find(m);
    if (it == coef_.end()) {
        coef_.emplace(m, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) coef_.erase(it);
    }
}

NovikovScalar DualSeries::at(const DualMonomial& m) const {
    auto it = coef_.find(m);
    if (it == coef_.end()) return NovikovScalar::zero(ceiling_, floor_);
    return it->second;
}

DualSeries DualSeries::operator+(const DualSeries& o) const {
    DualSeries r = *this;
    for (const auto& [m, c] : o.coef_) r.add(m, c);
    return r;
}

DualSeries DualSeries::operator-(const DualSeries& o) const {
    DualSeries r = *this;
    for (const auto& [m, c] : o.coef_) r.add(m, -c);
    return r;
}

DualSeries DualSeries::scaled(const NovikovScalar& c) const {
    DualSeries r(ceiling_, floor_);
    for (const auto& [m, s] : coef_) r.add(m, s * c);
    return r;
}

bool DualSeries::operator==(const DualSeries& o) const { return coef_ == o.coef_; }

Valuation DualSeries::valuation() const {
    Valuation best{};
    for (const auto& [m, c] : coef_) {
        Valuation v = c.valuation();
        if (v < best) best = v;
    }
    return best;
}

std::string DualSeries::str(const std::vector<std::string>& ids,
                            const std::vector<std::string>& mod_ids) const {
    if (coef_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : coef_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        if (m.module_var >= 0) os << "*[" << mod_ids.at(m.module_var) << "]";
        for (int16_t v : m.vars) os << "*x_" << ids.at(v);
        if (m.module_var < 0 && m.vars.empty()) os << "*1";
    }
    return os.str();
}

DualSeries dual_product(const LInfinitySpec& l, const DualSeries& f, const DualSeries& g,
                        int max_len, const std::vector<int>* mod_sdeg) {
    const auto sd = l.algebra.sdegs();
    DualSeries out(f.ceiling(), std::min(f.floor(), g.floor()));
    for (const auto& [mf, cf] : f.coef())
        for (const auto& [mg, cg] : g.coef()) {
            if (mf.module_var >= 0 && mg.module_var >= 0)
                throw DomainError("dual product of two module monomials");
            if ((int)(mf.length() + mg.length()) > max_len) continue;
            // Item lists: module variable first inside its factor; Koszul
            // crossing signs while sorting the concatenation.
            struct Item {
                int16_t var;
                bool is_mod;
                int parity;
            };
            std::vector<Item> items;
            auto push = [&](const DualMonomial& m, const std::vector<int>& msd) {
                if (m.module_var >= 0)
                    items.push_back({m.module_var, true, msd.at(m.module_var) & 1});
                for (int16_t v : m.vars) items.push_back({v, false, sd[v] & 1});
            };
            static const std::vector<int> no_mod;
            const std::vector<int>& msd = mod_sdeg ? *mod_sdeg : no_mod;
            if ((mf.module_var >= 0 || mg.module_var >= 0) && !mod_sdeg)
                throw DomainError("module monomial product needs module degrees");
            push(mf, msd);
            push(mg, msd);
            // repeated odd variables square to zero
            bool dead = false;
            int sign = 1;
            // stable selection sort, counting crossings
            std::vector<Item> sorted;
            std::vector<char> used(items.size(), 0);
            auto less_item = [&](const Item& a, const Item& b) {
                if (a.is_mod != b.is_mod) return a.is_mod;
                return a.var < b.var;
            };
            for (std::size_t step = 0; step < items.size(); ++step) {
                int best = -1;
                for (std::size_t i = 0; i < items.size(); ++i) {
                    if (used[i]) continue;
                    if (best < 0 || less_item(items[i], items[best])) best = (int)i;
                }
                // crossing the unused items before `best`
                for (int i = 0; i < best; ++i)
                    if (!used[i] && items[i].parity && items[best].parity) sign = -sign;
                used[best] = 1;
                sorted.push_back(items[best]);
            }
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
                if (!sorted[i].is_mod && !sorted[i + 1].is_mod &&
                    sorted[i].var == sorted[i + 1].var && sorted[i].parity)
                    dead = true;
            if (dead) continue;
            DualMonomial m;
            for (const auto& it : sorted) {
                if (it.is_mod)
                    m.module_var = it.var;
                else
                    m.vars.push_back(it.var);
            }
            out.add(m, (cf * cg).scaled(sign));
        }
    return out;
}

namespace {

std::vector<std::vector<int16_t>> window_multisets(const AlgebraSpec& a, int lmax,
                                                   bool include_empty) {
    std::vector<std::vector<int16_t>> out;
    for (int k = include_empty ? 0 : 1; k <= lmax; ++k)
        for (auto& ms : canonical_multisets(a, k)) out.push_back(ms);
    return out;
}

}  // namespace

DualSeries dual_differential(const LInfinitySpec& l, const DualSeries& f, const Window& win) {
    const AlgebraSpec& a = l.algebra;
    Window exact = win;
    exact.lmax = 1 << 20;
    DualSeries out(f.ceiling(), f.floor());
    for (const auto& ms : window_multisets(a, win.lmax, true)) {
        SignedVector v(Flavor::Symmetric, win.emax);
        v.add(plain_word(ms), NovikovScalar::one(win.emax));
        SignedVector img = dhat_apply(a, v, exact);
        NovikovScalar val = NovikovScalar::zero(f.ceiling(), f.floor());
        for (const auto& [w, s] : img.coef()) {
            NovikovScalar fc = f.at(DualMonomial{w.letters, -1});
            if (!fc.is_zero()) val = val + fc * s.retruncated(f.ceiling(), f.floor());
        }
        if (!val.is_zero()) out.add(DualMonomial{ms, -1}, val);
    }
    return out;
}

SignedVector dce_word(const LModuleSpec& lm, const Word& w, const Rat& ceiling, int kmax) {
    if (!w.marked() || w.mark != 0)
        throw DomainError("d^CE expects mark-first symmetric chains");
    const AlgebraSpec& a = lm.l.algebra;
    const auto sd = a.sdegs();
    const auto msd = lm.mod_sdegs();
    const int16_t v = w.letters[0];
    std::vector<int16_t> tail(w.letters.begin() + 1, w.letters.end());
    const int k = (int)tail.size();
    SignedVector out(Flavor::ModuleSym, ceiling);
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        if (!canonical_split(tail, mask)) continue;
        std::vector<int16_t> sel, unsel;
        for (int i = 0; i < k; ++i)
            ((mask >> i) & 1 ? sel : unsel).push_back(tail[i]);
        if ((int)sel.size() > kmax) continue;
        int ssign = shuffle_sign(tail, sd, mask);
        // eta family
        SignedVector inner = lm.eta_apply(marked_word(v, sel), ceiling);
        for (const auto& [iw, is] : inner.coef())
            out.add(marked_word(iw.letters[0], unsel), is.scaled(ssign));
        // l family with the module-degree sign
        SignedVector linner = lm.l.bracket(sel, ceiling);
        int vsign = (msd[v] & 1) ? -1 : 1;
        for (const auto& [iw, is] : linner.coef()) {
            int16_t y = iw.letters[0];
            bool dead = false;
            if (sd[y] & 1)
                for (int16_t u : unsel)
                    if (u == y) dead = true;
            if (dead) continue;
            int isign = insert_sign(y, sd[y], unsel, sd);
            std::vector<int16_t> outer(unsel);
            outer.push_back(y);
            std::sort(outer.begin(), outer.end());
            out.add(marked_word(v, outer), is.scaled(ssign * isign * vsign));
        }
    }
    return out;
}

SignedVector dce_apply(const LModuleSpec& lm, const SignedVector& v, const Window& win) {
    SignedVector out(Flavor::ModuleSym, v.ceiling(), v.floor());
    for (const auto& [w, s] : v.coef()) out.add_scaled(dce_word(lm, w, v.ceiling(), win.kmax), s);
    // clip by total length
    SignedVector clipped(Flavor::ModuleSym, v.ceiling(), v.floor());
    const Rat l0 = lm.l.algebra.energy_gcd();
    for (const auto& [w, s] : out.coef()) {
        int len = (int)w.size();
        if (len <= win.lmax) {
            clipped.add(w, s);
        } else if (win.credit_length && l0 > 0) {
            std::vector<NovTerm> keep;
            for (const auto& t : s.terms()) {
                Rat credit = t.energy / l0;
                if (Rat(len) - credit <= win.lmax) keep.push_back(t);
            }
            if (!keep.empty())
                clipped.add(w, NovikovScalar::normalized(keep, s.ceiling(), s.floor()));
        }
    }
    return clipped;
}

DefectReport dce_square_defect(const LModuleSpec& lm, const Window& win) {
    Window exact = win;
    exact.lmax = 1 << 20;
    DefectReport rep;
    const auto msd = lm.mod_sdegs();
    const auto sd = lm.l.algebra.sdegs();
    for (int16_t v = 0; v < (int16_t)lm.module_basis.size(); ++v)
        for (int k = 0; k <= win.lmax - 1; ++k)
            for (const auto& ms : canonical_multisets(lm.l.algebra, k)) {
                Word w = marked_word(v, ms);
                Canon c = canonicalize(w, Flavor::ModuleSym, pos_degs(w, sd, msd));
                if (c.zero) continue;
                SignedVector x(Flavor::ModuleSym, win.emax);
                x.add(w, NovikovScalar::one(win.emax));
                SignedVector r = dce_apply(lm, dce_apply(lm, x, exact), exact);
                if (!r.is_zero()) rep.entries.push_back({w, r});
            }
    return rep;
}

WindowedComplex ce_chain_complex(const LModuleSpec& lm, const Window& win) {
    BimoduleSpec carrier;  // only used for enumeration metadata
    carrier.left = lm.l.algebra;
    carrier.right = lm.l.algebra;
    carrier.module_basis = lm.module_basis;
    CellBasis cb = enumerate_window_module(SpaceKind::CEChain, lm.l.algebra, carrier, win);
    Window exact = win;
    exact.lmax = 1 << 20;
    return assemble(cb, [&lm, exact](const Word& word) {
        SignedVector v(Flavor::ModuleSym, exact.emax);
        v.add(word, NovikovScalar::one(exact.emax));
        return dce_apply(lm, v, exact);
    });
}

HomologyReport ce_chain_homology(const LModuleSpec& lm, const Window& win) {
    auto rep = homology(ce_chain_complex(lm, win));
    rep.space = "ce-chain";
    return rep;
}

WindowedComplex cyclic_ce_complex(const LInfinitySpec& l, const Window& win) {
    CellBasis cb = enumerate_window(SpaceKind::SymGe1, l.algebra, win);
    Window exact = win;
    exact.lmax = 1 << 20;
    const AlgebraSpec& a = l.algebra;
    return assemble(cb, [&a, exact](const Word& word) {
        SignedVector v(Flavor::Symmetric, exact.emax);
        v.add(word, NovikovScalar::one(exact.emax));
        return dhat_apply(a, v, exact);
    });
}

HomologyReport cyclic_ce_homology(const LInfinitySpec& l, const Window& win) {
    auto rep = homology(cyclic_ce_complex(l, win));
    rep.space = "cyclic-ce";
    return rep;
}

DualSeries dual_module_differential(const LModuleSpec& lm, const DualSeries& f,
                                    const Window& win) {
    Window exact = win;
    exact.lmax = 1 << 20;
    const auto msd = lm.mod_sdegs();
    const auto sd = lm.l.algebra.sdegs();
    DualSeries out(f.ceiling(), f.floor());
    for (int16_t v = 0; v < (int16_t)lm.module_basis.size(); ++v)
        for (int k = 0; k + 1 <= win.lmax; ++k)
            for (const auto& ms : canonical_multisets(lm.l.algebra, k)) {
                Word w = marked_word(v, ms);
                Canon c = canonicalize(w, Flavor::ModuleSym, pos_degs(w, sd, msd));
                if (c.zero) continue;
                SignedVector x(Flavor::ModuleSym, win.emax);
                x.add(w, NovikovScalar::one(win.emax));
                SignedVector img = dce_apply(lm, x, exact);
                NovikovScalar val = NovikovScalar::zero(f.ceiling(), f.floor());
                for (const auto& [iw, is] : img.coef()) {
                    DualMonomial m{std::vector<int16_t>(iw.letters.begin() + 1,
                                                        iw.letters.end()),
                                   iw.letters[0]};
                    NovikovScalar fc = f.at(m);
                    if (!fc.is_zero())
                        val = val + fc * is.retruncated(f.ceiling(), f.floor());
                }
                if (!val.is_zero())
                    out.add(DualMonomial{ms, v}, val);
            }
    return out;
}

VanishingCertificate vanishing_certificate(const LInfinitySpec& l, const DualSeries& x,
                                           const Window& win) {
    VanishingCertificate cert;
    DualSeries dx = dual_differential(l, x, win);
    NovikovScalar s = dx.at(DualMonomial{});
    if (s.is_zero()) {
        cert.detail = "d*(x) has no length-zero part";
        return cert;
    }
    NovikovScalar sinv;
    try {
        sinv = s.inverted();
    } catch (const Error& e) {
        cert.detail = std::string("length-zero part not monomial-invertible: ") + e.what();
        return cert;
    }
    cert.y = x.scaled(sinv);
    DualSeries dy = dx.scaled(sinv);
    cert.h = dy;
    cert.h.add(DualMonomial{}, NovikovScalar::monomial(-1, 0, 0, dy.ceiling(), dy.floor()));
    for (const auto& [m, c] : cert.h.coef()) {
        if (m.length() == 0 && !c.is_zero()) {
            cert.detail = "residual h kept a length-zero part";
            return cert;
        }
        Valuation v = c.valuation();
        if (!v.is_infinite() && *v.value < 0) {
            cert.detail = "residual h has negative valuation " + to_string(*v.value) +
                          "; such an expression is not allowed";
            return cert;
        }
    }
    // h' = sum (-1)^j h^j, nilpotent through the window length cap
    DualSeries hp = DualSeries::unit(x.ceiling(), x.floor());
    DualSeries power = hp;
    int sign = -1;
    for (int j = 1; j <= win.lmax + 1; ++j) {
        power = dual_product(l, power, cert.h, win.lmax);
        if (power.is_zero()) break;
        hp = sign > 0 ? hp + power : hp - power;
        sign = -sign;
    }
    cert.hprime = hp;
    cert.ok = true;
    cert.detail = "certificate: d*(y) = 1 + h with nonnegative valuation";
    return cert;
}

std::optional<DualSeries> coboundary_witness(const LInfinitySpec& l,
                                             const VanishingCertificate& cert,
                                             const DualSeries& z, const Window& win) {
    if (!cert.ok) return std::nullopt;
    if (!dual_differential(l, z, win).is_zero()) return std::nullopt;
    DualSeries contraction = dual_product(l, cert.y, cert.hprime, win.lmax);
    DualSeries w = dual_product(l, contraction, z, win.lmax);
    DualSeries dw = dual_differential(l, w, win);
    if (dw == z) return w;
    DualSeries neg = w.scaled(NovikovScalar::monomial(-1, 0, 0, w.ceiling(), w.floor()));
    if (dual_differential(l, neg, win) == z) return neg;
    return std::nullopt;
}

ObstructionReport obstruction_extract(const AlgebraSpec& a, const Window& win) {
    ObstructionReport rep;
    const int b0 = a.beta0_index();
    Rat lmin = 0;
    for (std::size_t ci = 0; ci < a.classes.size(); ++ci) {
        auto it = a.ops.find({0, (int)ci});
        if (it == a.ops.end() || !it->second.count({})) continue;
        if (!rep.has_obstruction || a.classes[ci].energy < lmin) lmin = a.classes[ci].energy;
        rep.has_obstruction = true;
    }
    if (!rep.has_obstruction) return rep;
    rep.lambda_min = lmin;

    // m1-bar matrix over the basis
    ColMat m1;
    m1.resize((int)a.basis.size(), (int)a.basis.size());
    if (b0 >= 0) {
        auto it = a.ops.find({1, b0});
        if (it != a.ops.end())
            for (const auto& [in, out] : it->second)
                for (const auto& [letter, c] : out) m1.cols[in[0]][letter] = c;
    }

    for (std::size_t ci = 0; ci < a.classes.size(); ++ci) {
        if (a.classes[ci].energy != lmin) continue;
        auto it = a.ops.find({0, (int)ci});
        if (it == a.ops.end()) continue;
        auto jt = it->second.find({});
        if (jt == it->second.end()) continue;
        ObstructionReport::Entry e;
        e.class_label = a.classes[ci].label;
        e.cycle = SignedVector(Flavor::Plain, win.emax);
        QVec ovec;
        for (const auto& [letter, c] : jt->second) {
            e.cycle.add(plain_word({letter}), NovikovScalar::monomial(c, 0, 0, win.emax));
            ovec[letter] = c;
        }
        e.m1_cycle = m1.apply(ovec).empty();
        auto pre = solve(m1, ovec);
        e.m1_exact = pre.has_value();
        if (pre) {
            e.preimage = SignedVector(Flavor::Plain, win.emax);
            for (const auto& [letter, c] : *pre)
                e.preimage.add(plain_word({(int16_t)letter}),
                               NovikovScalar::monomial(c, 0, 0, win.emax));
        }
        rep.entries.push_back(std::move(e));
    }

    LInfinitySpec l = symmetrize_algebra(a, std::min(win.kmax, win.lmax + 1));
    const Rat dual_floor = -win.emax;
    for (const auto& e : rep.entries) {
        if (e.m1_exact) continue;
        for (const auto& [w, s] : e.cycle.coef()) {
            DualSeries x = DualSeries::variable(w.letters[0], win.emax, dual_floor);
            auto cert = vanishing_certificate(l, x, win);
            if (cert.ok) {
                rep.candidate_found = true;
                rep.candidate = cert.y;
                rep.certificate = cert;
                return rep;
            }
            rep.certificate = cert;  // keep the last rejection for reporting
        }
    }
    return rep;
}

namespace {

std::vector<std::pair<DualMonomial, std::pair<Rat, long>>> dual_cells_for(
    const AlgebraSpec& a, const std::vector<BasisElement>* module_basis, const Window& win,
    std::size_t cap) {
    std::vector<std::pair<DualMonomial, std::pair<Rat, long>>> cells;
    auto slots = class_monoid(a.classes, win.emax, cap);
    if (module_basis) {
        const auto sd = a.sdegs();
        std::vector<int> msd(module_basis->size());
        for (std::size_t i = 0; i < module_basis->size(); ++i)
            msd[i] = (*module_basis)[i].degree - 1;
        for (int16_t v = 0; v < (int16_t)module_basis->size(); ++v)
            for (int k = 0; k + 1 <= win.lmax; ++k)
                for (const auto& ms : canonical_multisets(a, k)) {
                    Word w = marked_word(v, ms);
                    if (canonicalize(w, Flavor::ModuleSym, pos_degs(w, sd, msd)).zero)
                        continue;
                    for (const auto& s : slots) cells.push_back({{ms, v}, s});
                }
    } else {
        for (int k = 0; k <= win.lmax; ++k)
            for (const auto& ms : canonical_multisets(a, k))
                for (const auto& s : slots) cells.push_back({{ms, -1}, s});
    }
    return cells;
}

ModuleVanishingReport vanish_samples(
    const std::function<DualSeries(const DualSeries&)>& strict_differential,
    const std::function<std::optional<DualSeries>(const DualSeries&)>& witness,
    const std::vector<std::pair<DualMonomial, std::pair<Rat, long>>>& cells,
    const Rat& strict_ceiling, const Rat& ceiling, const Rat& floor, int samples,
    unsigned seed) {
    ModuleVanishingReport rep;
    // Kernel of the dual differential computed with ceiling headroom, so
    // truncation-artifact cocycles (closed only because their boundary dies
    // at the ceiling) are excluded from the sample. Targets are indexed
    // lazily so no image component is silently dropped.
    ColMat D;
    std::map<std::pair<DualMonomial, std::pair<Rat, long>>, int> target;
    int ntargets = 0;
    auto target_idx = [&](const DualMonomial& m, const Rat& en, long ee) {
        auto key = std::make_pair(m, std::make_pair(en, ee));
        auto it = target.find(key);
        if (it != target.end()) return it->second;
        target[key] = ntargets;
        return ntargets++;
    };
    D.resize((int)cells.size(), 0);
    for (int j = 0; j < (int)cells.size(); ++j) {
        DualSeries f(strict_ceiling, floor);
        f.add(cells[j].first, NovikovScalar::monomial(1, cells[j].second.first,
                                                      cells[j].second.second, strict_ceiling,
                                                      floor));
        DualSeries img = strict_differential(f);
        for (const auto& [m, c] : img.coef())
            for (const auto& t : c.terms()) {
                int i = target_idx(m, t.energy, t.eexp);
                D.cols[j][i] += t.coeff;
                if (D.cols[j][i] == 0) D.cols[j].erase(i);
            }
    }
    D.target = ntargets;
    auto ker = kernel_basis(D);
    if (ker.empty()) return rep;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coeff(-2, 2), pick(0, (int)ker.size() - 1);
    for (int t = 0; t < samples; ++t) {
        QVec zq;
        for (int tries = 0; tries < 3; ++tries)
            qvec_add(zq, ker[pick(rng)], Rat(coeff(rng)));
        DualSeries z(ceiling, floor);  // witnessing runs at the window ceiling
        for (const auto& [i, v] : zq)
            z.add(cells[i].first, NovikovScalar::monomial(v, cells[i].second.first,
                                                          cells[i].second.second, ceiling,
                                                          floor));
        // membership in ker(D) over the grid is necessary but the witness
        // check re-verifies against the full differential
        ++rep.sampled;
        auto w = witness(z);
        if (w) {
            ++rep.witnessed;
        } else {
            rep.failures.push_back("sample " + std::to_string(t) + " not witnessed");
        }
    }
    return rep;
}

}  // namespace

ModuleVanishingReport ce_module_vanishing(const LModuleSpec& lm,
                                          const VanishingCertificate& cert, const Window& win,
                                          int samples, unsigned seed) {
    if (!cert.ok) throw RefusalError("module vanishing needs a vanishing certificate");
    const Rat floor = -win.emax;
    const auto msd = lm.mod_sdegs();
    DualSeries contraction = dual_product(lm.l, cert.y, cert.hprime, win.lmax);
    // witnesses multiply by the contraction, so samples leave headroom
    int reach = 0;
    for (const auto& [m, c] : contraction.coef()) reach = std::max(reach, (int)m.length());
    Window budget = win;
    budget.lmax = std::max(1, win.lmax - reach);
    auto cells = dual_cells_for(lm.l.algebra, &lm.module_basis, budget,
                                win.effective_cap());
    Window strict = win;
    strict.emax = win.emax * 2;
    auto differential = [&](const DualSeries& f) {
        return dual_module_differential(lm, f, strict);
    };
    const auto asd = lm.l.algebra.sdegs();
    auto witness = [&](const DualSeries& z) -> std::optional<DualSeries> {
        if (!dual_module_differential(lm, z, win).is_zero()) return std::nullopt;
        // d(z . g) = (-1)^{|z|} z . d(g) per monomial, and d(contraction) = 1
        DualSeries signed_z(z.ceiling(), z.floor());
        for (const auto& [m, c] : z.coef()) {
            int par = m.module_var >= 0 ? (msd[m.module_var] & 1) : 0;
            for (int16_t v : m.vars) par ^= asd[v] & 1;
            signed_z.add(m, par ? -c : c);
        }
        DualSeries w = dual_product(lm.l, signed_z, contraction, win.lmax, &msd);
        if (dual_module_differential(lm, w, win) == z) return w;
        return std::nullopt;
    };
    return vanish_samples(differential, witness, cells, strict.emax, win.emax, floor,
                          samples, seed);
}

ModuleVanishingReport cyclic_ce_vanishing(const LInfinitySpec& l,
                                          const VanishingCertificate& cert, const Window& win,
                                          int samples, unsigned seed) {
    if (!cert.ok) throw RefusalError("vanishing sampling needs a certificate");
    const Rat floor = -win.emax;
    int reach = 0;
    DualSeries contraction = dual_product(l, cert.y, cert.hprime, win.lmax);
    for (const auto& [m, c] : contraction.coef()) reach = std::max(reach, (int)m.length());
    Window budget = win;
    budget.lmax = std::max(1, win.lmax - reach);
    auto cells = dual_cells_for(l.algebra, nullptr, budget, win.effective_cap());
    Window strict = win;
    strict.emax = win.emax * 2;
    auto differential = [&](const DualSeries& f) { return dual_differential(l, f, strict); };
    auto witness = [&](const DualSeries& z) { return coboundary_witness(l, cert, z, win); };
    return vanish_samples(differential, witness, cells, strict.emax, win.emax, floor,
                          samples, seed);
}

std::vector<DegreeDims> dual_cohomology_dims(const WindowedComplex& chain) {
    const int n = (int)chain.basis.cells.size();
    ColMat dual;
    dual.resize(n, n);
    for (int j = 0; j < n; ++j)
        for (const auto& [i, v] : chain.d.cols[j]) dual.cols[i][j] = v;
    std::vector<int> degrees(n);
    for (int i = 0; i < n; ++i) degrees[i] = -chain.basis.cells[i].degree;
    return matrix_homology(dual, degrees);
}

}  // namespace obstructa
