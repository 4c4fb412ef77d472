#include "obstructa/hochschild.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "obstructa/errors.hpp"

namespace obstructa {

SignedVector dhoch_word(const AlgebraSpec& a, const BimoduleSpec& m, const Word& w,
                        const Rat& ceiling, const Rat& floor, int kmax) {
    if (!w.marked() || w.mark != 0)
        throw DomainError("Hochschild chains carry the module mark first");
    SignedVector out(Flavor::Module, ceiling, floor);
    const int k = (int)w.size() - 1;  // tail length
    const auto asd = a.sdegs();
    const auto msd = m.mod_sdegs();

    std::vector<int> pref(w.size() + 1, 0);  // parity prefixes including the mark
    for (std::size_t i = 0; i < w.size(); ++i) {
        int d = (int)i == w.mark ? msd[w.letters[i]] : asd[w.letters[i]];
        pref[i + 1] = pref[i] + (d & 1);
    }
    auto sign_at = [&](int i) { return (pref[i] & 1) ? -1 : 1; };

    // Families 1 and 2: the tail coderivation of A including m_0 insertions,
    // signs from the prefix through the module element.
    for (std::size_t ci = 0; ci < a.classes.size(); ++ci) {
        const ClassInfo& cls = a.classes[ci];
        const NovikovScalar cscale =
            NovikovScalar::monomial(1, cls.energy, cls.eexp(), ceiling, floor);
        if (cscale.is_zero()) continue;
        for (int j = 0; j <= std::min(k, kmax); ++j) {
            auto it = a.ops.find({j, (int)ci});
            if (it == a.ops.end()) continue;
            if (j == 0) {
                auto jt = it->second.find({});
                if (jt == it->second.end()) continue;
                for (int i = 1; i <= k + 1; ++i)  // never ahead of the mark
                    for (const auto& [letter, c] : jt->second) {
                        Word nw = w;
                        nw.letters.insert(nw.letters.begin() + i, letter);
                        out.add(nw, cscale.scaled(sign_at(i) * c));
                    }
            } else {
                std::vector<int16_t> sub(j);
                for (int i = 1; i + j <= k + 1; ++i) {
                    std::copy(w.letters.begin() + i, w.letters.begin() + i + j, sub.begin());
                    auto jt = it->second.find(sub);
                    if (jt == it->second.end()) continue;
                    for (const auto& [letter, c] : jt->second) {
                        Word nw;
                        nw.mark = 0;
                        nw.letters.assign(w.letters.begin(), w.letters.begin() + i);
                        nw.letters.push_back(letter);
                        nw.letters.insert(nw.letters.end(), w.letters.begin() + i + j,
                                          w.letters.end());
                        out.add(nw, cscale.scaled(sign_at(i) * c));
                    }
                }
            }
        }
    }

    // Family 3: wrap-around n_{i,j}(x_{k-i+1},...,x_k, v, x_1,...,x_j).
    // The sign is the Koszul cost of rotating the trailing block past the
    // whole remaining word (module element and the letters that stay).
    for (const auto& [key, tab] : m.nops) {
        auto [p, q, ci] = key;
        if (p > k || q > k - p || p + q + 1 > kmax) continue;
        const ClassInfo& cls = m.classes.at(ci);
        const NovikovScalar cscale =
            NovikovScalar::monomial(1, cls.energy, cls.eexp(), ceiling, floor);
        if (cscale.is_zero()) continue;
        Word arg;
        arg.letters.assign(w.letters.end() - p, w.letters.end());
        arg.mark = (int16_t)p;
        arg.letters.push_back(w.letters[0]);
        arg.letters.insert(arg.letters.end(), w.letters.begin() + 1,
                           w.letters.begin() + 1 + q);
        auto jt = tab.find(arg);
        if (jt == tab.end()) continue;
        int block = pref[w.size()] - pref[w.size() - p];
        int rest = pref[w.size() - p];
        int sign = ((block & 1) && (rest & 1)) ? -1 : 1;
        for (const auto& [letter, c] : jt->second) {
            Word nw;
            nw.mark = 0;
            nw.letters.push_back(letter);
            nw.letters.insert(nw.letters.end(), w.letters.begin() + 1 + q,
                              w.letters.end() - p);
            out.add(nw, cscale.scaled(sign * c));
        }
    }
    return out;
}

// Window clip by total length (credit handled as in the bar case).
static SignedVector clip_marked(const SignedVector& v, const Window& w, const Rat& l0) {
    SignedVector out(v.flavor(), v.ceiling(), v.floor());
    for (const auto& [word, s] : v.coef()) {
        int len = (int)word.size();
        if (len <= w.lmax) {
            out.add(word, s);
        } else if (w.credit_length && l0 > 0) {
            std::vector<NovTerm> keep;
            for (const auto& t : s.terms()) {
                Rat credit = t.energy / l0;
                if (Rat(len) - credit <= w.lmax) keep.push_back(t);
            }
            if (!keep.empty())
                out.add(word, NovikovScalar::normalized(keep, s.ceiling(), s.floor()));
        }
    }
    return out;
}

SignedVector dhoch_apply(const AlgebraSpec& a, const BimoduleSpec& m, const SignedVector& v,
                         const Window& win) {
    SignedVector out(Flavor::Module, v.ceiling(), v.floor());
    for (const auto& [word, s] : v.coef())
        out.add_scaled(dhoch_word(a, m, word, v.ceiling(), v.floor(), win.kmax), s);
    return clip_marked(out, win, a.energy_gcd());
}

DefectReport dhoch_square_defect(const AlgebraSpec& a, const BimoduleSpec& m,
                                 const Window& win) {
    Window exact = win;
    exact.lmax = 1 << 20;
    DefectReport rep;
    CellBasis cb = enumerate_window_module(SpaceKind::Hochschild, a, m, win);
    std::set<Word> words;
    for (const auto& c : cb.cells) words.insert(c.word);
    for (const auto& word : words) {
        SignedVector v(Flavor::Module, win.emax);
        v.add(word, NovikovScalar::one(win.emax));
        SignedVector r = dhoch_apply(a, m, dhoch_apply(a, m, v, exact), exact);
        if (!r.is_zero()) rep.entries.push_back({word, r});
    }
    return rep;
}

WindowedComplex hochschild_complex(const AlgebraSpec& a, const BimoduleSpec& m,
                                   const Window& win) {
    CellBasis cb = enumerate_window_module(SpaceKind::Hochschild, a, m, win);
    Window exact = win;
    exact.lmax = 1 << 20;
    return assemble(cb, [&a, &m, exact](const Word& word) {
        SignedVector v(Flavor::Module, exact.emax);
        v.add(word, NovikovScalar::one(exact.emax));
        return dhoch_apply(a, m, v, exact);
    });
}

HomologyReport hochschild_homology(const AlgebraSpec& a, const BimoduleSpec& m,
                                   const Window& win) {
    auto rep = homology(hochschild_complex(a, m, win));
    rep.space = "hochschild";
    return rep;
}

WindowedComplex reduced_complex(const AlgebraSpec& a, const BimoduleSpec& m,
                                const Window& win) {
    const int u = a.unit_index();
    if (u < 0) throw DomainError("reduced complex needs a strict unit");
    WindowedComplex full = hochschild_complex(a, m, win);
    std::vector<int> killed;
    for (int i = 0; i < (int)full.basis.cells.size(); ++i) {
        const Word& w = full.basis.cells[i].word;
        for (std::size_t p = 1; p < w.size(); ++p)
            if (w.letters[p] == (int16_t)u) {
                killed.push_back(i);
                break;
            }
    }
    auto red = quotient_complex(full, killed);
    red.basis.kind = SpaceKind::Hochschild;
    return red;
}

HomologyReport reduced_hochschild_homology(const AlgebraSpec& a, const BimoduleSpec& m,
                                           const Window& win) {
    auto rep = homology(reduced_complex(a, m, win));
    rep.space = "reduced-hochschild";
    return rep;
}

SignedVector chainmap_apply(const BimoduleHomSpec& phi, const SignedVector& v,
                            const Window& win) {
    const AlgebraSpec& a = phi.source.left;
    const auto asd = a.sdegs();
    const auto msd = phi.source.mod_sdegs();
    SignedVector out(Flavor::Module, v.ceiling(), v.floor());
    for (const auto& [w, s] : v.coef()) {
        if (!w.marked() || w.mark != 0)
            throw DomainError("chain map expects mark-first Hochschild chains");
        const int k = (int)w.size() - 1;
        std::vector<int> pref(w.size() + 1, 0);
        for (std::size_t i = 0; i < w.size(); ++i) {
            int d = (int)i == w.mark ? msd[w.letters[i]] : asd[w.letters[i]];
            pref[i + 1] = pref[i] + (d & 1);
        }
        for (const auto& [key, tab] : phi.phiops) {
            auto [p, q, ci] = key;
            if (p > k || q > k - p) continue;
            const ClassInfo& cls = phi.classes.at(ci);
            Word arg;
            arg.letters.assign(w.letters.end() - p, w.letters.end());
            arg.mark = (int16_t)p;
            arg.letters.push_back(w.letters[0]);
            arg.letters.insert(arg.letters.end(), w.letters.begin() + 1,
                               w.letters.begin() + 1 + q);
            auto jt = tab.find(arg);
            if (jt == tab.end()) continue;
            int block = pref[w.size()] - pref[w.size() - p];
            int rest = pref[w.size() - p];
            int sign = ((block & 1) && (rest & 1)) ? -1 : 1;
            // remaining tail through alpha-hat
            std::vector<int16_t> tail(w.letters.begin() + 1 + q, w.letters.end() - p);
            SignedVector tv(Flavor::Plain, v.ceiling(), v.floor());
            tv.add(plain_word(tail), NovikovScalar::one(v.ceiling(), v.floor()));
            Window exact = win;
            exact.lmax = 1 << 20;
            SignedVector ft = hom_apply(phi.alpha, tv, exact);
            for (const auto& [letter, c] : jt->second) {
                NovikovScalar sc =
                    s * NovikovScalar::monomial(sign * c, cls.energy, cls.eexp(),
                                                v.ceiling(), v.floor());
                for (const auto& [tw, ts] : ft.coef()) {
                    Word nw;
                    nw.mark = 0;
                    nw.letters.push_back(letter);
                    nw.letters.insert(nw.letters.end(), tw.letters.begin(),
                                      tw.letters.end());
                    out.add(nw, sc * ts);
                }
            }
        }
    }
    return clip_marked(out, win, phi.target.left.energy_gcd());
}

DefectReport chainmap_defect(const BimoduleHomSpec& phi, const Window& win) {
    Window exact = win;
    exact.lmax = 1 << 20;
    DefectReport rep;
    CellBasis cb =
        enumerate_window_module(SpaceKind::Hochschild, phi.source.left, phi.source, win);
    std::set<Word> words;
    for (const auto& c : cb.cells) words.insert(c.word);
    for (const auto& word : words) {
        SignedVector v(Flavor::Module, win.emax);
        v.add(word, NovikovScalar::one(win.emax));
        SignedVector lhs =
            dhoch_apply(phi.target.left, phi.target, chainmap_apply(phi, v, exact), exact);
        SignedVector rhs =
            chainmap_apply(phi, dhoch_apply(phi.source.left, phi.source, v, exact), exact);
        SignedVector r = lhs - rhs;
        if (!r.is_zero()) rep.entries.push_back({word, r});
    }
    return rep;
}

SignedVector exp_b(const SignedVector& b, const Window& win) {
    return exp_word_series(b, win.credit_length ? (1 << 20) : (1 << 20));
}

SignedVector mc_defect(const AlgebraSpec& a, const SignedVector& b, const Window& win) {
    if (!b.is_zero()) {
        Valuation v = b.valuation();
        if (!v.is_infinite() && *v.value <= 0)
            throw DivergenceError("bounding cochain needs positive valuation");
    }
    Window exact = win;
    exact.lmax = 1 << 20;
    return dhat_apply(a, exp_b(b, win), exact);
}

AlgebraSpec deform(const AlgebraSpec& a, const SignedVector& b, const Window& win) {
    SignedVector residual = mc_defect(a, b, win);
    if (!residual.is_zero())
        throw DomainError("deform needs a vanishing Maurer-Cartan residual, got " +
                          residual.str(a.ids()));
    const Rat ceiling = win.emax;
    SignedVector cloud = exp_b(b, win);

    AlgebraSpec r;
    r.name = a.name + "_deformed";
    r.basis = a.basis;
    r.z2_mode = a.z2_mode;

    // Collect m^b_k outputs as Novikov combinations, then split into classes.
    std::map<std::pair<int, std::vector<int16_t>>, std::map<std::pair<Rat, long>, QOut>> acc;
    std::vector<std::vector<int16_t>> words{{}};
    for (int k = 0; k <= std::min(win.kmax, win.lmax); ++k) {
        if (k > 0) {
            std::vector<std::vector<int16_t>> next;
            for (const auto& p : words)
                if ((int)p.size() == k - 1)
                    for (int16_t l = 0; l < (int16_t)a.basis.size(); ++l) {
                        auto q = p;
                        q.push_back(l);
                        next.push_back(std::move(q));
                    }
            words.insert(words.end(), next.begin(), next.end());
        }
        for (const auto& in : words) {
            if ((int)in.size() != k) continue;
            // interleaved = e^b (x) x1 (x) e^b (x) ... (x) xk (x) e^b
            SignedVector inter = cloud;
            for (int i = 0; i < k; ++i) {
                SignedVector letter(Flavor::Plain, ceiling);
                letter.add(plain_word({in[i]}), NovikovScalar::one(ceiling));
                inter = tensor(inter, letter);
                inter = tensor(inter, cloud);
            }
            // length-one projection of the full coderivation = m(e^b,...)
            std::map<std::pair<Rat, long>, std::map<int16_t, Rat>> got;
            for (const auto& [iw, is] : inter.coef()) {
                const int n = (int)iw.size();
                for (std::size_t ci = 0; ci < a.classes.size(); ++ci) {
                    auto it = a.ops.find({n, (int)ci});
                    if (it == a.ops.end()) continue;
                    auto jt = it->second.find(iw.letters);
                    if (jt == it->second.end()) continue;
                    NovikovScalar sc =
                        is * NovikovScalar::monomial(1, a.classes[ci].energy,
                                                     a.classes[ci].eexp(), ceiling);
                    for (const auto& [letter, c] : jt->second)
                        for (const auto& t : sc.terms()) {
                            Rat cc = t.coeff * c;
                            got[{t.energy, t.eexp}][letter] += cc;
                        }
                }
            }
            for (const auto& [slot, mp] : got) {
                QOut qo;
                for (const auto& [letter, c] : mp)
                    if (c != 0) qo.push_back({letter, c});
                if (!qo.empty()) acc[{k, in}][slot] = qo;
            }
        }
    }
    std::map<std::pair<Rat, long>, int> class_of;
    auto class_idx = [&](const std::pair<Rat, long>& slot) {
        auto it = class_of.find(slot);
        if (it != class_of.end()) return it->second;
        int idx = (int)r.classes.size();
        std::ostringstream os;
        os << "g" << idx << "_T" << to_string(slot.first) << "_e" << slot.second;
        r.classes.push_back(ClassInfo{slot.first == 0 ? "b0" : os.str(), slot.first,
                                      2 * slot.second});
        class_of[slot] = idx;
        return idx;
    };
    class_idx({Rat(0), 0L});  // beta_0 always present
    for (const auto& [key, slots] : acc)
        for (const auto& [slot, qo] : slots)
            r.ops[{key.first, class_idx(slot)}][key.second] = qo;
    return r;
}

SignedVector build_gamma_b(const AlgebraSpec& a, const SignedVector& b, const Window& win) {
    const int u = a.unit_index();
    if (u < 0) throw DomainError("gamma_b needs a strict unit");
    SignedVector cloud = exp_b(b, win);
    SignedVector out(Flavor::Module, win.emax);
    for (const auto& [w, s] : cloud.coef()) out.add(marked_word((int16_t)u, w.letters), s);
    return out;
}

NovikovScalar augmentation_eval(const AlgebraSpec& a, const SignedVector& b,
                                const Word& word, const Window& win) {
    return mc_defect(a, b, win).at(word);
}

DefectReport augmentation_check(const AlgebraSpec& a, const SignedVector& b,
                                const Window& win) {
    DefectReport rep;
    SignedVector r = mc_defect(a, b, win);
    for (const auto& [w, s] : r.coef()) {
        SignedVector one_entry(Flavor::Plain, win.emax);
        one_entry.add(w, s);
        rep.entries.push_back({w, one_entry});
    }
    return rep;
}

HomomorphismSpec ib_homomorphism(const AlgebraSpec& a, const AlgebraSpec& deformed,
                                 const SignedVector& b, const Window& win) {
    HomomorphismSpec f;
    f.name = "i_b";
    f.source = deformed;
    f.target = a;
    f.classes = {ClassInfo{"b0", 0, 0}};
    OpTable id;
    for (int16_t i = 0; i < (int16_t)a.basis.size(); ++i) id[{i}] = QOut{{i, 1}};
    f.fops[{1, 0}] = id;
    // f_0(1) = b, one class slot per monomial of b's coefficients
    std::map<std::pair<Rat, long>, QOut> slots;
    for (const auto& [w, s] : b.coef())
        for (const auto& t : s.terms()) slots[{t.energy, t.eexp}].push_back({w.letters[0], t.coeff});
    for (const auto& [slot, qo] : slots) {
        int idx = (int)f.classes.size();
        std::ostringstream os;
        os << "f0_T" << to_string(slot.first) << "_e" << slot.second;
        f.classes.push_back(ClassInfo{os.str(), slot.first, 2 * slot.second});
        OpTable t0;
        t0[{}] = qo;
        f.fops[{0, idx}] = t0;
    }
    return f;
}

}  // namespace obstructa
