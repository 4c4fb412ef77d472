#include "obstructa/algebra.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

#include "obstructa/errors.hpp"
#include "obstructa/window.hpp"

namespace obstructa {

int AlgebraSpec::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (basis[i].id == id) return (int)i;
    return -1;
}

int AlgebraSpec::unit_index() const {
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (basis[i].is_unit) return (int)i;
    return -1;
}

int AlgebraSpec::beta0_index() const {
    for (std::size_t i = 0; i < classes.size(); ++i)
        if (classes[i].energy == 0) return (int)i;
    return -1;
}

std::vector<int> AlgebraSpec::sdegs() const {
    std::vector<int> d(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) d[i] = basis[i].degree - 1;
    return d;
}

std::vector<std::string> AlgebraSpec::ids() const {
    std::vector<std::string> s(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) s[i] = basis[i].id;
    return s;
}

int AlgebraSpec::max_arity() const {
    int k = 0;
    for (const auto& [key, tab] : ops) k = std::max(k, key.first);
    return k;
}

Rat AlgebraSpec::energy_gcd() const {
    Rat g = 0;
    for (const auto& c : classes)
        if (c.energy > 0) g = rat_gcd(g, c.energy);
    return g;
}

SignedVector AlgebraSpec::m0(const Rat& ceiling, const Rat& floor) const {
    SignedVector v(Flavor::Plain, ceiling, floor);
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        auto it = ops.find({0, (int)ci});
        if (it == ops.end()) continue;
        auto jt = it->second.find({});
        if (jt == it->second.end()) continue;
        for (const auto& [letter, c] : jt->second)
            v.add(plain_word({letter}),
                  NovikovScalar::monomial(c, classes[ci].energy, classes[ci].eexp(), ceiling,
                                          floor));
    }
    return v;
}

AlgebraSpec to_z2_mode(const AlgebraSpec& a) {
    AlgebraSpec b = a;
    b.z2_mode = true;
    for (auto& e : b.basis) e.degree = ((e.degree % 2) + 2) % 2;
    for (auto& c : b.classes) c.maslov = 0;
    return b;
}

static int mod2(int x) { return ((x % 2) + 2) % 2; }

ValidationReport validate_spec(const AlgebraSpec& a) {
    ValidationReport r;
    std::set<std::string> seen;
    int units = 0;
    for (const auto& e : a.basis) {
        if (e.id.empty()) r.violations.push_back("basis element with empty id");
        if (!seen.insert(e.id).second)
            r.violations.push_back("duplicate basis id '" + e.id + "'");
        if (e.is_unit) {
            ++units;
            if (!a.z2_mode && e.degree != 0)
                r.violations.push_back("unit '" + e.id + "' must have degree 0");
        }
    }
    if (units > 1) r.violations.push_back("more than one basis element flagged as unit");

    int zero_classes = 0;
    std::set<std::string> clabels;
    for (const auto& c : a.classes) {
        if (!clabels.insert(c.label).second)
            r.violations.push_back("duplicate class label '" + c.label + "'");
        if (c.energy < 0)
            r.violations.push_back("class '" + c.label + "' has negative energy");
        if (c.maslov % 2 != 0)
            r.violations.push_back("class '" + c.label + "' has odd Maslov index");
        if (c.energy == 0) {
            ++zero_classes;
            if (c.maslov != 0)
                r.violations.push_back("energy-0 class '" + c.label +
                                       "' must have Maslov index 0");
        }
    }
    if (zero_classes != 1)
        r.violations.push_back("gapped condition needs exactly one energy-0 class, found " +
                               std::to_string(zero_classes));

    const int b0 = a.beta0_index();
    for (const auto& [key, tab] : a.ops) {
        auto [k, ci] = key;
        if (k < 0 || ci < 0 || ci >= (int)a.classes.size()) {
            r.violations.push_back("operation table with bad arity/class key");
            continue;
        }
        const ClassInfo& cls = a.classes[ci];
        if (k == 0 && ci == b0)
            r.violations.push_back("m_0 must have positive energy (no beta_0 entry)");
        for (const auto& [in, out] : tab) {
            if ((int)in.size() != k) {
                r.violations.push_back("table entry arity mismatch in class '" + cls.label +
                                       "'");
                continue;
            }
            int din = 0;
            bool bad = false;
            for (int16_t l : in) {
                if (l < 0 || l >= (int16_t)a.basis.size()) bad = true;
                else din += a.sdeg(l);
            }
            if (bad) {
                r.violations.push_back("table entry with unknown letter in class '" +
                                       cls.label + "'");
                continue;
            }
            for (const auto& [l, c] : out) {
                if (l < 0 || l >= (int16_t)a.basis.size()) {
                    r.violations.push_back("output letter out of range in class '" +
                                           cls.label + "'");
                    continue;
                }
                int want = din + 1 - (int)cls.maslov;
                int got = a.sdeg(l);
                bool ok = a.z2_mode ? mod2(want) == mod2(got) : want == got;
                if (!ok && c != 0) {
                    std::ostringstream os;
                    os << "degree violation: m_" << k << "," << cls.label << " on (";
                    for (std::size_t i = 0; i < in.size(); ++i)
                        os << (i ? "," : "") << a.basis[in[i]].id;
                    os << ") -> " << a.basis[l].id << " shifts degree by "
                       << (got - din) << ", expected " << (1 - (int)cls.maslov);
                    r.violations.push_back(os.str());
                }
            }
        }
    }
    return r;
}

ValidationReport unit_check(const AlgebraSpec& a) {
    ValidationReport r;
    const int u = a.unit_index();
    if (u < 0) {
        r.violations.push_back("no basis element flagged as unit");
        return r;
    }
    const int b0 = a.beta0_index();
    // m_{k+1}(..., I, ...) = 0 for k >= 2 or k = 0; m_2(I,x) = (-1)^deg x
    // m_2(x,I) = x, with the higher-energy parts of m_2 vanishing on I.
    for (const auto& [key, tab] : a.ops) {
        auto [k, ci] = key;
        for (const auto& [in, out] : tab) {
            bool has_unit = std::find(in.begin(), in.end(), (int16_t)u) != in.end();
            if (!has_unit || out.empty()) continue;
            if (k == 1 || k >= 3) {
                std::ostringstream os;
                os << "m_" << k << "," << a.classes[ci].label
                   << " must vanish on words containing the unit";
                r.violations.push_back(os.str());
            } else if (k == 2 && ci != b0) {
                r.violations.push_back("m_2," + a.classes[ci].label +
                                       " must vanish on words containing the unit");
            }
        }
    }
    if (b0 >= 0) {
        auto it = a.ops.find({2, b0});
        for (std::size_t x = 0; x < a.basis.size(); ++x) {
            QOut left, right;
            if (it != a.ops.end()) {
                auto lt = it->second.find({(int16_t)u, (int16_t)x});
                if (lt != it->second.end()) left = lt->second;
                auto rt = it->second.find({(int16_t)x, (int16_t)u});
                if (rt != it->second.end()) right = rt->second;
            }
            auto is_single = [&](const QOut& o, const Rat& coeff) {
                return o.size() == 1 && o[0].first == (int16_t)x && o[0].second == coeff;
            };
            if (!is_single(left, 1))
                r.violations.push_back("m_2(I," + a.basis[x].id + ") != " + a.basis[x].id);
            Rat want = (a.basis[x].degree % 2 == 0) ? 1 : -1;
            if (!is_single(right, want))
                r.violations.push_back("m_2(" + a.basis[x].id + ",I) != (-1)^deg " +
                                       a.basis[x].id);
        }
    }
    return r;
}

SignedVector dhat_word(const AlgebraSpec& a, const Word& w, const Rat& ceiling,
                       const Rat& floor, int kmax, int only_arity) {
    SignedVector out(Flavor::Plain, ceiling, floor);
    const auto sd = a.sdegs();
    const int n = (int)w.size();
    // Prefix parities of shifted degrees.
    std::vector<int> pref(n + 1, 0);
    for (int i = 0; i < n; ++i) pref[i + 1] = pref[i] + (sd[w.letters[i]] & 1);

    for (std::size_t ci = 0; ci < a.classes.size(); ++ci) {
        const ClassInfo& cls = a.classes[ci];
        const NovikovScalar cscale =
            NovikovScalar::monomial(1, cls.energy, cls.eexp(), ceiling, floor);
        if (cscale.is_zero()) continue;
        for (int k = 0; k <= std::min(n, kmax); ++k) {
            if (only_arity >= 0 && k != only_arity) continue;
            auto it = a.ops.find({k, (int)ci});
            if (it == a.ops.end()) continue;
            const OpTable& tab = it->second;
            if (k == 0) {
                auto jt = tab.find({});
                if (jt == tab.end()) continue;
                for (int i = 0; i <= n; ++i) {
                    int sign = (pref[i] & 1) ? -1 : 1;
                    for (const auto& [letter, c] : jt->second) {
                        Word nw = w;
                        nw.letters.insert(nw.letters.begin() + i, letter);
                        out.add(nw, cscale.scaled(sign * c));
                    }
                }
            } else {
                std::vector<int16_t> sub(k);
                for (int i = 0; i + k <= n; ++i) {
                    std::copy(w.letters.begin() + i, w.letters.begin() + i + k, sub.begin());
                    auto jt = tab.find(sub);
                    if (jt == tab.end()) continue;
                    int sign = (pref[i] & 1) ? -1 : 1;
                    for (const auto& [letter, c] : jt->second) {
                        Word nw;
                        nw.letters.reserve(n - k + 1);
                        nw.letters.assign(w.letters.begin(), w.letters.begin() + i);
                        nw.letters.push_back(letter);
                        nw.letters.insert(nw.letters.end(), w.letters.begin() + i + k,
                                          w.letters.end());
                        out.add(nw, cscale.scaled(sign * c));
                    }
                }
            }
        }
    }
    return out;
}

// Drops words beyond the window's length budget. With credit_length, a term
// of energy n*lambda0 may carry words up to length lmax + n.
static SignedVector clip_vector(const SignedVector& v, const Window& w, const Rat& lambda0) {
    SignedVector out(v.flavor(), v.ceiling(), v.floor());
    for (const auto& [word, s] : v.coef()) {
        int len = (int)word.size();
        if (len <= w.lmax) {
            out.add(word, s);
        } else if (w.credit_length && lambda0 > 0) {
            std::vector<NovTerm> keep;
            for (const auto& t : s.terms()) {
                Rat credit = t.energy / lambda0;
                if (Rat(len) - credit <= w.lmax) keep.push_back(t);
            }
            if (!keep.empty())
                out.add(word, NovikovScalar::normalized(keep, s.ceiling(), s.floor()));
        }
    }
    return out;
}

SignedVector dhat_apply(const AlgebraSpec& a, const SignedVector& v, const Window& win) {
    const auto sd = a.sdegs();
    const Rat l0 = a.energy_gcd();
    if (v.flavor() == Flavor::Plain) {
        SignedVector out(Flavor::Plain, v.ceiling(), v.floor());
        for (const auto& [word, s] : v.coef())
            out.add_scaled(dhat_word(a, word, v.ceiling(), v.floor(), win.kmax), s);
        return clip_vector(out, win, l0);
    }
    if (v.flavor() == Flavor::Cyclic || v.flavor() == Flavor::Symmetric) {
        SignedVector plain = embed_orbit_sums(v, sd);
        SignedVector img(Flavor::Plain, v.ceiling(), v.floor());
        for (const auto& [word, s] : plain.coef())
            img.add_scaled(dhat_word(a, word, v.ceiling(), v.floor(), win.kmax), s);
        return clip_vector(read_off_canonical(img, v.flavor()), win, l0);
    }
    throw DomainError("dhat_apply: unsupported flavor " + flavor_name(v.flavor()));
}

const DefectEntry* DefectReport::worst() const {
    const DefectEntry* best = nullptr;
    Valuation bv{};
    for (const auto& e : entries) {
        Valuation v = e.residual.valuation();
        if (!best || v < bv) {
            best = &e;
            bv = v;
        }
    }
    return best;
}

// Enumerates the plain window words of length <= lmax (cap-guarded).
static std::vector<Word> window_words(const AlgebraSpec& a, const Window& w) {
    std::vector<Word> words;
    words.push_back(plain_word({}));
    std::size_t cap = w.effective_cap();
    std::vector<Word> prev = words;
    for (int len = 1; len <= w.lmax; ++len) {
        std::vector<Word> next;
        for (const auto& p : prev)
            for (int16_t l = 0; l < (int16_t)a.basis.size(); ++l) {
                Word nw = p;
                nw.letters.push_back(l);
                next.push_back(std::move(nw));
            }
        for (const auto& nw : next) words.push_back(nw);
        if (words.size() > cap)
            throw ResourceError("window word count exceeds cap", words.size());
        prev = std::move(next);
    }
    return words;
}

DefectReport ainfty_defect(const AlgebraSpec& a, const Window& w) {
    // The square is evaluated without length clipping (insertions are
    // energy-bounded, so the result stays finite); the window bounds the
    // words tested, not the evaluation.
    Window exact = w;
    exact.lmax = 1 << 20;
    DefectReport rep;
    for (const auto& word : window_words(a, w)) {
        SignedVector v(Flavor::Plain, w.emax, 0);
        v.add(word, NovikovScalar::one(w.emax));
        SignedVector r = dhat_apply(a, dhat_apply(a, v, exact), exact);
        if (!r.is_zero()) rep.entries.push_back({word, r});
    }
    return rep;
}

DefectReport ainfty_defect_direct(const AlgebraSpec& a, const Window& w) {
    DefectReport rep;
    const auto sd = a.sdegs();
    for (const auto& word : window_words(a, w)) {
        const int n = (int)word.size();
        SignedVector res(Flavor::Plain, w.emax, 0);
        std::vector<int> pref(n + 1, 0);
        for (int i = 0; i < n; ++i) pref[i + 1] = pref[i] + (sd[word.letters[i]] & 1);
        // sum over inner arity k2 at position i and outer arity k1 = n-k2+1,
        // composed directly through the tables.
        for (std::size_t c2 = 0; c2 < a.classes.size(); ++c2) {
            const ClassInfo& cls2 = a.classes[c2];
            for (int k2 = 0; k2 <= std::min(n, w.kmax); ++k2) {
                auto it2 = a.ops.find({k2, (int)c2});
                if (it2 == a.ops.end()) continue;
                const int k1 = n - k2 + 1;
                if (k1 < 1 || k1 > w.kmax) continue;
                const int imax = k2 == 0 ? n : n - k2;
                for (int i = 0; i <= imax; ++i) {
                    std::vector<int16_t> sub(word.letters.begin() + i,
                                             word.letters.begin() + i + k2);
                    auto jt = it2->second.find(sub);
                    if (jt == it2->second.end()) continue;
                    int sign = (pref[i] & 1) ? -1 : 1;
                    for (const auto& [inner_letter, c_in] : jt->second) {
                        std::vector<int16_t> outer_word(word.letters.begin(),
                                                        word.letters.begin() + i);
                        outer_word.push_back(inner_letter);
                        outer_word.insert(outer_word.end(),
                                          word.letters.begin() + i + k2, word.letters.end());
                        for (std::size_t c1 = 0; c1 < a.classes.size(); ++c1) {
                            auto it1 = a.ops.find({k1, (int)c1});
                            if (it1 == a.ops.end()) continue;
                            auto ot = it1->second.find(outer_word);
                            if (ot == it1->second.end()) continue;
                            const ClassInfo& cls1 = a.classes[c1];
                            Rat energy = cls1.energy + cls2.energy;
                            if (energy >= w.emax) continue;
                            long ee = cls1.eexp() + cls2.eexp();
                            for (const auto& [out_letter, c_out] : ot->second)
                                res.add(plain_word({out_letter}),
                                        NovikovScalar::monomial(sign * c_in * c_out, energy,
                                                                ee, w.emax));
                        }
                    }
                }
            }
        }
        if (!res.is_zero()) rep.entries.push_back({word, res});
    }
    return rep;
}

SignedVector tensor(const SignedVector& a, const SignedVector& b) {
    SignedVector out(a.flavor(), a.ceiling(), std::min(a.floor(), b.floor()));
    for (const auto& [wa, sa] : a.coef())
        for (const auto& [wb, sb] : b.coef()) {
            NovikovScalar s = sa * sb;
            if (s.is_zero()) continue;
            Word w = wa;
            w.letters.insert(w.letters.end(), wb.letters.begin(), wb.letters.end());
            if (wb.mark >= 0) w.mark = (int16_t)(wa.size() + wb.mark);
            if (wa.mark >= 0) w.mark = wa.mark;
            out.add(w, s);
        }
    return out;
}

SignedVector exp_word_series(const SignedVector& b, int lmax_hint) {
    SignedVector acc(Flavor::Plain, b.ceiling(), b.floor());
    acc.add(plain_word({}), NovikovScalar::one(b.ceiling(), b.floor()));
    if (b.is_zero()) return acc;
    Valuation v = b.valuation();
    if (!v.is_infinite() && *v.value <= 0)
        throw DivergenceError("exp series needs positive valuation coefficients");
    SignedVector power = acc;
    while (true) {
        power = tensor(power, b);
        SignedVector kept(Flavor::Plain, b.ceiling(), b.floor());
        for (const auto& [w, s] : power.coef())
            if ((int)w.size() <= lmax_hint) kept.add(w, s);
        power = kept;
        if (power.is_zero()) break;
        for (const auto& [w, s] : power.coef()) acc.add(w, s);
    }
    return acc;
}

SignedVector HomomorphismSpec::f0(const Rat& ceiling, const Rat& floor) const {
    SignedVector v(Flavor::Plain, ceiling, floor);
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
        auto it = fops.find({0, (int)ci});
        if (it == fops.end()) continue;
        auto jt = it->second.find({});
        if (jt == it->second.end()) continue;
        for (const auto& [letter, c] : jt->second)
            v.add(plain_word({letter}),
                  NovikovScalar::monomial(c, classes[ci].energy, classes[ci].eexp(), ceiling,
                                          floor));
    }
    return v;
}

HomomorphismSpec identity_homomorphism(const AlgebraSpec& a) {
    HomomorphismSpec f;
    f.name = "id_" + a.name;
    f.source = a;
    f.target = a;
    f.classes = {ClassInfo{"beta0", 0, 0}};
    OpTable t;
    for (int16_t i = 0; i < (int16_t)a.basis.size(); ++i)
        t[{i}] = QOut{{i, 1}};
    f.fops[{1, 0}] = t;
    return f;
}

ValidationReport validate_hom(const HomomorphismSpec& f) {
    ValidationReport r;
    for (const auto& [key, tab] : f.fops) {
        auto [k, ci] = key;
        const ClassInfo& cls = f.classes.at(ci);
        if (k == 0 && cls.energy <= 0)
            r.violations.push_back("f_0(1) must have positive valuation");
        for (const auto& [in, out] : tab) {
            int din = 0;
            for (int16_t l : in) din += f.source.sdeg(l);
            for (const auto& [l, c] : out) {
                int want = din - (int)cls.maslov;
                int got = f.target.sdeg(l);
                bool ok = f.source.z2_mode ? mod2(want) == mod2(got) : want == got;
                if (!ok && c != 0)
                    r.violations.push_back("homomorphism degree violation in class '" +
                                           cls.label + "'");
            }
        }
    }
    return r;
}

SignedVector hom_apply(const HomomorphismSpec& f, const SignedVector& v, const Window& win) {
    if (v.flavor() != Flavor::Plain)
        throw DomainError("hom_apply expects a plain vector");
    const Rat ceiling = v.ceiling();
    const Rat floor = v.floor();
    // Cloud of f_0(1) letters allowed between consecutive blocks.
    SignedVector cloud = exp_word_series(f.f0(ceiling, floor), win.lmax);

    SignedVector out(Flavor::Plain, ceiling, floor);
    for (const auto& [word, s] : v.coef()) {
        const int n = (int)word.size();
        // g[i] = f-hat of the suffix starting at i, with a leading cloud.
        std::vector<SignedVector> g(n + 1, SignedVector(Flavor::Plain, ceiling, floor));
        g[n] = cloud;
        for (int i = n - 1; i >= 0; --i) {
            SignedVector blocks(Flavor::Plain, ceiling, floor);
            for (int j = 1; i + j <= n; ++j) {
                if (j > win.kmax) break;
                std::vector<int16_t> sub(word.letters.begin() + i,
                                         word.letters.begin() + i + j);
                SignedVector fblock(Flavor::Plain, ceiling, floor);
                for (std::size_t ci = 0; ci < f.classes.size(); ++ci) {
                    auto it = f.fops.find({j, (int)ci});
                    if (it == f.fops.end()) continue;
                    auto jt = it->second.find(sub);
                    if (jt == it->second.end()) continue;
                    for (const auto& [letter, c] : jt->second)
                        fblock.add(plain_word({letter}),
                                   NovikovScalar::monomial(c, f.classes[ci].energy,
                                                           f.classes[ci].eexp(), ceiling,
                                                           floor));
                }
                if (!fblock.is_zero()) blocks = blocks + tensor(fblock, g[i + j]);
            }
            g[i] = tensor(cloud, blocks);
        }
        const SignedVector& fw = n == 0 ? cloud : g[0];
        out.add_scaled(fw, s);
    }
    return clip_vector(out, win, f.target.energy_gcd());
}

DefectReport hom_chainmap_defect(const HomomorphismSpec& f, const Window& w) {
    Window exact = w;
    exact.lmax = 1 << 20;
    DefectReport rep;
    for (const auto& word : window_words(f.source, w)) {
        SignedVector v(Flavor::Plain, w.emax, 0);
        v.add(word, NovikovScalar::one(w.emax));
        SignedVector lhs = dhat_apply(f.target, hom_apply(f, v, exact), exact);
        SignedVector rhs = hom_apply(f, dhat_apply(f.source, v, exact), exact);
        SignedVector r = lhs - rhs;
        if (!r.is_zero()) rep.entries.push_back({word, r});
    }
    return rep;
}

// ---- bimodules ----

int BimoduleSpec::module_index_of(const std::string& id) const {
    for (std::size_t i = 0; i < module_basis.size(); ++i)
        if (module_basis[i].id == id) return (int)i;
    return -1;
}

std::vector<int> BimoduleSpec::mod_sdegs() const {
    std::vector<int> d(module_basis.size());
    for (std::size_t i = 0; i < module_basis.size(); ++i) d[i] = module_basis[i].degree - 1;
    return d;
}

std::vector<std::string> BimoduleSpec::mod_ids() const {
    std::vector<std::string> s(module_basis.size());
    for (std::size_t i = 0; i < module_basis.size(); ++i) s[i] = module_basis[i].id;
    return s;
}

BimoduleSpec diagonal_bimodule(const AlgebraSpec& a) {
    BimoduleSpec m;
    m.name = a.name + "_diag";
    m.left = a;
    m.right = a;
    m.module_basis = a.basis;
    for (auto& e : m.module_basis) e.is_unit = false;
    m.classes = a.classes;
    // n_{i,j} = m_{i+j+1}, the module slot read as an algebra letter.
    for (const auto& [key, tab] : a.ops) {
        auto [k, ci] = key;
        if (k < 1) continue;
        for (int i = 0; i + 1 <= k; ++i) {
            int j = k - 1 - i;
            NTable& nt = m.nops[{i, j, ci}];
            for (const auto& [in, out] : tab) {
                Word w;
                w.letters = in;
                w.mark = (int16_t)i;
                nt[w] = out;
            }
        }
    }
    return m;
}

ValidationReport validate_bimodule(const BimoduleSpec& m) {
    ValidationReport r;
    const auto msd = m.mod_sdegs();
    for (const auto& [key, tab] : m.nops) {
        auto [k1, k0, ci] = key;
        const ClassInfo& cls = m.classes.at(ci);
        for (const auto& [in, out] : tab) {
            if ((int)in.size() != k1 + k0 + 1 || in.mark != k1) {
                r.violations.push_back("n-table entry shape mismatch");
                continue;
            }
            int din = 0;
            for (std::size_t i = 0; i < in.size(); ++i)
                din += ((int)i == in.mark) ? msd[in.letters[i]]
                                           : m.left.sdeg(in.letters[i]);
            for (const auto& [l, c] : out) {
                int want = din + 1 - (int)cls.maslov;
                int got = msd.at(l);
                bool ok = m.left.z2_mode ? mod2(want) == mod2(got) : want == got;
                if (!ok && c != 0)
                    r.violations.push_back("bimodule degree violation in class '" +
                                           cls.label + "'");
            }
        }
    }
    return r;
}

SignedVector bimodule_dhat_word(const BimoduleSpec& m, const Word& w, const Rat& ceiling,
                                const Rat& floor, int kmax) {
    if (!w.marked()) throw DomainError("bimodule differential expects a marked word");
    SignedVector out(Flavor::Module, ceiling, floor);
    const int n = (int)w.size();
    const int a = w.mark;           // letters [0, a) left, [a+1, n) right
    const int b = n - a - 1;
    const auto lsd = m.left.sdegs();
    const auto rsd = m.right.sdegs();
    const auto msd = m.mod_sdegs();

    std::vector<int> pref(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        int d = (i == a) ? msd[w.letters[i]]
                         : (i < a ? lsd[w.letters[i]] : rsd[w.letters[i]]);
        pref[i + 1] = pref[i] + (d & 1);
    }
    auto sign_at = [&](int i) { return (pref[i] & 1) ? -1 : 1; };

    // Left and right bar coderivations (insertions stay inside their block;
    // the slot just before the mark belongs to the left block, the slot just
    // after it to the right block).
    auto block_terms = [&](const AlgebraSpec& alg, int lo, int hi) {
        for (std::size_t ci = 0; ci < alg.classes.size(); ++ci) {
            const ClassInfo& cls = alg.classes[ci];
            const NovikovScalar cscale =
                NovikovScalar::monomial(1, cls.energy, cls.eexp(), ceiling, floor);
            if (cscale.is_zero()) continue;
            for (int k = 0; k <= std::min(hi - lo, kmax); ++k) {
                auto it = alg.ops.find({k, (int)ci});
                if (it == alg.ops.end()) continue;
                if (k == 0) {
                    auto jt = it->second.find({});
                    if (jt == it->second.end()) continue;
                    for (int i = lo; i <= hi; ++i)
                        for (const auto& [letter, c] : jt->second) {
                            Word nw = w;
                            nw.letters.insert(nw.letters.begin() + i, letter);
                            if (i <= nw.mark) nw.mark += 1;
                            out.add(nw, cscale.scaled(sign_at(i) * c));
                        }
                } else {
                    for (int i = lo; i + k <= hi; ++i) {
                        std::vector<int16_t> sub(w.letters.begin() + i,
                                                 w.letters.begin() + i + k);
                        auto jt = it->second.find(sub);
                        if (jt == it->second.end()) continue;
                        for (const auto& [letter, c] : jt->second) {
                            Word nw;
                            nw.letters.assign(w.letters.begin(), w.letters.begin() + i);
                            nw.letters.push_back(letter);
                            nw.letters.insert(nw.letters.end(), w.letters.begin() + i + k,
                                              w.letters.end());
                            nw.mark = w.mark > i ? (int16_t)(w.mark - k + 1) : w.mark;
                            out.add(nw, cscale.scaled(sign_at(i) * c));
                        }
                    }
                }
            }
        }
    };
    block_terms(m.left, 0, a);
    block_terms(m.right, a + 1, n);

    // Middle terms n_{p,q}(x_{a-p+1..a}, v, z_{1..q}).
    for (const auto& [key, tab] : m.nops) {
        auto [p, q, ci] = key;
        if (p > a || q > b || p + q + 1 > kmax) continue;
        const ClassInfo& cls = m.classes.at(ci);
        const NovikovScalar cscale =
            NovikovScalar::monomial(1, cls.energy, cls.eexp(), ceiling, floor);
        if (cscale.is_zero()) continue;
        Word arg;
        arg.letters.assign(w.letters.begin() + (a - p), w.letters.begin() + (a + 1 + q));
        arg.mark = (int16_t)p;
        auto jt = tab.find(arg);
        if (jt == tab.end()) continue;
        int sign = sign_at(a - p);
        for (const auto& [letter, c] : jt->second) {
            Word nw;
            nw.letters.assign(w.letters.begin(), w.letters.begin() + (a - p));
            nw.mark = (int16_t)nw.letters.size();
            nw.letters.push_back(letter);
            nw.letters.insert(nw.letters.end(), w.letters.begin() + (a + 1 + q),
                              w.letters.end());
            out.add(nw, cscale.scaled(sign * c));
        }
    }
    return out;
}

SignedVector bimodule_dhat_apply(const BimoduleSpec& m, const SignedVector& v,
                                 const Window& win) {
    SignedVector out(Flavor::Module, v.ceiling(), v.floor());
    for (const auto& [word, s] : v.coef())
        out.add_scaled(bimodule_dhat_word(m, word, v.ceiling(), v.floor(), win.kmax), s);
    return clip_vector(out, win, m.left.energy_gcd());
}

static std::vector<Word> window_marked_words(const BimoduleSpec& m, const Window& w) {
    std::vector<Word> words;
    std::size_t cap = w.effective_cap();
    // All (left word, module letter, right word) with total length <= lmax.
    std::vector<std::vector<int16_t>> tails{{}};
    std::vector<std::vector<int16_t>> prev = tails;
    for (int len = 1; len < w.lmax; ++len) {
        std::vector<std::vector<int16_t>> next;
        for (const auto& p : prev)
            for (int16_t l = 0; l < (int16_t)m.left.basis.size(); ++l) {
                auto q = p;
                q.push_back(l);
                next.push_back(std::move(q));
            }
        tails.insert(tails.end(), next.begin(), next.end());
        prev = std::move(next);
        if (tails.size() * m.module_basis.size() > cap)
            throw ResourceError("bimodule window exceeds cap",
                                tails.size() * m.module_basis.size());
    }
    for (int16_t v = 0; v < (int16_t)m.module_basis.size(); ++v)
        for (const auto& t : tails)
            for (std::size_t split = 0; split <= t.size(); ++split) {
                Word w2;
                w2.letters.assign(t.begin(), t.begin() + split);
                w2.mark = (int16_t)split;
                w2.letters.push_back(v);
                w2.letters.insert(w2.letters.end(), t.begin() + split, t.end());
                words.push_back(std::move(w2));
            }
    return words;
}

DefectReport bimodule_defect(const BimoduleSpec& m, const Window& w) {
    Window exact = w;
    exact.lmax = 1 << 20;
    DefectReport rep;
    for (const auto& word : window_marked_words(m, w)) {
        SignedVector v(Flavor::Module, w.emax, 0);
        v.add(word, NovikovScalar::one(w.emax));
        SignedVector r = bimodule_dhat_apply(m, bimodule_dhat_apply(m, v, exact), exact);
        if (!r.is_zero()) rep.entries.push_back({word, r});
    }
    return rep;
}

BimoduleSpec pullback_bimodule(const HomomorphismSpec& f1, const HomomorphismSpec& f0,
                               const BimoduleSpec& m, const Window& win) {
    if (f1.target.name != m.left.name || f0.target.name != m.right.name)
        throw ConfigError("pullback: homomorphism targets do not match the bimodule");
    BimoduleSpec r;
    r.name = m.name + "_pullback";
    r.left = f1.source;
    r.right = f0.source;
    r.module_basis = m.module_basis;

    // Collected outputs per (k1, k0, input word) as Novikov combinations, then
    // re-split into monomial classes.
    std::map<std::tuple<int, int, Word>, std::map<std::pair<Rat, long>, QOut>> acc;
    const Rat ceiling = win.emax;

    auto add_out = [&](int k1, int k0, const Word& in, const NovikovScalar& s, int16_t l,
                       const Rat& c) {
        for (const auto& t : s.terms()) {
            QOut& slot = acc[{k1, k0, in}][{t.energy, t.eexp}];
            bool found = false;
            for (auto& [ol, oc] : slot)
                if (ol == l) {
                    oc += t.coeff * c;
                    found = true;
                }
            if (!found) slot.push_back({l, t.coeff * c});
        }
    };

    for (int k1 = 0; k1 + 1 <= win.lmax; ++k1)
        for (int k0 = 0; k1 + k0 + 1 <= std::min(win.lmax, win.kmax); ++k0) {
            // Enumerate source-side input words.
            std::vector<std::vector<int16_t>> lefts{{}}, rights{{}};
            for (int i = 0; i < k1; ++i) {
                std::vector<std::vector<int16_t>> nx;
                for (auto& p : lefts)
                    for (int16_t l = 0; l < (int16_t)r.left.basis.size(); ++l) {
                        auto q = p;
                        q.push_back(l);
                        nx.push_back(std::move(q));
                    }
                lefts = std::move(nx);
            }
            for (int i = 0; i < k0; ++i) {
                std::vector<std::vector<int16_t>> nx;
                for (auto& p : rights)
                    for (int16_t l = 0; l < (int16_t)r.right.basis.size(); ++l) {
                        auto q = p;
                        q.push_back(l);
                        nx.push_back(std::move(q));
                    }
                rights = std::move(nx);
            }
            for (const auto& lw : lefts)
                for (const auto& rw : rights)
                    for (int16_t v = 0; v < (int16_t)m.module_basis.size(); ++v) {
                        SignedVector lv(Flavor::Plain, ceiling, 0);
                        lv.add(plain_word(lw), NovikovScalar::one(ceiling));
                        SignedVector rv(Flavor::Plain, ceiling, 0);
                        rv.add(plain_word(rw), NovikovScalar::one(ceiling));
                        SignedVector fl = hom_apply(f1, lv, win);
                        SignedVector fr = hom_apply(f0, rv, win);
                        Word in;
                        in.letters = lw;
                        in.mark = (int16_t)k1;
                        in.letters.push_back(v);
                        in.letters.insert(in.letters.end(), rw.begin(), rw.end());
                        for (const auto& [flw, fls] : fl.coef())
                            for (const auto& [frw, frs] : fr.coef()) {
                                NovikovScalar s = fls * frs;
                                if (s.is_zero()) continue;
                                for (const auto& [key, tab] : m.nops) {
                                    auto [p, q, ci] = key;
                                    if (p != (int)flw.size() || q != (int)frw.size())
                                        continue;
                                    Word arg;
                                    arg.letters = flw.letters;
                                    arg.mark = (int16_t)p;
                                    arg.letters.push_back(v);
                                    arg.letters.insert(arg.letters.end(),
                                                       frw.letters.begin(),
                                                       frw.letters.end());
                                    auto jt = tab.find(arg);
                                    if (jt == tab.end()) continue;
                                    NovikovScalar sc = s * NovikovScalar::monomial(
                                                               1, m.classes[ci].energy,
                                                               m.classes[ci].eexp(), ceiling);
                                    if (sc.is_zero()) continue;
                                    for (const auto& [ol, oc] : jt->second)
                                        add_out(k1, k0, in, sc, ol, oc);
                                }
                            }
                    }
        }

    // Materialize classes for every (energy, eexp) slot that appeared.
    std::map<std::pair<Rat, long>, int> class_of;
    for (const auto& [key, slots] : acc)
        for (const auto& [slot, out] : slots)
            if (!class_of.count(slot)) {
                int idx = (int)r.classes.size();
                std::ostringstream os;
                os << "g" << idx << "_T" << to_string(slot.first) << "_e" << slot.second;
                r.classes.push_back(ClassInfo{os.str(), slot.first, 2 * slot.second});
                class_of[slot] = idx;
            }
    for (const auto& [key, slots] : acc) {
        auto [k1, k0, in] = key;
        for (const auto& [slot, out] : slots) {
            QOut cleaned;
            for (const auto& [l, c] : out)
                if (c != 0) cleaned.push_back({l, c});
            if (!cleaned.empty()) r.nops[{k1, k0, class_of[slot]}][in] = cleaned;
        }
    }
    if (r.classes.empty()) r.classes.push_back(ClassInfo{"beta0", 0, 0});
    bool has_zero = false;
    for (auto& c : r.classes)
        if (c.energy == 0) has_zero = true;
    if (!has_zero) r.classes.push_back(ClassInfo{"beta0", 0, 0});
    return r;
}

BimoduleHomSpec identity_bimodule_hom(const BimoduleSpec& m) {
    BimoduleHomSpec phi;
    phi.name = "id_" + m.name;
    phi.source = m;
    phi.target = m;
    phi.alpha = identity_homomorphism(m.left);
    phi.classes = {ClassInfo{"beta0", 0, 0}};
    NTable t;
    for (int16_t v = 0; v < (int16_t)m.module_basis.size(); ++v) {
        Word w;
        w.letters = {v};
        w.mark = 0;
        t[w] = QOut{{v, 1}};
    }
    phi.phiops[{0, 0, 0}] = t;
    return phi;
}

SignedVector build_gamma(const AlgebraSpec& a, const Window& w) {
    const int u = a.unit_index();
    if (u < 0) throw DomainError("gamma needs a strict unit");
    SignedVector m0 = a.m0(w.emax, 0);
    SignedVector unit(Flavor::Plain, w.emax, 0);
    unit.add(plain_word({(int16_t)u}), NovikovScalar::one(w.emax));
    SignedVector block = tensor(unit, m0);  // L (x) m_0
    SignedVector gamma(Flavor::Plain, w.emax, 0);
    SignedVector power(Flavor::Plain, w.emax, 0);
    power.add(plain_word({}), NovikovScalar::one(w.emax));
    int sign = 1;
    while (!power.is_zero()) {
        gamma.add_scaled(power, Rat(sign));
        power = tensor(power, block);
        sign = -sign;
    }
    return gamma;
}

std::size_t Window::effective_cap() const {
    if (cell_cap > 0) return cell_cap;
    if (const char* env = std::getenv("OBSTRUCTA_CAP")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v > 0) return (std::size_t)v;
    }
    return 200000;
}

}  // namespace obstructa
