#include "obstructa/linfinity.hpp"

#include <algorithm>

#include "obstructa/errors.hpp"
#include "obstructa/window.hpp"

namespace obstructa {

namespace {

// All canonical multisets of size k over the basis, skipping self-cancelling
// ones (repeated odd-shifted letters).
void multisets_rec(const std::vector<int>& sdeg, int nb, int k, int from,
                   std::vector<int16_t>& cur, std::vector<std::vector<int16_t>>& out) {
    if ((int)cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (int16_t l = (int16_t)from; l < nb; ++l) {
        if (!cur.empty() && cur.back() == l && (sdeg[l] & 1)) continue;
        cur.push_back(l);
        multisets_rec(sdeg, nb, k, l, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<std::vector<int16_t>> canonical_multisets(const AlgebraSpec& a, int k) {
    std::vector<std::vector<int16_t>> out;
    std::vector<int16_t> cur;
    multisets_rec(a.sdegs(), (int)a.basis.size(), k, 0, cur, out);
    return out;
}

// Sign of sorting (y, rest...) into canonical order, where rest is already
// sorted; equals the Koszul cost of moving y past the smaller rest letters.
int insert_sign(int16_t y, int ydeg, const std::vector<int16_t>& rest,
                const std::vector<int>& sdeg) {
    if (!(ydeg & 1)) return 1;
    int crossed = 0;
    for (int16_t r : rest)
        if (r < y && (sdeg[r] & 1)) ++crossed;
    return (crossed & 1) ? -1 : 1;
}

// Koszul sign of the unshuffle moving the selected positions to the front
// (order preserved inside each group).
int shuffle_sign(const std::vector<int16_t>& word, const std::vector<int>& sdeg,
                 unsigned mask) {
    int sign = 1;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (!(mask >> i & 1)) continue;
        if (!(sdeg[word[i]] & 1)) continue;
        for (std::size_t j = 0; j < i; ++j)
            if (!(mask >> j & 1) && (sdeg[word[j]] & 1)) sign = -sign;
    }
    return sign;
}

bool canonical_split(const std::vector<int16_t>& word, unsigned mask) {
    for (std::size_t i = 0; i + 1 < word.size(); ++i)
        for (std::size_t j = i + 1; j < word.size(); ++j)
            if (word[i] == word[j] && !((mask >> i) & 1) && ((mask >> j) & 1)) return false;
    return true;
}

SignedVector LInfinitySpec::bracket(const std::vector<int16_t>& multiset, const Rat& ceiling,
                                    const Rat& floor) const {
    SignedVector out(Flavor::Plain, ceiling, floor);
    const int k = (int)multiset.size();
    for (std::size_t ci = 0; ci < algebra.classes.size(); ++ci) {
        auto it = lops.find({k, (int)ci});
        if (it == lops.end()) continue;
        auto jt = it->second.find(multiset);
        if (jt == it->second.end()) continue;
        const ClassInfo& cls = algebra.classes[ci];
        for (const auto& [letter, c] : jt->second)
            out.add(plain_word({letter}),
                    NovikovScalar::monomial(c, cls.energy, cls.eexp(), ceiling, floor));
    }
    return out;
}

LInfinitySpec symmetrize_algebra(const AlgebraSpec& a, int kmax) {
    LInfinitySpec l;
    l.algebra = a;
    l.kmax = kmax;
    const auto sd = a.sdegs();
    for (int k = 0; k <= kmax; ++k) {
        for (const auto& ms : canonical_multisets(a, k)) {
            Word rep = plain_word(ms);
            auto members = orbit_members(rep, Flavor::Symmetric, pos_degs(rep, sd));
            for (std::size_t ci = 0; ci < a.classes.size(); ++ci) {
                auto it = a.ops.find({k, (int)ci});
                if (it == a.ops.end()) continue;
                std::map<int16_t, Rat> acc;
                for (const auto& [sign, w] : members) {
                    auto jt = it->second.find(w.letters);
                    if (jt == it->second.end()) continue;
                    for (const auto& [letter, c] : jt->second)
                        acc[letter] += sign > 0 ? c : -c;
                }
                QOut out;
                for (const auto& [letter, c] : acc)
                    if (c != 0) out.push_back({letter, c});
                if (!out.empty()) l.lops[{k, (int)ci}][ms] = out;
            }
        }
    }
    return l;
}

DefectReport linfty_defect(const LInfinitySpec& l, const Window& win) {
    DefectReport rep;
    const AlgebraSpec& a = l.algebra;
    const auto sd = a.sdegs();

    // Table-shape check first: keys must be canonical non-vanishing multisets.
    for (const auto& [key, tab] : l.lops)
        for (const auto& [in, out] : tab) {
            Word w = plain_word(in);
            Canon c = canonicalize(w, Flavor::Symmetric, pos_degs(w, sd));
            if (!std::is_sorted(in.begin(), in.end()) || c.zero) {
                SignedVector marker(Flavor::Plain, win.emax);
                for (const auto& [letter, q] : out)
                    marker.add(plain_word({letter}),
                               NovikovScalar::monomial(q, 0, 0, win.emax));
                rep.entries.push_back({w, marker});
            }
        }
    if (!rep.entries.empty()) return rep;

    for (int k = 1; k <= std::min(win.lmax, l.kmax); ++k)
        for (const auto& ms : canonical_multisets(a, k)) {
            SignedVector res(Flavor::Plain, win.emax);
            for (unsigned mask = 0; mask < (1u << k); ++mask) {
                if (!canonical_split(ms, mask)) continue;
                std::vector<int16_t> sel, unsel;
                for (int i = 0; i < k; ++i)
                    ((mask >> i) & 1 ? sel : unsel).push_back(ms[i]);
                int k2 = (int)sel.size();
                int k1 = k - k2 + 1;
                if (k1 > l.kmax) continue;
                int ssign = shuffle_sign(ms, sd, mask);
                SignedVector inner = l.bracket(sel, win.emax);
                for (const auto& [iw, is] : inner.coef()) {
                    int16_t y = iw.letters[0];
                    // [l(sel), unsel]: vanishes when y repeats an odd letter
                    bool dead = false;
                    if (sd[y] & 1)
                        for (int16_t u : unsel)
                            if (u == y) dead = true;
                    if (dead) continue;
                    int isign = insert_sign(y, sd[y], unsel, sd);
                    std::vector<int16_t> outer(unsel);
                    outer.push_back(y);
                    std::sort(outer.begin(), outer.end());
                    SignedVector top = l.bracket(outer, win.emax);
                    res.add_scaled(top, is.scaled(ssign * isign));
                }
            }
            if (!res.is_zero()) rep.entries.push_back({plain_word(ms), res});
        }
    return rep;
}

std::vector<int> LModuleSpec::mod_sdegs() const {
    std::vector<int> d(module_basis.size());
    for (std::size_t i = 0; i < module_basis.size(); ++i) d[i] = module_basis[i].degree - 1;
    return d;
}

std::vector<std::string> LModuleSpec::mod_ids() const {
    std::vector<std::string> s(module_basis.size());
    for (std::size_t i = 0; i < module_basis.size(); ++i) s[i] = module_basis[i].id;
    return s;
}

SignedVector LModuleSpec::eta_apply(const Word& marked, const Rat& ceil,
                                    const Rat& floor) const {
    SignedVector out(Flavor::Module, ceil, floor);
    auto it = eta.find(marked);
    if (it == eta.end()) return out;
    for (const auto& [letter, s] : it->second)
        out.add(marked_word(letter, {}), s.retruncated(ceil, floor));
    return out;
}

LModuleSpec lmodule_from_bimodule(const BimoduleSpec& m, const Window& win) {
    if (m.left.name != m.right.name)
        throw ConfigError("L-infinity module extraction needs equal left and right algebras");
    LModuleSpec lm;
    lm.l = symmetrize_algebra(m.left, win.kmax);
    lm.module_basis = m.module_basis;
    lm.kmax = std::min(win.lmax, win.kmax);
    lm.ceiling = win.emax;
    const auto asd = m.left.sdegs();
    const auto msd = lm.mod_sdegs();
    Window exact = win;
    exact.lmax = 1 << 20;
    for (int16_t v = 0; v < (int16_t)m.module_basis.size(); ++v)
        for (int k = 0; k <= lm.kmax; ++k)
            for (const auto& ms : canonical_multisets(m.left, k)) {
                Word rep = marked_word(v, ms);
                Canon c = canonicalize(rep, Flavor::ModuleSym, pos_degs(rep, asd, msd));
                if (c.zero) continue;
                SignedVector fixed(Flavor::ModuleSym, win.emax);
                fixed.add(rep, NovikovScalar::one(win.emax));
                SignedVector plainv = embed_orbit_sums(fixed, asd, msd);
                SignedVector img = bimodule_dhat_apply(m, plainv, exact);
                std::vector<std::pair<int16_t, NovikovScalar>> out;
                for (const auto& [w, s] : img.coef())
                    if (w.size() == 1 && w.mark == 0) out.push_back({w.letters[0], s});
                if (!out.empty()) lm.eta[rep] = out;
            }
    return lm;
}

DefectReport lmodule_defect(const LModuleSpec& lm, const Window& win) {
    DefectReport rep;
    const AlgebraSpec& a = lm.l.algebra;
    const auto sd = a.sdegs();
    const auto msd = lm.mod_sdegs();
    for (int16_t v = 0; v < (int16_t)lm.module_basis.size(); ++v)
        for (int k = 0; k <= std::min(win.lmax, lm.kmax); ++k)
            for (const auto& ms : canonical_multisets(a, k)) {
                Word mw = marked_word(v, ms);
                Canon cz = canonicalize(mw, Flavor::ModuleSym, pos_degs(mw, sd, msd));
                if (cz.zero) continue;
                SignedVector res(Flavor::Module, win.emax);
                for (unsigned mask = 0; mask < (1u << k); ++mask) {
                    if (!canonical_split(ms, mask)) continue;
                    std::vector<int16_t> sel, unsel;
                    for (int i = 0; i < k; ++i)
                        ((mask >> i) & 1 ? sel : unsel).push_back(ms[i]);
                    int ssign = shuffle_sign(ms, sd, mask);
                    // eta_{k1}( eta_{k2}(v, sel), unsel )
                    SignedVector inner = lm.eta_apply(marked_word(v, sel), win.emax);
                    for (const auto& [iw, is] : inner.coef()) {
                        SignedVector top =
                            lm.eta_apply(marked_word(iw.letters[0], unsel), win.emax);
                        res.add_scaled(top, is.scaled(ssign));
                    }
                    // eta( v, [l_{k2}(sel), unsel] ), including the l_0 insertion
                    {
                        SignedVector linner = lm.l.bracket(sel, win.emax);
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
                            SignedVector top =
                                lm.eta_apply(marked_word(v, outer), win.emax);
                            res.add_scaled(top, is.scaled(ssign * isign));
                        }
                    }
                }
                if (!res.is_zero()) rep.entries.push_back({mw, res});
            }
    return rep;
}

}  // namespace obstructa
