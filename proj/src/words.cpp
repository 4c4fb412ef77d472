#include "obstructa/words.hpp"

#include <algorithm>
#include <sstream>

#include "obstructa/errors.hpp"

namespace obstructa {

std::string flavor_name(Flavor f) {
    switch (f) {
        case Flavor::Plain: return "plain";
        case Flavor::Cyclic: return "cyc";
        case Flavor::Symmetric: return "sym";
        case Flavor::Module: return "mod";
        case Flavor::ModuleSym: return "modsym";
    }
    return "?";
}

int koszul_sign(const std::vector<int>& sigma, const PosDegs& sdegs) {
    if (sigma.size() != sdegs.size())
        throw DomainError("koszul_sign: permutation/degree length mismatch");
    int sign = 1;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        for (std::size_t j = i + 1; j < sigma.size(); ++j)
            if (sigma[i] > sigma[j] && (sdegs[sigma[i]] & 1) && (sdegs[sigma[j]] & 1))
                sign = -sign;
    return sign;
}

std::vector<int> compose(const std::vector<int>& s, const std::vector<int>& t) {
    // act(s, act(t, w))_i = act(t, w)_{s[i]} = w_{t[s[i]]}
    std::vector<int> r(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) r[i] = t[s[i]];
    return r;
}

std::pair<int, Word> act_on_word(const std::vector<int>& sigma, const Word& w,
                                 const PosDegs& sdegs) {
    if (sigma.size() != w.size())
        throw DomainError("act: permutation size does not match word length");
    Word out;
    out.letters.resize(w.size());
    out.mark = -1;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        out.letters[i] = w.letters[sigma[i]];
        if (w.mark == sigma[i]) out.mark = (int16_t)i;
    }
    return {koszul_sign(sigma, sdegs), out};
}

PosDegs pos_degs(const Word& w, const std::vector<int>& alg_sdeg,
                 const std::vector<int>& mod_sdeg) {
    PosDegs d(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        d[i] = ((int)i == w.mark) ? mod_sdeg.at(w.letters[i]) : alg_sdeg.at(w.letters[i]);
    return d;
}

// Single rotation taking the first letter to the back; returns the Koszul
// sign of the move.
static int rotate_once(Word& w, PosDegs& d) {
    if (w.size() <= 1) return 1;
    int head = d[0];
    int rest = 0;
    for (std::size_t i = 1; i < d.size(); ++i) rest += (d[i] & 1);
    int sign = ((head & 1) && (rest & 1)) ? -1 : 1;
    std::rotate(w.letters.begin(), w.letters.begin() + 1, w.letters.end());
    std::rotate(d.begin(), d.begin() + 1, d.end());
    if (w.mark == 0)
        w.mark = (int16_t)(w.size() - 1);
    else if (w.mark > 0)
        w.mark -= 1;
    return sign;
}

// Sign of the arrangement `arr` of items relative to ascending item order,
// where item i has shifted degree sdegs[i]. arr[i] = item placed at slot i.
static int arrangement_sign(const std::vector<int>& arr, const PosDegs& sdegs) {
    return koszul_sign(arr, sdegs);
}

Canon canonicalize(const Word& w, Flavor flavor, const PosDegs& sdegs) {
    Canon c;
    switch (flavor) {
        case Flavor::Plain:
        case Flavor::Module:
            c.rep = w;
            return c;
        case Flavor::Cyclic: {
            Word cur = w;
            PosDegs d = sdegs;
            int sign = 1;
            Word best = cur;
            int best_sign = 1;
            // Walk the full rotation cycle; detect a sign clash when the same
            // sequence reappears with the opposite sign.
            std::vector<std::pair<Word, int>> seen;
            for (std::size_t j = 0; j < w.size(); ++j) {
                for (auto& [sw, ss] : seen)
                    if (sw == cur) {
                        if (ss != sign) {
                            c.zero = true;
                            return c;
                        }
                    }
                seen.push_back({cur, sign});
                if (cur.letters < best.letters) {
                    best = cur;
                    best_sign = sign;
                }
                sign *= rotate_once(cur, d);
            }
            // Completing the cycle must return sign +1, else the orbit cancels.
            if (cur == w && sign != 1) {
                c.zero = true;
                return c;
            }
            c.rep = best;
            c.sign = best_sign;  // w = best_sign^{-1}... signs are +-1, symmetric
            return c;
        }
        case Flavor::Symmetric:
        case Flavor::ModuleSym: {
            // Repeated odd-shifted-degree letters force cancellation
            // (a transposition of the two equal letters flips the sign).
            // For ModuleSym the marked letter is a distinct item and only the
            // tail letters can collide.
            for (std::size_t i = 0; i < w.size(); ++i)
                for (std::size_t j = i + 1; j < w.size(); ++j)
                    if ((int)i != w.mark && (int)j != w.mark &&
                        w.letters[i] == w.letters[j] && (sdegs[i] & 1)) {
                        c.zero = true;
                        return c;
                    }
            // Canonical arrangement: mark first (if any), tail ascending.
            std::vector<int> items(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) items[i] = (int)i;
            std::stable_sort(items.begin(), items.end(), [&](int a, int b) {
                bool ma = a == w.mark, mb = b == w.mark;
                if (ma != mb) return ma;
                return w.letters[a] < w.letters[b];
            });
            // items[i] = original position placed at slot i: exactly act().
            auto [sign, rep] = act_on_word(items, w, sdegs);
            c.rep = rep;
            c.sign = sign;
            return c;
        }
    }
    return c;
}

std::vector<std::pair<int, Word>> orbit_members(const Word& rep, Flavor flavor,
                                                const PosDegs& sdegs) {
    std::vector<std::pair<int, Word>> out;
    switch (flavor) {
        case Flavor::Plain:
            out.push_back({1, rep});
            return out;
        case Flavor::Cyclic:
        case Flavor::Module: {
            Word cur = rep;
            PosDegs d = sdegs;
            int sign = 1;
            for (std::size_t j = 0; j < std::max<std::size_t>(rep.size(), 1); ++j) {
                bool dup = false;
                for (auto& [s, w] : out)
                    if (w == cur) dup = true;
                if (!dup) out.push_back({sign, cur});
                sign *= rotate_once(cur, d);
                if (cur == rep) break;
            }
            return out;
        }
        case Flavor::Symmetric:
        case Flavor::ModuleSym: {
            const std::size_t n = rep.size();
            std::vector<int> arr(n);
            for (std::size_t i = 0; i < n; ++i) arr[i] = (int)i;
            // Enumerate distinct letter sequences: permute positions, skipping
            // arrangements that reproduce an already-seen sequence. Positions
            // of equal tail letters are interchangeable; restricting to
            // arrangements where equal letters keep ascending position order
            // picks each distinct sequence exactly once.
            std::sort(arr.begin(), arr.end());
            do {
                bool skip = false;
                for (std::size_t i = 0; i + 1 < n && !skip; ++i)
                    for (std::size_t j = i + 1; j < n && !skip; ++j)
                        if (rep.letters[arr[i]] == rep.letters[arr[j]] &&
                            arr[i] > arr[j] && (int)arr[i] != rep.mark &&
                            (int)arr[j] != rep.mark)
                            skip = true;
                if (skip) continue;
                auto [sign, w] = act_on_word(arr, rep, sdegs);
                out.push_back({sign, w});
            } while (std::next_permutation(arr.begin(), arr.end()));
            std::sort(out.begin(), out.end(),
                      [](const auto& a, const auto& b) { return a.second < b.second; });
            return out;
        }
    }
    return out;
}

NovikovScalar SignedVector::at(const Word& w) const {
    auto it = coef_.find(w);
    if (it == coef_.end()) return NovikovScalar::zero(ceiling_, floor_);
    return it->second;
}

void SignedVector::add(const Word& w, const NovikovScalar& c) {
    if (c.is_zero()) return;
    auto it = coef_.find(w);
    if (it == coef_.end()) {
        coef_.emplace(w, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) coef_.erase(it);
    }
}

void SignedVector::add_scaled(const SignedVector& v, const NovikovScalar& c) {
    for (const auto& [w, s] : v.coef_) add(w, s * c);
}

void SignedVector::add_scaled(const SignedVector& v, const Rat& c) {
    for (const auto& [w, s] : v.coef_) add(w, s.scaled(c));
}

SignedVector SignedVector::operator+(const SignedVector& o) const {
    SignedVector r = *this;
    for (const auto& [w, s] : o.coef_) r.add(w, s);
    return r;
}

SignedVector SignedVector::operator-(const SignedVector& o) const {
    SignedVector r = *this;
    for (const auto& [w, s] : o.coef_) r.add(w, -s);
    return r;
}

SignedVector SignedVector::scaled(const NovikovScalar& c) const {
    SignedVector r(flavor_, ceiling_, floor_);
    for (const auto& [w, s] : coef_) r.add(w, s * c);
    return r;
}

SignedVector SignedVector::scaled(const Rat& c) const {
    SignedVector r(flavor_, ceiling_, floor_);
    if (c == 0) return r;
    for (const auto& [w, s] : coef_) r.add(w, s.scaled(c));
    return r;
}

bool SignedVector::operator==(const SignedVector& o) const {
    return flavor_ == o.flavor_ && coef_ == o.coef_;
}

Valuation SignedVector::valuation() const {
    Valuation best{};
    for (const auto& [w, s] : coef_) {
        Valuation v = s.valuation();
        if (v < best) best = v;
    }
    return best;
}

std::string SignedVector::str(const std::vector<std::string>& alg_ids,
                              const std::vector<std::string>& mod_ids) const {
    if (coef_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, s] : coef_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << s.str() << ")";
        if (w.size() > 0) os << "*" << format_word(w, flavor_, alg_ids, mod_ids);
        else os << "*1";
    }
    return os.str();
}

SignedVector act(const std::vector<int>& sigma, const SignedVector& v,
                 const std::vector<int>& alg_sdeg) {
    SignedVector out(v.flavor(), v.ceiling(), v.floor());
    for (const auto& [w, s] : v.coef()) {
        auto [sign, nw] = act_on_word(sigma, w, pos_degs(w, alg_sdeg));
        out.add(nw, sign > 0 ? s : -s);
    }
    return out;
}

SignedVector cyclic_symmetrize(const SignedVector& v, const std::vector<int>& alg_sdeg) {
    SignedVector acc(Flavor::Plain, v.ceiling(), v.floor());
    for (const auto& [w, s] : v.coef()) {
        Word cur = w;
        PosDegs d = pos_degs(w, alg_sdeg);
        int sign = 1;
        for (std::size_t j = 0; j < std::max<std::size_t>(w.size(), 1); ++j) {
            acc.add(cur, sign > 0 ? s : -s);
            // N is built from t = "last letter to front", the inverse of the
            // head rotation; over a full cycle both enumerate the same
            // rotations with the same signs.
            sign *= rotate_once(cur, d);
        }
    }
    SignedVector out = read_off_canonical(acc, Flavor::Cyclic);
    return out;
}

SignedVector full_symmetrize(const SignedVector& v, const std::vector<int>& alg_sdeg) {
    SignedVector acc(Flavor::Plain, v.ceiling(), v.floor());
    for (const auto& [w, s] : v.coef()) {
        const std::size_t n = w.size();
        PosDegs d = pos_degs(w, alg_sdeg);
        std::vector<int> arr(n);
        for (std::size_t i = 0; i < n; ++i) arr[i] = (int)i;
        std::sort(arr.begin(), arr.end());
        do {
            auto [sign, nw] = act_on_word(arr, w, d);
            acc.add(nw, sign > 0 ? s : -s);
        } while (std::next_permutation(arr.begin(), arr.end()));
        if (n == 0) acc.add(w, s);
    }
    return read_off_canonical(acc, Flavor::Symmetric);
}

SignedVector module_cycle_action(int j, const SignedVector& v,
                                 const std::vector<int>& alg_sdeg,
                                 const std::vector<int>& mod_sdeg) {
    SignedVector out(v.flavor(), v.ceiling(), v.floor());
    for (const auto& [w, s] : v.coef()) {
        Word cur = w;
        PosDegs d = pos_degs(w, alg_sdeg, mod_sdeg);
        int sign = 1;
        int n = (int)w.size();
        for (int r = 0; r < ((j % std::max(n, 1)) + n) % std::max(n, 1); ++r)
            sign *= rotate_once(cur, d);
        out.add(cur, sign > 0 ? s : -s);
    }
    return out;
}

SignedVector read_off_canonical(const SignedVector& plain, Flavor flavor) {
    SignedVector out(flavor, plain.ceiling(), plain.floor());
    for (const auto& [w, s] : plain.coef()) {
        bool canonical = true;
        switch (flavor) {
            case Flavor::Plain:
            case Flavor::Module:
                break;
            case Flavor::Cyclic: {
                Word cur = w;
                PosDegs dummy(w.size(), 0);  // lex-min test needs no degrees
                for (std::size_t j = 0; j + 1 < w.size() && canonical; ++j) {
                    std::rotate(cur.letters.begin(), cur.letters.begin() + 1,
                                cur.letters.end());
                    if (cur.letters < w.letters) canonical = false;
                }
                break;
            }
            case Flavor::Symmetric:
                canonical = std::is_sorted(w.letters.begin(), w.letters.end());
                break;
            case Flavor::ModuleSym:
                canonical = w.mark == 0 &&
                            std::is_sorted(w.letters.begin() + 1, w.letters.end());
                break;
        }
        if (canonical) out.add(w, s);
    }
    return out;
}

SignedVector embed_orbit_sums(const SignedVector& v, const std::vector<int>& alg_sdeg,
                              const std::vector<int>& mod_sdeg) {
    Flavor target = (v.flavor() == Flavor::ModuleSym || v.flavor() == Flavor::Module)
                        ? Flavor::Module
                        : Flavor::Plain;
    SignedVector out(target, v.ceiling(), v.floor());
    for (const auto& [w, s] : v.coef()) {
        for (auto& [sign, member] :
             orbit_members(w, v.flavor(), pos_degs(w, alg_sdeg, mod_sdeg)))
            out.add(member, sign > 0 ? s : -s);
    }
    return out;
}

std::string format_word(const Word& w, Flavor flavor, const std::vector<std::string>& alg_ids,
                        const std::vector<std::string>& mod_ids) {
    std::ostringstream os;
    if (flavor == Flavor::Cyclic) os << "cyc:";
    if (flavor == Flavor::Symmetric) os << "sym:";
    if (w.size() == 0) {
        os << "1";
        return os.str();
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) os << "*";
        if ((int)i == w.mark)
            os << "[" << mod_ids.at(w.letters[i]) << "]";
        else
            os << alg_ids.at(w.letters[i]);
    }
    return os.str();
}

std::pair<Flavor, std::vector<std::pair<std::string, bool>>> parse_word_literal(
    const std::string& text) {
    Flavor f = Flavor::Plain;
    std::size_t i = 0;
    if (text.rfind("cyc:", 0) == 0) {
        f = Flavor::Cyclic;
        i = 4;
    } else if (text.rfind("sym:", 0) == 0) {
        f = Flavor::Symmetric;
        i = 4;
    }
    std::vector<std::pair<std::string, bool>> letters;
    bool any_mark = false;
    while (i < text.size()) {
        bool mark = false;
        if (text[i] == '[') {
            mark = true;
            any_mark = true;
            ++i;
        }
        std::size_t j = i;
        while (j < text.size() && text[j] != '*' && text[j] != ']') ++j;
        if (j == i) throw ParseError("empty letter in word literal", 0, (int)i);
        letters.push_back({text.substr(i, j - i), mark});
        i = j;
        if (i < text.size() && text[i] == ']') ++i;
        if (i < text.size()) {
            if (text[i] != '*') throw ParseError("expected '*' in word literal", 0, (int)i);
            ++i;
        }
    }
    if (letters.size() == 1 && letters[0].first == "1" && f == Flavor::Plain) letters.clear();
    if (any_mark && f == Flavor::Plain) f = Flavor::Module;
    return {f, letters};
}

}  // namespace obstructa
