#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "obstructa/novikov.hpp"

namespace obstructa {

// Flavors of tensor words. Cyclic and Symmetric vectors are stored on
// canonical orbit representatives and stand for the full signed orbit sum
// (the fixed-point convention). Module is a module-marked plain word;
// ModuleSym is the module-marked symmetric canonical form (mark first,
// sorted tail) realizing M[1] (x) E_k C.
enum class Flavor : uint8_t { Plain, Cyclic, Symmetric, Module, ModuleSym };

std::string flavor_name(Flavor f);

// A tensor word over basis indices. For marked flavors, letters[mark] indexes
// the module basis and every other letter indexes the algebra basis.
struct Word {
    std::vector<int16_t> letters;
    int16_t mark = -1;

    std::size_t size() const { return letters.size(); }
    bool marked() const { return mark >= 0; }

    bool operator==(const Word& o) const { return mark == o.mark && letters == o.letters; }
    bool operator<(const Word& o) const {
        if (letters.size() != o.letters.size()) return letters.size() < o.letters.size();
        if (mark != o.mark) return mark < o.mark;
        return letters < o.letters;
    }
};

inline Word plain_word(std::vector<int16_t> letters) {
    return Word{std::move(letters), -1};
}
inline Word marked_word(int16_t module_letter, std::vector<int16_t> tail) {
    Word w;
    w.letters.push_back(module_letter);
    w.letters.insert(w.letters.end(), tail.begin(), tail.end());
    w.mark = 0;
    return w;
}

// Shifted degree |x|' = deg x - 1 of each position of a word; the caller
// resolves letters through the owning spec (words store only ids).
using PosDegs = std::vector<int>;

// (-1)^{eps(sigma, x)} where eps counts, for every inversion of sigma, the
// product of the shifted degrees of the two letters that cross. sigma acts as
// out[i] = in[sigma[i]]; sdegs are the shifted degrees of the input positions.
int koszul_sign(const std::vector<int>& sigma, const PosDegs& sdegs);

// Composition with act(compose(s, t), w) == act(s, act(t, w)).
std::vector<int> compose(const std::vector<int>& s, const std::vector<int>& t);

// Signed permutation action on one word: returns the Koszul sign and the
// rearranged word (mark follows its letter).
std::pair<int, Word> act_on_word(const std::vector<int>& sigma, const Word& w,
                                 const PosDegs& sdegs);

struct Canon {
    Word rep;
    int sign = 1;      // input = sign * rep inside the orbit sum
    bool zero = false; // orbit cancels itself (repeated odd letter etc.)
};

// Canonical signed-orbit data of a word: the lexicographically least letter
// sequence reachable by the flavor's group action, the relative sign, and
// whether the symmetrized orbit vanishes identically.
Canon canonicalize(const Word& w, Flavor flavor, const PosDegs& sdegs);

// All distinct members of the signed orbit of a canonical representative,
// as (sign, word) pairs; the orbit sum Sum sign_i w_i is the invariant vector
// the representative stands for.
std::vector<std::pair<int, Word>> orbit_members(const Word& rep, Flavor flavor,
                                                const PosDegs& sdegs);

// Sparse NovikovScalar-linear combination of canonical words of one flavor.
class SignedVector {
  public:
    SignedVector() : flavor_(Flavor::Plain), ceiling_(0), floor_(0) {}
    SignedVector(Flavor f, const Rat& ceiling, const Rat& floor = 0)
        : flavor_(f), ceiling_(ceiling), floor_(floor) {}

    Flavor flavor() const { return flavor_; }
    const Rat& ceiling() const { return ceiling_; }
    const Rat& floor() const { return floor_; }
    const std::map<Word, NovikovScalar>& coef() const { return coef_; }
    bool is_zero() const { return coef_.empty(); }
    std::size_t size() const { return coef_.size(); }

    NovikovScalar at(const Word& w) const;
    void add(const Word& w, const NovikovScalar& c);
    void add_scaled(const SignedVector& v, const NovikovScalar& c);
    void add_scaled(const SignedVector& v, const Rat& c);

    SignedVector operator+(const SignedVector& o) const;
    SignedVector operator-(const SignedVector& o) const;
    SignedVector scaled(const NovikovScalar& c) const;
    SignedVector scaled(const Rat& c) const;
    bool operator==(const SignedVector& o) const;

    // Minimal valuation over all coefficients (+infinity when zero).
    Valuation valuation() const;

    std::string str(const std::vector<std::string>& alg_ids,
                    const std::vector<std::string>& mod_ids = {}) const;

  private:
    Flavor flavor_;
    std::map<Word, NovikovScalar> coef_;
    Rat ceiling_, floor_;
};

// sigma . (x1 (x) ... (x) xk) extended linearly; every word of v must have
// length |sigma|. sdeg_of resolves a letter index to its shifted degree.
SignedVector act(const std::vector<int>& sigma, const SignedVector& v,
                 const std::vector<int>& alg_sdeg);

// N = 1 + t + t^2 + ... + t^{n-1} applied length-wise, then canonicalized
// into the cyclic flavor (fixed-point image).
SignedVector cyclic_symmetrize(const SignedVector& v, const std::vector<int>& alg_sdeg);

// Sum over all permutations with Koszul signs, canonicalized into the
// symmetric flavor.
SignedVector full_symmetrize(const SignedVector& v, const std::vector<int>& alg_sdeg);

// Rotation by j slots of module-marked words, tracking the underline.
SignedVector module_cycle_action(int j, const SignedVector& v,
                                 const std::vector<int>& alg_sdeg,
                                 const std::vector<int>& mod_sdeg);

// Projection of an invariant plain (resp. marked-plain) vector onto canonical
// representatives of the given flavor: reads off the representatives'
// coefficients. Inverse of orbit-sum embedding on invariant vectors.
SignedVector read_off_canonical(const SignedVector& plain, Flavor flavor);

// Orbit-sum embedding of a canonical flavored vector into the plain
// (or marked-plain) space.
SignedVector embed_orbit_sums(const SignedVector& v, const std::vector<int>& alg_sdeg,
                              const std::vector<int>& mod_sdeg = {});

// Word literal syntax: `x1*x2`, module mark `[x2]`, prefixes `cyc:`/`sym:`.
std::string format_word(const Word& w, Flavor flavor, const std::vector<std::string>& alg_ids,
                        const std::vector<std::string>& mod_ids = {});
std::pair<Flavor, std::vector<std::pair<std::string, bool>>> parse_word_literal(
    const std::string& text);

PosDegs pos_degs(const Word& w, const std::vector<int>& alg_sdeg,
                 const std::vector<int>& mod_sdeg = {});

}  // namespace obstructa
