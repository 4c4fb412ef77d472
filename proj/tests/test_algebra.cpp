#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace obstructa;
using namespace testsupport;

TEST_CASE("validate_spec accepts the specimens and catches violations") {
    CHECK(validate_spec(dga_spec()).ok());
    CHECK(validate_spec(weak_spec()).ok());
    CHECK(validate_spec(m3_spec()).ok());

    // all-zero operations over any basis is valid
    AlgebraSpec z;
    z.name = "zero";
    z.basis = {{"x", 0, false}, {"y", 3, false}};
    z.classes = {{"b0", 0, 0}};
    CHECK(validate_spec(z).ok());

    // m0 at energy 0
    AlgebraSpec bad = weak_spec();
    OpTable m0;
    m0[{}] = QOut{{1, 1}};
    bad.ops[{0, 0}] = m0;
    auto rep = validate_spec(bad);
    REQUIRE(!rep.ok());
    bool found = false;
    for (auto& v : rep.violations)
        if (v.find("positive energy") != std::string::npos) found = true;
    CHECK(found);

    // wrong degree shift
    AlgebraSpec bad2 = dga_spec();
    bad2.ops[{1, 0}][{2}] = QOut{{1, 1}};  // m1(q) = p lowers the degree
    auto rep2 = validate_spec(bad2);
    REQUIRE(!rep2.ok());
    found = false;
    for (auto& v : rep2.violations)
        if (v.find("degree violation") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("unit_check") {
    CHECK(unit_check(dga_spec()).ok());
    CHECK(unit_check(weak_spec()).ok());

    AlgebraSpec planted = dga_spec();
    planted.ops[{2, 0}][{0, 1}] = QOut{{1, 2}};  // m2(I,p) = 2p
    auto rep = unit_check(planted);
    REQUIRE(!rep.ok());
    bool names_p = false;
    for (auto& v : rep.violations)
        if (v.find("m_2(I,p)") != std::string::npos) names_p = true;
    CHECK(names_p);

    AlgebraSpec planted3 = dga_spec();
    OpTable m3;
    m3[{1, 0, 1}] = QOut{{2, 1}};  // m3(p, I, p) != 0
    planted3.ops[{3, 0}] = m3;
    CHECK(!unit_check(planted3).ok());

    AlgebraSpec nounit = m3_spec();
    CHECK(!unit_check(nounit).ok());
}

TEST_CASE("dhat on basic words") {
    auto a = weak_spec();
    Window w = small_window();

    // dhat(1) = m0(1)
    auto d1 = dhat_apply(a, unit_vector(plain_word({}), w.emax), w);
    CHECK(d1.size() == 1);
    CHECK(d1.at(plain_word({1})) == NovikovScalar::monomial(1, 1, 0, w.emax));

    // dhat(L) = m0 (x) L - L (x) m0 for the unit L
    auto dL = dhat_apply(a, unit_vector(plain_word({0}), w.emax), w);
    CHECK(dL.at(plain_word({1, 0})) == NovikovScalar::monomial(1, 1, 0, w.emax));
    CHECK(dL.at(plain_word({0, 1})) == NovikovScalar::monomial(-1, 1, 0, w.emax));
    CHECK(dL.size() == 2);

    // zero algebra
    AlgebraSpec z;
    z.name = "zero";
    z.basis = {{"x", 1, false}};
    z.classes = {{"b0", 0, 0}};
    CHECK(dhat_apply(z, unit_vector(plain_word({0}), w.emax), w).is_zero());
}

TEST_CASE("ainfty_defect on valid and planted specs") {
    Window w = small_window(4, 3);
    CHECK(ainfty_defect(dga_spec(), w).empty());
    CHECK(ainfty_defect(weak_spec(), w).empty());
    CHECK(ainfty_defect(m3_spec(), w).empty());

    // planted m1^2 != 0 with m0 = 0: residual on length-1 words
    AlgebraSpec bad;
    bad.name = "bad";
    bad.basis = {{"x", 0, false}, {"y", 1, false}, {"z", 2, false}};
    bad.classes = {{"b0", 0, 0}};
    OpTable m1;
    m1[{0}] = QOut{{1, 1}};
    m1[{1}] = QOut{{2, 1}};
    bad.ops[{1, 0}] = m1;
    auto rep = ainfty_defect(bad, w);
    REQUIRE(!rep.empty());
    bool len1 = false;
    for (auto& e : rep.entries)
        if (e.word.size() == 1) len1 = true;
    CHECK(len1);
}

TEST_CASE("two-route structure equation equivalence") {
    Window w = small_window(3, 3);
    w.lmax = 3;
    std::mt19937_64 rng(555);
    std::uniform_int_distribution<int> nbasis(1, 4), deg(-1, 3), coeff(-2, 2), nops(0, 6),
        arity(0, 3), cls(0, 1);
    int agree = 0;
    for (int trial = 0; trial < 50; ++trial) {
        // Degree-valid but otherwise random tables: the equivalence of the
        // two routes is a theorem only when every operation is odd after the
        // shift, i.e. when the degree axiom holds.
        AlgebraSpec a;
        a.name = "rand";
        int nb = nbasis(rng);
        for (int i = 0; i < nb; ++i)
            a.basis.push_back({"x" + std::to_string(i), deg(rng), false});
        a.classes = {{"b0", 0, 0}, {"b1", 1, 2}};
        int no = nops(rng);
        for (int t = 0; t < no; ++t) {
            int k = arity(rng);
            int ci = cls(rng);
            if (k == 0 && ci == 0) ci = 1;
            std::vector<int16_t> in(k);
            int din = 0;
            for (auto& l : in) {
                l = (int16_t)(rng() % nb);
                din += a.basis[l].degree - 1;
            }
            int want = din + 1 - (int)a.classes[ci].maslov;
            std::vector<int16_t> fits;
            for (int16_t l = 0; l < (int16_t)nb; ++l)
                if (a.basis[l].degree - 1 == want) fits.push_back(l);
            if (fits.empty()) continue;
            int16_t out = fits[rng() % fits.size()];
            Rat c = coeff(rng);
            if (c == 0) continue;
            a.ops[{k, ci}][in] = QOut{{out, c}};
        }
        REQUIRE(validate_spec(a).ok());
        auto direct = ainfty_defect_direct(a, w);
        auto viadd = ainfty_defect(a, w);
        CHECK(direct.empty() == viadd.empty());
        if (direct.empty() == viadd.empty()) ++agree;
        // stronger: residual words agree when both non-empty
        if (!direct.empty() && !viadd.empty()) {
            // route A residuals restricted to length-1 outputs match route B
            for (auto& e : direct.entries) {
                bool present = false;
                for (auto& f : viadd.entries)
                    if (f.word == e.word) present = true;
                CHECK(present);
            }
        }
    }
    CHECK(agree == 50);
}

TEST_CASE("homomorphisms: identity, exponential, chain map") {
    auto a = weak_spec();
    Window w = small_window(5, 3);
    auto id = identity_homomorphism(a);
    CHECK(validate_hom(id).ok());

    auto v = unit_vector(plain_word({0, 1}), w.emax);
    CHECK(hom_apply(id, v, w) == v);
    CHECK(hom_chainmap_defect(id, w).empty());

    // f-hat(1) = e^{f0(1)}: plant f0(1) = T v and check expansion
    // (such an f is a coalgebra map regardless of the chain-map equation)
    HomomorphismSpec f = id;
    f.classes.push_back({"b1", 1, 0});
    OpTable f0;
    f0[{}] = QOut{{1, 1}};
    f.fops[{0, 1}] = f0;
    Window wide = w;
    wide.lmax = 1 << 20;
    auto img = hom_apply(f, unit_vector(plain_word({}), w.emax), wide);
    // 1 + Tv + T^2 v(x)v (T^3 hits the ceiling)
    CHECK(img.at(plain_word({})) == NovikovScalar::one(w.emax));
    CHECK(img.at(plain_word({1})) == NovikovScalar::monomial(1, 1, 0, w.emax));
    CHECK(img.at(plain_word({1, 1})) == NovikovScalar::monomial(1, 2, 0, w.emax));
    CHECK(img.size() == 3);

    // comultiplication compatibility of f-hat on random small words:
    // Delta f-hat = (f-hat (x) f-hat) Delta, checked through the coefficient
    // of each splitting.
    std::mt19937_64 rng(808);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<int16_t> letters(2 + (int)(rng() % 2));
        for (auto& l : letters) l = (int16_t)(rng() % 2);
        auto word = plain_word(letters);
        auto fw = hom_apply(f, unit_vector(word, w.emax), wide);
        // Both Delta(f-hat w) and (f-hat (x) f-hat)(Delta w) as coefficient
        // maps on pairs of words.
        std::map<std::pair<Word, Word>, NovikovScalar> lhs, rhs;
        auto acc = [&](auto& side, const Word& u, const Word& v, const NovikovScalar& s) {
            if (s.is_zero()) return;
            auto key = std::make_pair(u, v);
            auto it = side.find(key);
            if (it == side.end()) side.emplace(key, s);
            else {
                it->second = it->second + s;
                if (it->second.is_zero()) side.erase(it);
            }
        };
        for (const auto& [ow, s] : fw.coef())
            for (std::size_t cut = 0; cut <= ow.size(); ++cut) {
                Word u = plain_word(std::vector<int16_t>(ow.letters.begin(),
                                                         ow.letters.begin() + cut));
                Word v = plain_word(std::vector<int16_t>(ow.letters.begin() + cut,
                                                         ow.letters.end()));
                acc(lhs, u, v, s);
            }
        for (std::size_t cut = 0; cut <= letters.size(); ++cut) {
            std::vector<int16_t> pre(letters.begin(), letters.begin() + cut);
            std::vector<int16_t> suf(letters.begin() + cut, letters.end());
            auto fp = hom_apply(f, unit_vector(plain_word(pre), w.emax), wide);
            auto fs = hom_apply(f, unit_vector(plain_word(suf), w.emax), wide);
            for (const auto& [u, su] : fp.coef())
                for (const auto& [v, sv] : fs.coef()) acc(rhs, u, v, su * sv);
        }
        CHECK(lhs == rhs);
    }
}

TEST_CASE("bimodules: diagonal is a bimodule, planted violation fails") {
    Window w = small_window(3, 3);
    CHECK(bimodule_defect(diagonal_bimodule(dga_spec()), w).empty());
    CHECK(bimodule_defect(diagonal_bimodule(weak_spec()), w).empty());
    CHECK(bimodule_defect(diagonal_bimodule(m3_spec()), w).empty());
    CHECK(validate_bimodule(diagonal_bimodule(dga_spec())).ok());

    // zero bimodule
    BimoduleSpec zb;
    zb.name = "zb";
    zb.left = zb.right = dga_spec();
    zb.module_basis = {{"m", 0, false}};
    zb.classes = {{"b0", 0, 0}};
    CHECK(bimodule_defect(zb, w).empty());

    // planted violation of the first bimodule equation
    BimoduleSpec bad = zb;
    NTable n00;
    Word mw;
    mw.letters = {0};
    mw.mark = 0;
    n00[mw] = QOut{{0, 1}};  // n00(m) = m of degree +1? degree violation aside,
    bad.nops[{0, 0, 0}] = n00;
    auto rep = bimodule_defect(bad, w);
    REQUIRE(!rep.empty());
    bool len00 = false;
    for (auto& e : rep.entries)
        if (e.word.size() == 1) len00 = true;
    CHECK(len00);
}

TEST_CASE("pullback along the identity is the identity") {
    Window w = small_window(3, 3);
    auto a = weak_spec();
    auto m = diagonal_bimodule(a);
    auto id = identity_homomorphism(a);
    auto pb = pullback_bimodule(id, id, m, w);
    CHECK(bimodule_defect(pb, w).empty());
    // operations agree on every materialized entry with the original
    for (const auto& [key, tab] : pb.nops) {
        auto [k1, k0, ci] = key;
        const auto& cls = pb.classes[ci];
        for (const auto& [in, out] : tab) {
            // find matching class in m
            bool matched = false;
            for (std::size_t cj = 0; cj < m.classes.size(); ++cj) {
                if (m.classes[cj].energy != cls.energy || m.classes[cj].maslov != cls.maslov)
                    continue;
                auto it = m.nops.find({k1, k0, (int)cj});
                if (it == m.nops.end()) continue;
                auto jt = it->second.find(in);
                if (jt == it->second.end()) continue;
                matched = jt->second == out;
            }
            CHECK(matched);
        }
    }
}

TEST_CASE("pullback along a scaling chain map") {
    Window w = small_window(4, 3);
    w.kmax = 5;
    auto a = m3_spec();
    auto m = diagonal_bimodule(a);
    // diagonal scaling compatible with m3(a,b,c) = d: 2 * 3 * 1 = 6
    auto f = identity_homomorphism(a);
    f.fops[{1, 0}][{0}] = QOut{{0, 2}};
    f.fops[{1, 0}][{1}] = QOut{{1, 3}};
    f.fops[{1, 0}][{2}] = QOut{{2, 1}};
    f.fops[{1, 0}][{3}] = QOut{{3, 6}};
    CHECK(hom_chainmap_defect(f, w).empty());

    auto once = pullback_bimodule(f, f, m, w);
    CHECK(bimodule_defect(once, w).empty());
    // pulled-back n_{1,1} on (a, [b], c) picks up the factor 2*1 = 2 on the
    // left/right legs (module slot untouched)
    bool found = false;
    for (const auto& [key, tab] : once.nops) {
        auto [k1, k0, ci] = key;
        if (k1 != 1 || k0 != 1) continue;
        Word in;
        in.letters = {0, 1, 2};
        in.mark = 1;
        auto it = tab.find(in);
        if (it != tab.end()) {
            REQUIRE(it->second.size() == 1);
            CHECK(it->second[0].first == 3);
            CHECK(it->second[0].second == 2);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("gamma is a dhat cycle with leading term 1") {
    auto a = weak_spec();
    Window w = small_window(12, 5);
    auto gamma = build_gamma(a, w);
    CHECK(gamma.at(plain_word({})) == NovikovScalar::one(w.emax));
    // (L (x) m0)^2 term carries (+1) T^2
    CHECK(gamma.at(plain_word({0, 1, 0, 1})) == NovikovScalar::monomial(1, 2, 0, w.emax));
    CHECK(dhat_apply(a, gamma, w).is_zero());
}
