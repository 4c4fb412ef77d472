#include <doctest.h>

#include <random>
#include <set>

#include "obstructa/ce_dual.hpp"
#include "support.hpp"

using namespace obstructa;
using namespace testsupport;

TEST_CASE("dual product: unit, graded commutativity, odd squares") {
    auto a = dga_spec();  // |I|' = -1, |p|' = 0, |q|' = 1
    auto l = symmetrize_algebra(a, 3);
    Rat ceil = 2, floor = -2;
    auto one = DualSeries::unit(ceil, floor);
    auto xp = DualSeries::variable(1, ceil, floor);
    auto xq = DualSeries::variable(2, ceil, floor);
    auto xI = DualSeries::variable(0, ceil, floor);

    CHECK(dual_product(l, one, xp, 8) == xp);
    // x_p is even (|p|' = 0): commutes with everything
    CHECK(dual_product(l, xp, xq, 8) == dual_product(l, xq, xp, 8));
    // x_q and x_I are odd: anticommute and square to zero
    auto qi = dual_product(l, xq, xI, 8);
    auto iq = dual_product(l, xI, xq, 8);
    CHECK(qi == iq.scaled(NovikovScalar::monomial(-1, 0, 0, ceil, floor)));
    CHECK(dual_product(l, xq, xq, 8).is_zero());
    // even squares survive
    CHECK(!dual_product(l, xp, xp, 8).is_zero());
    // associativity on random triples of generators
    auto assoc = dual_product(l, dual_product(l, xp, xq, 8), xI, 8);
    auto assoc2 = dual_product(l, xp, dual_product(l, xq, xI, 8), 8);
    CHECK(assoc == assoc2);
}

TEST_CASE("dual differential: unit functional and obstruction pairing") {
    // d*(1) = 0; (d* x_v)(1) = x_v(m0(1)) = T for the weak spec
    auto a = weak_spec();
    auto l = symmetrize_algebra(a, 4);
    Window w = small_window(3, 3);
    Rat floor = -3;
    auto one = DualSeries::unit(w.emax, floor);
    CHECK(dual_differential(l, one, w).is_zero());

    auto xv = DualSeries::variable(1, w.emax, floor);
    auto dxv = dual_differential(l, xv, w);
    CHECK(dxv.at(DualMonomial{}) == NovikovScalar::monomial(1, 1, 0, w.emax, floor));

    // Leibniz: d*(fg) = (d*f)g + (-1)^{|f|'} f (d*g) on generator pairs
    std::vector<DualSeries> gens{DualSeries::variable(0, w.emax, floor), xv};
    std::vector<int> gsd{-(-1), -(1)};  // |x_i|' = -|e_i|'
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = 0; j < gens.size(); ++j) {
            auto fg = dual_product(l, gens[i], gens[j], w.lmax);
            auto lhs = dual_differential(l, fg, w);
            auto rhs = dual_product(l, dual_differential(l, gens[i], w), gens[j], w.lmax);
            auto second = dual_product(l, gens[i], dual_differential(l, gens[j], w), w.lmax);
            rhs = (gsd[i] % 2 == 0) ? rhs + second : rhs - second;
            CHECK(lhs == rhs);
        }

    // (d*)^2 = 0 on generators
    for (auto& g : gens)
        CHECK(dual_differential(l, dual_differential(l, g, w), w).is_zero());
}

TEST_CASE("d^CE equals the restriction of the bimodule bar differential") {
    Window w = small_window(3, 3);
    w.kmax = 6;
    for (const AlgebraSpec& a : {dga_spec(), weak_spec(), m3_spec()}) {
        auto m = diagonal_bimodule(a);
        auto lm = lmodule_from_bimodule(m, w);
        const auto sd = a.sdegs();
        const auto msd = lm.mod_sdegs();
        Window exact = w;
        exact.lmax = 1 << 20;
        for (int16_t v = 0; v < (int16_t)lm.module_basis.size(); ++v)
            for (int k = 0; k <= 2; ++k)
                for (const auto& ms : canonical_multisets(a, k)) {
                    Word word = marked_word(v, ms);
                    if (canonicalize(word, Flavor::ModuleSym, pos_degs(word, sd, msd)).zero)
                        continue;
                    SignedVector x(Flavor::ModuleSym, w.emax);
                    x.add(word, NovikovScalar::one(w.emax));
                    // displayed shuffle formula
                    SignedVector route1 = dce_apply(lm, x, exact);
                    // restriction of D^M to the fixed subspace
                    SignedVector emb = embed_orbit_sums(x, sd, msd);
                    SignedVector img = bimodule_dhat_apply(m, emb, exact);
                    SignedVector route2 = read_off_canonical(img, Flavor::ModuleSym);
                    if (!(route1 == route2)) {
                        MESSAGE(a.name, " word ", format_word(word, Flavor::ModuleSym,
                                                              a.ids(), lm.mod_ids()));
                        MESSAGE("  displayed: ", route1.str(a.ids(), lm.mod_ids()));
                        MESSAGE("  restricted: ", route2.str(a.ids(), lm.mod_ids()));
                    }
                    CHECK(route1 == route2);
                }
        CHECK(dce_square_defect(lm, w).empty());
    }
}

TEST_CASE("ce chain homology counting cases") {
    Window w = small_window(3, 1);
    // all eta = 0, all l = 0: dims = cell counts
    AlgebraSpec z;
    z.name = "z";
    z.basis = {{"x", 1, false}, {"y", 2, false}};
    z.classes = {{"b0", 0, 0}};
    auto lz = lmodule_from_bimodule(diagonal_bimodule(z), w);
    auto rep = ce_chain_homology(lz, w);
    int cells = 0, hom = 0;
    for (auto& r : rep.rows) {
        cells += r.cells;
        hom += r.hom;
    }
    CHECK(cells == hom);
    CHECK(cells > 0);

    // empty module
    BimoduleSpec e;
    e.name = "e";
    e.left = e.right = z;
    e.classes = {{"b0", 0, 0}};
    auto le = lmodule_from_bimodule(e, w);
    CHECK(ce_chain_homology(le, w).rows.empty());
}

TEST_CASE("cyclic CE homology of zero brackets counts symmetric words") {
    AlgebraSpec z;
    z.name = "z";
    z.basis = {{"x", 1, false}, {"y", 2, false}};
    z.classes = {{"b0", 0, 0}};
    Window w = small_window(3, 1);
    auto l = symmetrize_algebra(z, 4);
    auto rep = cyclic_ce_homology(l, w);
    auto cb = enumerate_window(SpaceKind::SymGe1, z, w);
    int total = 0;
    for (auto& r : rep.rows) total += r.hom;
    CHECK(total == (int)cb.size());
}

TEST_CASE("symmetrization of L (x) m0 (x) L vanishes") {
    auto a = weak_spec();
    const auto sd = a.sdegs();
    // [L, m0-letter, L]: repeated odd-shifted unit letter kills the orbit
    Word w = plain_word({0, 1, 0});
    auto c = canonicalize(w, Flavor::Symmetric, pos_degs(w, sd));
    CHECK(c.zero);
}

TEST_CASE("vanishing certificate on the obstructed weak spec") {
    auto a = weak_spec();
    Window w = small_window(3, 3);
    auto rep = obstruction_extract(a, w);
    REQUIRE(rep.has_obstruction);
    CHECK(rep.lambda_min == 1);
    REQUIRE(rep.entries.size() == 1);
    CHECK(rep.entries[0].m1_cycle);
    CHECK(!rep.entries[0].m1_exact);
    REQUIRE(rep.candidate_found);
    REQUIRE(rep.certificate.ok);
    // h = 0 exactly for this spec: d*(y) = 1 on the nose
    CHECK(rep.certificate.h.is_zero());

    // sampled cocycles acquire verified witnesses
    auto l = symmetrize_algebra(a, 4);
    auto samples = cyclic_ce_vanishing(l, rep.certificate, w, 10, 42);
    CHECK(samples.sampled == 10);
    CHECK(samples.ok());

    // module side
    auto lm = lmodule_from_bimodule(diagonal_bimodule(a), w);
    auto msamples = ce_module_vanishing(lm, rep.certificate, w, 10, 43);
    CHECK(msamples.sampled == 10);
    CHECK(msamples.ok());
}

TEST_CASE("no certificate on the unobstructed side") {
    // mc-style spec: obstruction is m1-exact, no certificate is produced
    AlgebraSpec a;
    a.name = "Tmc";
    a.basis = {{"I", 0, true}, {"u", 1, false}, {"w", 2, false}};
    a.classes = {{"b0", 0, 0}, {"b1", 1, 0}};
    OpTable m1;
    m1[{1}] = QOut{{2, 1}};
    a.ops[{1, 0}] = m1;
    OpTable m2;
    for (int16_t x = 0; x < 3; ++x) {
        m2[{0, x}] = QOut{{x, 1}};
        m2[{x, 0}] = QOut{{x, a.basis[x].degree % 2 == 0 ? Rat(1) : Rat(-1)}};
    }
    a.ops[{2, 0}] = m2;
    OpTable m0;
    m0[{}] = QOut{{2, 1}};
    a.ops[{0, 1}] = m0;
    REQUIRE(validate_spec(a).ok());

    Window w = small_window(3, 3);
    auto rep = obstruction_extract(a, w);
    REQUIRE(rep.has_obstruction);
    REQUIRE(rep.entries.size() == 1);
    CHECK(rep.entries[0].m1_exact);
    CHECK(!rep.candidate_found);

    // m0 = 0 algebra reports no obstruction
    auto rep0 = obstruction_extract(dga_spec(), w);
    CHECK(!rep0.has_obstruction);
}

TEST_CASE("rejected candidates explain the failed hypothesis") {
    // a dual variable whose differential has no length-zero part
    auto a = weak_spec();
    auto l = symmetrize_algebra(a, 4);
    Window w = small_window(3, 3);
    auto cert = vanishing_certificate(l, DualSeries::variable(0, w.emax, -3), w);
    CHECK(!cert.ok);
    CHECK(cert.detail.find("length-zero") != std::string::npos);
}

TEST_CASE("duality: dual cohomology dims equal chain homology dims") {
    Window w = small_window(3, 2);
    w.credit_length = true;
    for (const AlgebraSpec& a : {dga_spec(), weak_spec()}) {
        auto l = symmetrize_algebra(a, 4);
        auto cx = cyclic_ce_complex(l, w);
        REQUIRE(cx.clean());
        auto chain = homology(cx);
        auto dual = dual_cohomology_dims(cx);
        for (auto& r : chain.rows) {
            int dd = 0;
            for (auto& s : dual)
                if (s.degree == -r.degree) dd = s.hom;
            CHECK(dd == r.hom);
        }
    }
}

TEST_CASE("materialized dual differential matches the transpose route") {
    auto a = weak_spec();
    auto l = symmetrize_algebra(a, 4);
    Window w = small_window(3, 2);
    auto cx = cyclic_ce_complex(l, w);
    // the coefficient of x^{M(w)} at T^lambda e^q in d*(x^{M(c)}) equals the
    // chain matrix entry from the cell (w, slot 0) into (c, (lambda, q))
    for (int tcell = 0; tcell < (int)cx.basis.cells.size(); ++tcell) {
        const Cell& c = cx.basis.cells[tcell];
        if (c.energy != 0 || c.eexp != 0 || c.word.size() < 1) continue;
        DualSeries f(w.emax, -2);
        f.add(DualMonomial{c.word.letters, -1}, NovikovScalar::one(w.emax, -2));
        auto df = dual_differential(l, f, w);
        for (int j0 = 0; j0 < (int)cx.basis.cells.size(); ++j0) {
            const Cell& src = cx.basis.cells[j0];
            if (src.energy != 0 || src.eexp != 0 || src.word.size() < 1) continue;
            NovikovScalar got = df.at(DualMonomial{src.word.letters, -1});
            for (const auto& [i, v] : cx.d.cols[j0]) {
                const Cell& tg = cx.basis.cells[i];
                if (!(tg.word == c.word)) continue;
                Rat coeff = 0;
                for (const auto& term : got.terms())
                    if (term.energy == tg.energy && term.eexp == tg.eexp)
                        coeff = term.coeff;
                CHECK(coeff == v);
            }
        }
    }
}
