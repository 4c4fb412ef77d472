#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "obstructa/ce_dual.hpp"
#include "obstructa/examples.hpp"
#include "obstructa/hochschild.hpp"
#include "support.hpp"

using namespace obstructa;
using namespace testsupport;

TEST_CASE("every shipped spec passes the structural oracles") {
    Window w = small_window(3, 3);
    for (const auto& name : example_names()) {
        auto a = build_example(name);
        CHECK(validate_spec(a).ok());
        CHECK(ainfty_defect(a, w).empty());
        CHECK(ainfty_defect_direct(a, w).empty());
        if (a.unit_index() >= 0) CHECK(unit_check(a).ok());
        CHECK(bimodule_defect(diagonal_bimodule(a), small_window(2, 3)).empty());
    }
    CHECK_THROWS_AS(build_example("nope"), DomainError);
}

TEST_CASE("E2 and E3 isolate the obstruction phenomenon") {
    Window w = small_window(4, 3);
    auto e2 = build_example("E2");
    auto rep2 = obstruction_extract(e2, w);
    REQUIRE(rep2.has_obstruction);
    CHECK(!rep2.entries[0].m1_exact);
    CHECK(rep2.candidate_found);

    auto e3 = build_example("E3");
    auto rep3 = obstruction_extract(e3, w);
    REQUIRE(rep3.has_obstruction);
    CHECK(rep3.entries[0].m1_exact);
    CHECK(!rep3.candidate_found);
}

TEST_CASE("E3 bounding cochain solves order by order with a real correction") {
    auto e3 = build_example("E3");
    Window w = small_window(6, 3);
    auto b = solve_bounding_cochain(e3, w);
    CHECK(mc_defect(e3, b, w).is_zero());
    // the solved cochain carries both a first- and a second-order term
    auto s = b.at(plain_word({(int16_t)e3.index_of("u")}));
    REQUIRE(s.terms().size() == 2);
    CHECK(s.terms()[0].energy == 1);
    CHECK(s.terms()[1].energy == 2);

    // a second cochain shifted by the m1-kernel element z
    auto b2 = e3_second_cochain(e3, w);
    CHECK(mc_defect(e3, b2, w).is_zero());
    CHECK(!(b2 == b));

    // distinct cochains deform to algebras with equal Hochschild dims
    Window wd = small_window(3, 3);
    wd.kmax = 4;
    auto d1 = deform(e3, b, wd);
    auto d2 = deform(e3, b2, wd);
    Window wh = small_window(3, 3);
    wh.credit_length = true;
    auto h1 = hochschild_homology(d1, diagonal_bimodule(d1), wh);
    auto h2 = hochschild_homology(d2, diagonal_bimodule(d2), wh);
    std::set<int> degs;
    for (auto& r : h1.rows) degs.insert(r.degree);
    for (auto& r : h2.rows) degs.insert(r.degree);
    for (int d : degs) CHECK(h1.dim_at(d) == h2.dim_at(d));
}

TEST_CASE("E2 is obstructed: the solver reports the blocking level") {
    auto e2 = build_example("E2");
    Window w = small_window(4, 3);
    CHECK_THROWS_AS(solve_bounding_cochain(e2, w), DomainError);
}

TEST_CASE("round-trip save/load of the shipped examples") {
    for (const auto& name : example_names()) {
        auto a = build_example(name);
        auto text = save_algebra(a);
        auto back = load_algebra(text);
        CHECK(back.name == a.name);
        REQUIRE(back.basis.size() == a.basis.size());
        for (std::size_t i = 0; i < a.basis.size(); ++i) {
            CHECK(back.basis[i].id == a.basis[i].id);
            CHECK(back.basis[i].degree == a.basis[i].degree);
            CHECK(back.basis[i].is_unit == a.basis[i].is_unit);
        }
        REQUIRE(back.classes.size() == a.classes.size());
        for (std::size_t i = 0; i < a.classes.size(); ++i) {
            CHECK(back.classes[i].energy == a.classes[i].energy);
            CHECK(back.classes[i].maslov == a.classes[i].maslov);
        }
        CHECK(back.ops == a.ops);
    }
}

TEST_CASE("bimodule and homomorphism round trips") {
    auto a = build_example("E3");
    auto m = diagonal_bimodule(a);
    auto mb = load_bimodule(save_bimodule(m));
    CHECK(mb.nops == m.nops);
    CHECK(mb.module_basis.size() == m.module_basis.size());

    auto f = identity_homomorphism(a);
    auto fb = load_homomorphism(save_homomorphism(f));
    CHECK(fb.fops == f.fops);
}

TEST_CASE("loader errors carry location and naming") {
    std::ofstream bad("/tmp/obstructa_bad.json");
    bad << "{\n  \"name\": \"x\",\n  broken\n}\n";
    bad.close();
    try {
        load_spec_file("/tmp/obstructa_bad.json");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line >= 2);
    }

    std::ofstream bad2("/tmp/obstructa_bad2.json");
    bad2 << R"({"name":"x","basis":[{"id":"a","degree":"two"}],"classes":[]})";
    bad2.close();
    try {
        load_spec_file("/tmp/obstructa_bad2.json");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("degree") != std::string::npos);
    }

    // gappedness violation is caught by validate_spec and names the class
    auto e2 = build_example("E2");
    e2.classes[1].energy = 0;
    auto rep = validate_spec(e2);
    bool named = false;
    for (auto& v : rep.violations)
        if (v.find("b1") != std::string::npos || v.find("energy-0") != std::string::npos)
            named = true;
    CHECK(named);
}

TEST_CASE("shipped spec files match the builders") {
    for (const auto& name : example_names()) {
        std::string fname = name;
        for (auto& c : fname) c = (char)tolower(c);
        std::ifstream in("../specs/" + fname + ".spec.json");
        if (!in) in.open("specs/" + fname + ".spec.json");
        REQUIRE_MESSAGE(in.good(), "missing shipped spec file for ", name);
        std::stringstream ss;
        ss << in.rdbuf();
        auto a = load_algebra(ss.str());
        auto built = build_example(name);
        CHECK(a.ops == built.ops);
        CHECK(a.name == built.name);
    }
}
