#include <doctest.h>

#include <random>

#include "obstructa/linalg.hpp"

using namespace obstructa;

TEST_CASE("rref rank, membership, kernel") {
    ColMat m;
    m.resize(3, 3);
    // columns (1,1,0), (0,1,1), (1,2,1) -- third = first + second
    m.cols[0] = QVec{{0, 1}, {1, 1}};
    m.cols[1] = QVec{{1, 1}, {2, 1}};
    m.cols[2] = QVec{{0, 1}, {1, 2}, {2, 1}};
    CHECK(rank(m) == 2);
    auto ker = kernel_basis(m);
    REQUIRE(ker.size() == 1);
    // e2 - e0 - e1 up to scale
    QVec img = m.apply(ker[0]);
    CHECK(img.empty());

    auto sol = solve(m, QVec{{0, 1}, {1, 1}});
    REQUIRE(sol.has_value());
    QVec back = m.apply(*sol);
    CHECK(back == QVec{{0, Rat(1)}, {1, Rat(1)}});

    CHECK(!solve(m, QVec{{0, 1}}).has_value());
}

TEST_CASE("killing functional certifies non-membership") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> val(-3, 3);
    for (int trial = 0; trial < 50; ++trial) {
        Rref r;
        std::vector<QVec> cols;
        for (int j = 0; j < 4; ++j) {
            QVec c;
            for (int i = 0; i < 6; ++i) {
                int v = val(rng);
                if (v) c[i] = v;
            }
            cols.push_back(c);
            r.add(c);
        }
        QVec z;
        for (int i = 0; i < 6; ++i) {
            int v = val(rng);
            if (v) z[i] = v;
        }
        auto phi = r.killing_functional(z);
        if (!phi) {
            auto x = r.express(z);
            REQUIRE(x.has_value());
            QVec back;
            for (const auto& [j, c] : *x) qvec_add(back, cols[j], c);
            CHECK(back == z);
        } else {
            for (const auto& c : cols) CHECK(qvec_dot(*phi, c) == 0);
            CHECK(qvec_dot(*phi, z) != 0);
        }
    }
}

TEST_CASE("compose and add") {
    ColMat a, b;
    a.resize(2, 2);
    b.resize(2, 2);
    a.cols[0] = QVec{{1, 1}};          // e0 -> e1
    b.cols[1] = QVec{{0, 1}};          // e1 -> e0
    ColMat ab = compose(a, b);         // a after b: e1 -> e0 -> e1
    CHECK(ab.cols[1] == QVec{{1, Rat(1)}});
    ColMat s = add(a, b);
    CHECK(s.cols[0] == QVec{{1, Rat(1)}});
    CHECK(s.cols[1] == QVec{{0, Rat(1)}});
}
