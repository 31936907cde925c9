#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sublin/simplex_lp.hpp"
#include "sublin/errors.hpp"

using namespace sublin;

TEST_CASE("hand-solved LPs") {
    // max x+y s.t. 2x+y<=1, x+2y<=1 -> (1/3,1/3), value 2/3
    LpResult r = simplex_maximize({1, 1}, {{2, 1}, {1, 2}}, {1, 1});
    CHECK(r.status == LpResult::Status::optimal);
    CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(r.x[0] == doctest::Approx(1.0 / 3.0));
    CHECK(r.x[1] == doctest::Approx(1.0 / 3.0));
    CHECK(r.dual_gap <= 1e-9);

    // single variable
    LpResult s = simplex_maximize({2}, {{2}}, {1});
    CHECK(s.value == doctest::Approx(1.0));
}

TEST_CASE("unbounded detection") {
    LpResult r = simplex_maximize({1, 1}, {{1, -1}}, {1});
    CHECK(r.status == LpResult::Status::unbounded);
}

TEST_CASE("degenerate ties terminate") {
    // redundant constraints force degenerate pivots; Bland terminates
    LpResult r = simplex_maximize({1, 1, 1}, {{1, 1, 1}, {1, 1, 1}, {1, 0, 0}}, {1, 1, 1});
    CHECK(r.status == LpResult::Status::optimal);
    CHECK(r.value == doctest::Approx(1.0));
}

TEST_CASE("random LPs satisfy strong duality") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 1 + static_cast<int>(rng() % 6);
        int m = 1 + static_cast<int>(rng() % 6);
        std::vector<double> c(n), b(m, 1.0);
        for (double& v : c) v = u(rng);
        std::vector<std::vector<double>> A(m, std::vector<double>(n));
        for (auto& row : A)
            for (double& v : row) v = u(rng);
        LpResult r = simplex_maximize(c, A, b);
        REQUIRE(r.status == LpResult::Status::optimal);
        CHECK(r.dual_gap <= 1e-9 * (1.0 + std::abs(r.value)));
        // primal feasibility
        for (int i = 0; i < m; ++i) {
            double lhs = 0.0;
            for (int j = 0; j < n; ++j) lhs += A[i][j] * r.x[j];
            CHECK(lhs <= b[i] + 1e-9);
        }
        for (double x : r.x) CHECK(x >= -1e-12);
        // dual feasibility: A^T y >= c
        for (int j = 0; j < n; ++j) {
            double lhs = 0.0;
            for (int i = 0; i < m; ++i) lhs += A[i][j] * r.dual[i];
            CHECK(lhs >= c[j] - 1e-9);
        }
    }
}
