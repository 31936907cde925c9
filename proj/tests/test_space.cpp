#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "sublin/space.hpp"
#include "testutil.hpp"

using namespace sublin;

TEST_CASE("measure basics") {
    Measure m(std::vector<double>{0.5, 0.0, 1.5});
    CHECK(m.total() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(m.support() == std::vector<int>{0, 2});
    CHECK(m.mass({0, 1}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(Measure(std::vector<double>{-1.0}), Error);
}

TEST_CASE("space construction") {
    Space one(1, {0.5});
    CHECK(one.sigma().total() == doctest::Approx(0.5));

    Space two(2, {1.0, 1.0}, std::vector<double>{0.0, 0.0});
    CHECK(two.sigma().total() == doctest::Approx(2.0));
    CHECK(two.mu().has_value());

    CHECK_THROWS_AS(Space(2, {0.0, 0.0}), ZeroSigma);
    CHECK_THROWS_AS(Space(2, {1.0}), LengthMismatch);
    CHECK_THROWS_AS(Space(2, {1.0, 1.0}, std::vector<double>{1.0}), LengthMismatch);
}

TEST_CASE("ball from definition") {
    Kernel k = kernel_from_matrix({{2, 1}, {1, 2}});
    CHECK(k.ball(0, 0.6) == std::vector<int>{0});  // G(1,1)=2 > 1/0.6
    CHECK(k.ball(0, 2.0) == std::vector<int>{0, 1});
    // r = 1/G(x,y) exactly: strict inequality excludes y
    CHECK(k.ball(0, 1.0) == std::vector<int>{0});
    CHECK(k.ball(0, 0.5) == std::vector<int>{});
}

TEST_CASE("ball decomposition worked examples") {
    Kernel k = kernel_from_matrix({{2, 1}, {1, 2}});
    const BallDecomposition& d = k.decomposition(0);
    CHECK(d.levels == std::vector<double>{2.0, 1.0});
    CHECK(d.ball(1) == std::vector<int>{0});
    CHECK(d.ball(2) == std::vector<int>{0, 1});

    Kernel one = kernel_from_matrix({{2}});
    CHECK(one.decomposition(0).levels == std::vector<double>{2.0});
    CHECK(one.decomposition(0).ball(1) == std::vector<int>{0});

    // equal entries merge into a single level
    Kernel tied = kernel_from_matrix({{3, 3}, {3, 3}});
    CHECK(tied.decomposition(0).levels == std::vector<double>{3.0});
    CHECK(tied.decomposition(0).ball(1) == std::vector<int>{0, 1});
}

TEST_CASE("decomposition reconstructs every ball") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 1 + static_cast<int>(rng() % 12);
        Kernel k = testutil::random_symmetric_kernel(rng, n);
        for (int x = 0; x < n; ++x) {
            const BallDecomposition& d = k.decomposition(x);
            int m = d.level_count();
            CHECK(d.counts.back() == n);
            for (int j = 1; j < m; ++j) {
                CHECK(d.levels[j - 1] > d.levels[j]);  // strictly decreasing
                CHECK(d.counts[j - 1] < d.counts[j]);  // strictly nested
            }
            // sweep r over interval midpoints and both breakpoint sides
            std::vector<double> radii;
            radii.push_back(0.5 / d.levels[0]);
            radii.push_back(1.0 / d.levels[0]);
            for (int j = 0; j < m; ++j) {
                double next = (j + 1 < m) ? 1.0 / d.levels[j + 1] : 2.0 / d.levels[j];
                radii.push_back(0.5 * (1.0 / d.levels[j] + next));
                radii.push_back(next);
            }
            for (double r : radii) {
                CHECK(d.ball_at_radius(r) == oracles::direct_ball(k, x, r));
                CHECK(k.ball(x, r) == oracles::direct_ball(k, x, r));
            }
        }
    }
}

TEST_CASE("space csv round trip") {
    std::string path = "space_rt.csv";
    {
        std::ofstream out(path);
        out << "x1,x2,sigma,mu,f\n";
        out << "0,0,1,0.25,0\n";
        out << "1,0,2,0,0.5\n";
    }
    Space sp = space_from_csv(path);
    CHECK(sp.size() == 2);
    CHECK(sp.dimension() == 2);
    CHECK(sp.sigma()[1] == doctest::Approx(2.0));
    CHECK((*sp.mu())[0] == doctest::Approx(0.25));
    CHECK((*sp.f())[1] == doctest::Approx(0.5));

    space_to_csv(sp, path);
    Space again = space_from_csv(path);
    CHECK(again.sigma().weights() == sp.sigma().weights());
    CHECK(again.coords() == sp.coords());
    std::remove(path.c_str());

    {
        std::ofstream out("bad_col.csv");
        out << "sigma,weight\n1,2\n";
    }
    CHECK_THROWS_AS(space_from_csv("bad_col.csv"), Error);
    std::remove("bad_col.csv");
}
