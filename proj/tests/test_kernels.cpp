#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sublin/kernel.hpp"
#include "testutil.hpp"

using namespace sublin;

TEST_CASE("kernel construction and symmetry detection") {
    Kernel sym = kernel_from_matrix({{2, 1}, {1, 2}});
    CHECK(sym.symmetric());
    Kernel asym = kernel_from_matrix({{2, 1}, {3, 2}});
    CHECK_FALSE(asym.symmetric());
    CHECK(asym.quasi_symmetry_constant() == doctest::Approx(3.0));
    CHECK_THROWS_AS(kernel_from_matrix({{1, 0}, {0, 1}}), NonPositiveEntry);
    CHECK_THROWS_AS(kernel_from_matrix({{1, std::numeric_limits<double>::infinity()},
                                        {1, 1}}),
                    NonFiniteEntry);
}

TEST_CASE("quasi-metric constant worked examples") {
    // d = [[0.5,1],[1,0.5]]: worst triple ratio 1/(0.5+1) = 2/3
    Kernel k = kernel_from_matrix({{2, 1}, {1, 2}});
    CHECK(k.quasi_metric_constant() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    // genuine metric d(x,y) = |x-y| on a line (diagonal handled via a large
    // but finite G(x,x), whose triples only contribute ratio <= 1)
    auto line_kernel = [](const std::vector<double>& xs) {
        int n = static_cast<int>(xs.size());
        std::vector<std::vector<double>> m(n, std::vector<double>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m[i][j] = (i == j) ? 1e6 : 1.0 / std::abs(xs[i] - xs[j]);
        return kernel_from_matrix(m);
    };
    CHECK(line_kernel({0, 1, 2, 3.5}).quasi_metric_constant() == doctest::Approx(1.0));

    // d(x,y) = |x-y|^2 on {0,1,2}: (a+b)^2 <= 2(a^2+b^2), tight at 0->2 via 1
    std::vector<double> xs = {0, 1, 2};
    std::vector<std::vector<double>> m(3, std::vector<double>(3));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m[i][j] = (i == j) ? 1e6 : 1.0 / ((xs[i] - xs[j]) * (xs[i] - xs[j]));
    Kernel sq = kernel_from_matrix(m);
    CHECK(sq.quasi_metric_constant() == doctest::Approx(2.0));
    KappaWitness w = sq.quasi_metric_witness();
    CHECK(((w.x == 0 && w.y == 2) || (w.x == 2 && w.y == 0)));
    CHECK(w.z == 1);

    CHECK_THROWS_AS(kernel_from_matrix({{2, 1}, {3, 2}}).quasi_metric_constant(), NotSymmetric);
}

TEST_CASE("kappa is a tight maximum and at least 1/2") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 1 + static_cast<int>(rng() % 8);
        Kernel k = testutil::random_symmetric_kernel(rng, n);
        double kappa = k.quasi_metric_constant();
        CHECK(kappa >= 0.5);  // triple (x,x,x) has ratio exactly 1/2
        // quasi-triangle holds for every triple, equality at the witness
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z) {
                    double lhs = 1.0 / k(x, y);
                    double rhs = kappa * (1.0 / k(x, z) + 1.0 / k(z, y));
                    CHECK(lhs <= rhs * (1.0 + 1e-12));
                }
        KappaWitness w = k.quasi_metric_witness();
        double lhs = 1.0 / k(w.x, w.y);
        double rhs = 1.0 / k(w.x, w.z) + 1.0 / k(w.z, w.y);
        CHECK(lhs / rhs == doctest::Approx(kappa).epsilon(1e-14));
    }
}

TEST_CASE("quasi-symmetry constant") {
    CHECK(kernel_from_matrix({{2, 1}, {1, 2}}).quasi_symmetry_constant() == doctest::Approx(1.0));
    CHECK(kernel_from_matrix({{2, 1}, {3, 2}}).quasi_symmetry_constant() == doctest::Approx(3.0));
    CHECK(kernel_from_matrix({{1, 4}, {2, 1}}).quasi_symmetry_constant() == doctest::Approx(2.0));
}

TEST_CASE("symmetrize") {
    Kernel g = kernel_from_matrix({{2, 1}, {3, 2}});
    Kernel gs = symmetrize(g);
    CHECK(gs.symmetric());
    CHECK(gs(0, 0) == doctest::Approx(4.0));
    CHECK(gs(0, 1) == doctest::Approx(4.0));
    CHECK(gs(1, 1) == doctest::Approx(4.0));

    Kernel sym = kernel_from_matrix({{2, 1}, {1, 2}});
    Kernel sym2 = symmetrize(sym);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) CHECK(sym2(x, y) == doctest::Approx(2.0 * sym(x, y)));

    // sandwich (1 + 1/a) G <= G^s <= (1 + a) G on a random 5x5 kernel
    std::mt19937_64 rng(3);
    Kernel r = testutil::random_kernel(rng, 5);
    double a = r.quasi_symmetry_constant();
    Kernel rs = symmetrize(r);
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y) {
            CHECK(rs(x, y) >= (1.0 + 1.0 / a) * r(x, y) * (1.0 - 1e-12));
            CHECK(rs(x, y) <= (1.0 + a) * r(x, y) * (1.0 + 1e-12));
        }
}

TEST_CASE("riesz kernel") {
    // two points at distance 2, n=2, alpha=1: off-diagonal 2^{-1}
    Kernel k = riesz_kernel({{0.0, 0.0}, {2.0, 0.0}}, 1.0, 2.0);
    CHECK(k(0, 1) == doctest::Approx(0.5));
    CHECK(k.symmetric());
    // half_nearest diagonal: (2/2)^{1-2} = 1
    CHECK(k(0, 0) == doctest::Approx(1.0));

    Kernel k2 = riesz_kernel({{0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}}, 2.0, 3.0);
    CHECK(k2(0, 1) == doctest::Approx(2.0));

    CHECK_THROWS_AS(riesz_kernel({{0.0}, {0.0}}, 0.5, 1.0), DuplicatePoints);
    CHECK_THROWS_AS(riesz_kernel({{0.0}}, 2.0, 1.0), BadAlpha);

    Kernel ke = riesz_kernel({{0.0}, {1.0}}, 0.5, 1.0, DiagonalRule::explicit_values, {5.0, 6.0});
    CHECK(ke(0, 0) == doctest::Approx(5.0));
    CHECK(ke(1, 1) == doctest::Approx(6.0));
}

TEST_CASE("green ball kernel matches the alpha=2, n=3 classical form") {
    // For alpha=2, n=3 Boggio reduces to
    //   (1/4pi) [ 1/|x-y| - 1/sqrt(|x-y|^2 + (1-|x|^2)(1-|y|^2)) ]
    std::mt19937_64 rng(5);
    auto pts = testutil::random_points(rng, 4, 3, 0.45);
    Kernel k = green_ball_kernel(pts, 2.0, 3);
    CHECK(k.symmetric());
    const double pi = std::acos(-1.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            double r2 = 0.0, ni = 0.0, nj = 0.0;
            for (int c = 0; c < 3; ++c) {
                double d = pts[i][c] - pts[j][c];
                r2 += d * d;
                ni += pts[i][c] * pts[i][c];
                nj += pts[j][c] * pts[j][c];
            }
            double expected =
                (1.0 / (4.0 * pi)) *
                (1.0 / std::sqrt(r2) - 1.0 / std::sqrt(r2 + (1.0 - ni) * (1.0 - nj)));
            CHECK(k(i, j) == doctest::Approx(expected).epsilon(1e-10));
        }
    CHECK_THROWS_AS(green_ball_kernel({{1.5, 0.0, 0.0}}, 2.0, 3), Error);
    // fractional order still yields a positive symmetric kernel
    Kernel kf = green_ball_kernel(pts, 1.2, 3);
    CHECK(kf.symmetric());
    CHECK(kf(0, 1) > 0.0);
}

TEST_CASE("green modifier and modify") {
    Kernel k = kernel_from_matrix({{2, 1}, {1, 2}});
    Modifier m = green_modifier(k, 0);
    CHECK(m.values == std::vector<double>{1.0, 1.0});
    CHECK(m.is_identity());
    Kernel same = modify(k, m);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) CHECK(same(x, y) == k(x, y));

    Kernel k2 = kernel_from_matrix({{2, 0.5}, {0.5, 2}});
    Modifier m2 = green_modifier(k2, 0);
    CHECK(m2.values == std::vector<double>{1.0, 0.5});
    Kernel mod = modify(k2, m2);
    CHECK(mod(0, 0) == doctest::Approx(2.0));
    CHECK(mod(0, 1) == doctest::Approx(1.0));
    CHECK(mod(1, 1) == doctest::Approx(8.0));
    CHECK(mod.provenance() == Provenance::modified);

    // G~(x, x0) >= 1 for every x with the Green modifier
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + static_cast<int>(rng() % 6);
        Kernel r = testutil::random_symmetric_kernel(rng, n, 0.2, 4.0);
        int pole = static_cast<int>(rng() % n);
        Kernel rm = modify(r, green_modifier(r, pole));
        for (int x = 0; x < n; ++x) CHECK(rm(x, pole) >= 1.0 - 1e-12);
    }
}

TEST_CASE("ptolemy check") {
    auto line_kernel = [](const std::vector<double>& xs) {
        int n = static_cast<int>(xs.size());
        std::vector<std::vector<double>> m(n, std::vector<double>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m[i][j] = (i == j) ? 1e9 : 1.0 / std::abs(xs[i] - xs[j]);
        return kernel_from_matrix(m);
    };
    Kernel line = line_kernel({0, 0.7, 1.9, 3, 4.2});
    PtolemyReport rep = ptolemy_check(line);
    CHECK(rep.pass);
    CHECK(rep.bound == doctest::Approx(4.0));      // kappa = 1
    CHECK(rep.worst_ratio <= 1.0 + 1e-9);          // classical Ptolemy on the line

    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        Kernel r = testutil::random_symmetric_kernel(rng, 2 + static_cast<int>(rng() % 5));
        CHECK(ptolemy_check(r).pass);
    }
}

TEST_CASE("modifiability certificate") {
    Kernel k = kernel_from_matrix({{2, 0.5}, {0.5, 2}});
    ModifiabilityCertificate cert = modifiability_certificate(k, 0);
    CHECK(cert.pass);
    CHECK(cert.kappa_base == doctest::Approx(0.8));
    CHECK(cert.kappa_modified == doctest::Approx(8.0 / 9.0));
    CHECK(cert.kappa_modified <= cert.bound);
    CHECK(cert.wmp_modified == doctest::Approx(2.0 * cert.kappa_modified));

    // identity-modifier case: all G(., x0) >= 1 leaves the kernel unchanged
    Kernel big = kernel_from_matrix({{2, 1.5}, {1.5, 2}});
    ModifiabilityCertificate id = modifiability_certificate(big, 0);
    CHECK(id.kappa_modified == doctest::Approx(id.kappa_base));

    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        Kernel r = testutil::random_symmetric_kernel(rng, n, 0.2, 4.0);
        int pole = static_cast<int>(rng() % n);
        CHECK(modifiability_certificate(r, pole).pass);
    }
}

TEST_CASE("scaling covariance") {
    std::mt19937_64 rng(37);
    Kernel k = testutil::random_symmetric_kernel(rng, 6);
    std::vector<double> doubled = k.data();
    for (double& v : doubled) v *= 2.0;
    Kernel k2(doubled, 6, Provenance::explicit_matrix);
    CHECK(k2.quasi_metric_constant() ==
          doctest::Approx(k.quasi_metric_constant()).epsilon(1e-14));
    CHECK(k2.quasi_symmetry_constant() ==
          doctest::Approx(k.quasi_symmetry_constant()).epsilon(1e-14));
    // B_{2G}(x, r) = B_G(x, 2r)
    for (int x = 0; x < 6; ++x)
        for (double r : {0.1, 0.3, 0.55, 1.0, 3.0})
            CHECK(k2.ball(x, r) == k.ball(x, 2.0 * r));
}

TEST_CASE("kernel csv and meta round trip") {
    Kernel k = kernel_from_matrix({{2, 0.5}, {0.5, 2}});
    kernel_to_csv(k, "kernel_rt.csv");
    Kernel back = kernel_from_csv("kernel_rt.csv");
    CHECK(back.size() == 2);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) CHECK(back(x, y) == k(x, y));
    std::remove("kernel_rt.csv");

    KernelMeta meta;
    meta.provenance = "riesz";
    meta.alpha = 1.5;
    meta.n = 3.0;
    meta.diagonal_rule = "half_nearest";
    kernel_meta_to_file(meta, "kernel_rt.meta");
    KernelMeta back_meta = kernel_meta_from_file("kernel_rt.meta");
    CHECK(back_meta.provenance == "riesz");
    CHECK(*back_meta.alpha == doctest::Approx(1.5));
    CHECK(*back_meta.diagonal_rule == "half_nearest");
    std::remove("kernel_rt.meta");
}
