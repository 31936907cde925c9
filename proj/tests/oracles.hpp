#pragma once

// Independent oracles for the derived expected values.  These stay on the
// brute-force side of every comparison: grid scans, bisection root finding,
// and direct evaluation of set definitions, never the library's own
// algorithms.

#include <cmath>
#include <vector>

#include "sublin/kernel.hpp"

namespace oracles {

// Phi(nu) = sum_{y in E} sigma_y (G nu(y))^q evaluated directly.
inline double phi_value(const sublin::Kernel& k, const sublin::Measure& sigma, double q,
                        const std::vector<int>& set_E, const std::vector<double>& nu) {
    double phi = 0.0;
    for (int y : set_E) {
        double p = 0.0;
        for (int z = 0; z < k.size(); ++z) p += k(y, z) * nu[z];
        phi += sigma[y] * std::pow(p, q);
    }
    return phi;
}

// Brute-force maximization of Phi over the probability simplex for n <= 3:
// full grid at the given step, then repeated 10x zoom refinement around the
// incumbent.  Returns Phi*.
inline double grid_simplex_max_phi(const sublin::Kernel& k, const sublin::Measure& sigma,
                                   double q, const std::vector<int>& set_E,
                                   double step = 1e-3, int refine_rounds = 7) {
    int n = k.size();
    std::vector<double> nu(n, 0.0);
    double best = -1.0;
    std::vector<double> best_nu(n, 0.0);

    auto consider = [&](const std::vector<double>& v) {
        double phi = phi_value(k, sigma, q, set_E, v);
        if (phi > best) {
            best = phi;
            best_nu = v;
        }
    };

    if (n == 1) {
        nu[0] = 1.0;
        consider(nu);
        return best;
    }

    auto scan = [&](const std::vector<double>& center, double radius, double h) {
        if (n == 2) {
            double lo = std::max(0.0, center[0] - radius);
            double hi = std::min(1.0, center[0] + radius);
            for (double a = lo; a <= hi + 1e-15; a += h) {
                nu[0] = a;
                nu[1] = 1.0 - a;
                if (nu[1] < 0.0) continue;
                consider(nu);
            }
        } else {
            double lo0 = std::max(0.0, center[0] - radius);
            double hi0 = std::min(1.0, center[0] + radius);
            double lo1 = std::max(0.0, center[1] - radius);
            double hi1 = std::min(1.0, center[1] + radius);
            for (double a = lo0; a <= hi0 + 1e-15; a += h)
                for (double b = lo1; b <= hi1 + 1e-15; b += h) {
                    if (a + b > 1.0 + 1e-15) continue;
                    nu[0] = a;
                    nu[1] = b;
                    nu[2] = std::max(0.0, 1.0 - a - b);
                    consider(nu);
                }
        }
    };

    scan(std::vector<double>(n, 0.5), 1.0, step);
    double radius = 2.0 * step, h = step / 5.0;
    for (int r = 0; r < refine_rounds; ++r) {
        scan(best_nu, radius, h);
        radius /= 5.0;
        h /= 5.0;
    }
    return best;
}

// Positive root of u = A u^q + f (A > 0, f >= 0) by bisection beyond the
// maximum of A u^q + f - u, where the function is strictly decreasing.
inline double scalar_fixed_point(double A, double q, double f) {
    auto phi = [&](double u) { return A * std::pow(u, q) + f - u; };
    double lo = std::pow(q * A, 1.0 / (1.0 - q));  // argmax of phi
    if (phi(lo) < 0.0) return 0.0;                 // only the trivial root
    double hi = std::max(1.0, 2.0 * lo);
    while (phi(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (phi(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// B(x,r) straight from the definition.
inline std::vector<int> direct_ball(const sublin::Kernel& k, int x, double r) {
    std::vector<int> set;
    for (int y = 0; y < k.size(); ++y)
        if (k(x, y) > 1.0 / r) set.push_back(y);
    return set;
}

} // namespace oracles
