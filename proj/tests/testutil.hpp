#pragma once

#include <random>
#include <vector>

#include "sublin/kernel.hpp"

namespace testutil {

// Random strictly positive symmetric matrix; any such matrix is a
// quasi-metric kernel with its enumerated kappa.
inline sublin::Kernel random_symmetric_kernel(std::mt19937_64& rng, int n, double lo = 0.5,
                                              double hi = 3.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> g(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = u(rng);
            g[static_cast<std::size_t>(i) * n + j] = v;
            g[static_cast<std::size_t>(j) * n + i] = v;
        }
    return sublin::Kernel(std::move(g), n, sublin::Provenance::explicit_matrix);
}

inline sublin::Kernel random_kernel(std::mt19937_64& rng, int n, double lo = 0.5,
                                    double hi = 3.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> g(static_cast<std::size_t>(n) * n);
    for (double& v : g) v = u(rng);
    return sublin::Kernel(std::move(g), n, sublin::Provenance::explicit_matrix);
}

// Nonnegative weights, occasionally zero, never all zero.
inline sublin::Measure random_measure(std::mt19937_64& rng, int n, double zero_prob = 0.2) {
    std::uniform_real_distribution<double> u(0.1, 2.0);
    std::bernoulli_distribution z(zero_prob);
    std::vector<double> w(n);
    bool any = false;
    for (int i = 0; i < n; ++i) {
        w[i] = z(rng) ? 0.0 : u(rng);
        any = any || w[i] > 0.0;
    }
    if (!any) w[std::uniform_int_distribution<int>(0, n - 1)(rng)] = u(rng);
    return sublin::Measure(std::move(w));
}

inline std::vector<std::vector<double>> random_points(std::mt19937_64& rng, int n, int dim,
                                                      double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& p : pts)
        for (double& c : p) c = u(rng);
    return pts;
}

inline bool close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace testutil
