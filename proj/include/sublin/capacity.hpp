#pragma once

#include <vector>

#include "sublin/kernel.hpp"

namespace sublin {

// cap0(K) = sup { mu(K) : supp mu in K, G* mu <= 1 on all of Omega } and the
// Wiener capacity cap(K), whose constraint G* mu <= 1 is imposed only on the
// support of mu.  For WMP kernels cap0 <= cap <= b cap0.
struct CapacityValue {
    double value = 0.0;
    std::vector<double> equilibrium;  // full-length maximizing measure
    double dual_gap = 0.0;
};

CapacityValue capacity0(const Kernel& kernel, const std::vector<int>& set_K);

enum class CapacityMode { exact, bracket };

struct CapacityResult {
    std::vector<int> set;
    double cap0 = 0.0;
    double cap_lo = 0.0;  // == cap_hi in exact mode; [cap0, b cap0] in bracket mode
    double cap_hi = 0.0;
    CapacityMode mode = CapacityMode::exact;
    std::vector<double> equilibrium;        // maximizer for cap (exact mode)
    std::vector<double> equilibrium_cap0;
    double wmp_bound = 0.0;                 // b = 2 kappa_eff when quasi-metric, else 0
};

struct CapacityOptions {
    CapacityMode mode = CapacityMode::exact;
    int subset_limit = 16;
};

// Exact mode enumerates support sets S subset K and takes the best LP value;
// a maximizer whose support is strictly smaller than S is feasible for the
// smaller support's LP too, so the max over S is exactly cap(K).
CapacityResult wiener_capacity(const Kernel& kernel, const std::vector<int>& set_K,
                               const CapacityOptions& options = {});

} // namespace sublin
