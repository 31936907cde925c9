#include "sublin/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "sublin/simplex_lp.hpp"

namespace sublin {

namespace {

std::vector<int> canonical_set(const std::vector<int>& set_K, int n) {
    std::vector<int> k;
    for (int i : set_K) {
        if (i < 0 || i >= n) throw Error("capacity set index out of range");
        k.push_back(i);
    }
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    if (k.empty()) throw Error("capacity set is empty");
    return k;
}

// max sum mu  s.t. supp mu in support, (G* mu)(y) <= 1 for y in constraint_points.
CapacityValue support_lp(const Kernel& kernel, const std::vector<int>& support,
                         const std::vector<int>& constraint_points) {
    int k = static_cast<int>(support.size());
    std::vector<double> objective(k, 1.0);
    std::vector<std::vector<double>> rows;
    rows.reserve(constraint_points.size());
    for (int y : constraint_points) {
        std::vector<double> row(k);
        for (int j = 0; j < k; ++j) row[j] = kernel(support[j], y);  // (G* mu)(y)
        rows.push_back(std::move(row));
    }
    std::vector<double> rhs(constraint_points.size(), 1.0);
    LpResult lp = simplex_maximize(objective, rows, rhs);
    if (lp.status != LpResult::Status::optimal)
        throw LpNumericalFailure("capacity LP unbounded");
    CapacityValue v;
    v.value = lp.value;
    v.dual_gap = lp.dual_gap;
    v.equilibrium.assign(kernel.size(), 0.0);
    for (int j = 0; j < k; ++j) v.equilibrium[support[j]] = lp.x[j];
    return v;
}

} // namespace

CapacityValue capacity0(const Kernel& kernel, const std::vector<int>& set_K) {
    std::vector<int> K = canonical_set(set_K, kernel.size());
    std::vector<int> omega(kernel.size());
    for (int i = 0; i < kernel.size(); ++i) omega[i] = i;
    return support_lp(kernel, K, omega);
}

CapacityResult wiener_capacity(const Kernel& kernel, const std::vector<int>& set_K,
                               const CapacityOptions& options) {
    CapacityResult res;
    res.set = canonical_set(set_K, kernel.size());
    res.mode = options.mode;
    if (kernel.symmetric()) res.wmp_bound = 2.0 * kernel.kappa_eff();

    CapacityValue c0 = capacity0(kernel, res.set);
    res.cap0 = c0.value;
    res.equilibrium_cap0 = c0.equilibrium;

    if (options.mode == CapacityMode::bracket) {
        // cap0 <= cap <= b cap0 for WMP kernels (b = 2 kappa when quasi-metric).
        res.cap_lo = res.cap0;
        res.cap_hi = res.wmp_bound > 0.0 ? res.wmp_bound * res.cap0
                                         : std::numeric_limits<double>::infinity();
        res.equilibrium = c0.equilibrium;
        return res;
    }

    int k = static_cast<int>(res.set.size());
    if (k > options.subset_limit) throw SubsetLimitExceeded(k, options.subset_limit);

    double best = 0.0;
    std::vector<double> best_measure(kernel.size(), 0.0);
    std::vector<int> support;
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << k); ++mask) {
        support.clear();
        for (int j = 0; j < k; ++j)
            if (mask & (std::uint64_t(1) << j)) support.push_back(res.set[j]);
        CapacityValue v = support_lp(kernel, support, support);
        if (v.value > best) {
            best = v.value;
            best_measure = v.equilibrium;
        }
    }
    res.cap_lo = res.cap_hi = best;
    res.equilibrium = best_measure;
    return res;
}

} // namespace sublin
