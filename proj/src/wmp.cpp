#include "sublin/wmp.hpp"

#include <random>

#include "sublin/simplex_lp.hpp"

namespace sublin {

namespace {

// Best measure for one (support, evaluation point) pair:
//   max  sum_j G(x, s_j) mu_j   s.t.  sum_j G(y, s_j) mu_j <= 1 for y in S, mu >= 0.
double support_lp(const Kernel& kernel, const std::vector<int>& support, int x,
                  std::vector<double>* measure_out) {
    int k = static_cast<int>(support.size());
    std::vector<double> objective(k);
    for (int j = 0; j < k; ++j) objective[j] = kernel(x, support[j]);
    std::vector<std::vector<double>> rows(k, std::vector<double>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) rows[i][j] = kernel(support[i], support[j]);
    std::vector<double> rhs(k, 1.0);
    LpResult lp = simplex_maximize(objective, rows, rhs);
    if (lp.status != LpResult::Status::optimal)
        throw LpNumericalFailure("wmp support LP unbounded");
    if (measure_out) *measure_out = lp.x;
    return lp.value;
}

void scan_support(const Kernel& kernel, const std::vector<int>& support, WmpReport& report) {
    int n = kernel.size();
    for (int x = 0; x < n; ++x) {
        std::vector<double> mu;
        double value = support_lp(kernel, support, x, &mu);
        ++report.lp_count;
        if (value > report.b_empirical) {
            report.b_empirical = value;
            report.witness.support = support;
            report.witness.eval_point = x;
            report.witness.measure.assign(n, 0.0);
            for (std::size_t j = 0; j < support.size(); ++j)
                report.witness.measure[support[j]] = mu[j];
        }
    }
    ++report.supports_examined;
}

WmpReport sampled_search(const Kernel& kernel, long budget, std::uint64_t seed) {
    WmpReport report;
    report.exact = false;
    int n = kernel.size();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coin(0, 1);
    for (long it = 0; it < budget; ++it) {
        std::vector<int> support;
        for (int i = 0; i < n; ++i)
            if (coin(rng)) support.push_back(i);
        if (support.empty()) support.push_back(std::uniform_int_distribution<int>(0, n - 1)(rng));
        scan_support(kernel, support, report);
    }
    return report;
}

WmpReport exact_search(const Kernel& kernel) {
    WmpReport report;
    report.exact = true;
    int n = kernel.size();
    std::vector<int> support;
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
        support.clear();
        for (int i = 0; i < n; ++i)
            if (mask & (std::uint64_t(1) << i)) support.push_back(i);
        scan_support(kernel, support, report);
    }
    return report;
}

} // namespace

WmpReport wmp_constant(const Kernel& kernel, const WmpOptions& options) {
    int n = kernel.size();
    bool want_exact = options.mode == WmpMode::exact ||
                      (options.mode == WmpMode::automatic && n <= options.exact_limit);
    WmpReport report;
    if (want_exact && n > options.exact_limit) {
        WmpReport best = sampled_search(kernel, options.budget, options.seed);
        if (kernel.symmetric()) {
            best.b_theoretical = 2.0 * kernel.kappa_eff();
            best.has_theoretical = true;
        }
        throw BudgetExhausted("exact WMP search infeasible for " + std::to_string(n) +
                                  " points (limit " + std::to_string(options.exact_limit) + ")",
                              std::move(best));
    }
    report = want_exact ? exact_search(kernel)
                        : sampled_search(kernel, options.budget, options.seed);
    if (kernel.symmetric()) {
        report.b_theoretical = 2.0 * kernel.kappa_eff();
        report.has_theoretical = true;
    }
    // The trivial witness: any unit-potential measure attains 1 at its own atom.
    if (report.witness.measure.empty()) {
        report.witness.support = {0};
        report.witness.eval_point = 0;
        report.witness.measure.assign(n, 0.0);
        report.witness.measure[0] = 1.0 / kernel(0, 0);
    }
    return report;
}

} // namespace sublin
