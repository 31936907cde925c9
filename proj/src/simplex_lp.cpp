#include "sublin/simplex_lp.hpp"

#include <cmath>
#include <limits>

#include "sublin/errors.hpp"

namespace sublin {

LpResult simplex_maximize(const std::vector<double>& objective,
                          const std::vector<std::vector<double>>& constraints,
                          const std::vector<double>& rhs) {
    const int n = static_cast<int>(objective.size());
    const int m = static_cast<int>(constraints.size());
    if (static_cast<int>(rhs.size()) != m)
        throw LpNumericalFailure("rhs length does not match constraint count");
    for (const auto& row : constraints)
        if (static_cast<int>(row.size()) != n)
            throw LpNumericalFailure("constraint row length does not match variable count");
    for (double b : rhs)
        if (!(b >= 0.0)) throw LpNumericalFailure("simplex requires rhs >= 0");

    // Tableau: m rows x (n + m + 1) columns; columns n..n+m-1 are slacks,
    // last column is the rhs.  Row m is the objective (reduced costs).
    const int cols = n + m + 1;
    std::vector<double> t(static_cast<std::size_t>(m + 1) * cols, 0.0);
    auto at = [&](int r, int c) -> double& { return t[static_cast<std::size_t>(r) * cols + c]; };

    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) at(i, j) = constraints[i][j];
        at(i, n + i) = 1.0;
        at(i, cols - 1) = rhs[i];
    }
    for (int j = 0; j < n; ++j) at(m, j) = objective[j];

    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;

    LpResult res;
    const double eps = 1e-12;
    const long pivot_limit = 200000L + 50L * static_cast<long>(m + n) * (m + n);

    while (true) {
        // Bland: entering = lowest-index column with positive reduced cost.
        int enter = -1;
        for (int j = 0; j < n + m; ++j)
            if (at(m, j) > eps) { enter = j; break; }
        if (enter < 0) break;  // optimal

        // Ratio test; Bland tie-break on the smallest basis index.
        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            double a = at(i, enter);
            if (a > eps) {
                double ratio = at(i, cols - 1) / a;
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis[i] < basis[leave])) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) {
            res.status = LpResult::Status::unbounded;
            return res;
        }

        // Pivot.
        double piv = at(leave, enter);
        for (int j = 0; j < cols; ++j) at(leave, j) /= piv;
        at(leave, enter) = 1.0;
        for (int i = 0; i <= m; ++i) {
            if (i == leave) continue;
            double f = at(i, enter);
            if (f == 0.0) continue;
            for (int j = 0; j < cols; ++j) at(i, j) -= f * at(leave, j);
            at(i, enter) = 0.0;
        }
        basis[leave] = enter;
        if (++res.pivots > pivot_limit)
            throw LpNumericalFailure("simplex pivot limit exceeded");
    }

    res.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = at(i, cols - 1);

    // Duals are the negated reduced costs of the slack columns.
    res.dual.assign(m, 0.0);
    for (int i = 0; i < m; ++i) res.dual[i] = -at(m, n + i);

    double primal = 0.0;
    for (int j = 0; j < n; ++j) primal += objective[j] * res.x[j];
    double dual = 0.0;
    for (int i = 0; i < m; ++i) dual += rhs[i] * res.dual[i];
    res.value = primal;
    res.dual_gap = std::abs(primal - dual);
    return res;
}

} // namespace sublin
