#pragma once

#include <vector>

namespace sublin {

// Dense primal simplex for  max c.x  s.t.  A x <= b,  x >= 0,  with b >= 0
// (slack basis is feasible, no phase 1).  Bland's anti-cycling rule keeps
// pivoting deterministic and finite.  Problem sizes here are desk scale.
struct LpResult {
    enum class Status { optimal, unbounded };
    Status status = Status::optimal;
    double value = 0.0;
    std::vector<double> x;     // primal solution
    std::vector<double> dual;  // dual prices (one per constraint)
    double dual_gap = 0.0;     // |c.x - b.y| at termination
    long pivots = 0;
};

LpResult simplex_maximize(const std::vector<double>& objective,
                          const std::vector<std::vector<double>>& constraints,
                          const std::vector<double>& rhs);

} // namespace sublin
