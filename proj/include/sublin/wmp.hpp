#pragma once

#include <cstdint>
#include <vector>

#include "sublin/kernel.hpp"

namespace sublin {

// Empirical weak-maximum-principle search.  For a support set S and an
// evaluation point x, the worst measure is the LP
//     max  G mu(x)   s.t.  supp mu in S,  G mu <= 1 on S,  mu >= 0,
// and b_empirical is the maximum over all (S, x).  Exact mode enumerates
// every nonempty S; sampled mode draws `budget` random supports.
struct WmpWitness {
    std::vector<int> support;
    int eval_point = 0;
    std::vector<double> measure;  // full-length weight vector
};

struct WmpReport {
    double b_empirical = 1.0;
    double b_theoretical = 0.0;  // 2 kappa when the kernel is quasi-metric, else 0
    bool has_theoretical = false;
    bool exact = false;          // subset-exhaustive vs sampled
    WmpWitness witness;
    long lp_count = 0;
    long supports_examined = 0;
};

enum class WmpMode { exact, sampled, automatic };

struct WmpOptions {
    WmpMode mode = WmpMode::automatic;
    int exact_limit = 12;      // exhaustive enumeration up to this many points
    long budget = 2000;        // sampled supports
    std::uint64_t seed = 1;
};

// Thrown when exact mode is requested beyond exact_limit; carries the
// best sampled report found within the budget.
class BudgetExhausted : public Error {
public:
    BudgetExhausted(std::string what, WmpReport best)
        : Error(std::move(what)), best_so_far(std::move(best)) {}
    WmpReport best_so_far;
};

WmpReport wmp_constant(const Kernel& kernel, const WmpOptions& options = {});

} // namespace sublin
