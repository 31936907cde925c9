#pragma once

#include <map>
#include <shared_mutex>
#include <vector>

#include "sublin/kernel.hpp"

namespace sublin {

// Certificate for the localized embedding constant kappa(E): the least C in
//     || G nu ||_{L^q(sigma_E)} <= C ||nu||   over nonnegative measures nu.
// On a finite space this is Phi(nu*)^{1/q} where
//     Phi(nu) = sum_{y in E} sigma_y (G nu(y))^q
// is maximized over the probability simplex (homogeneity fixes ||nu|| = 1).
// `gap` is the linearization gap max_z grad Phi(nu*).(e_z - nu*), a true
// upper bound on Phi* - Phi(nu*) since Phi is concave.
struct EmbeddingCertificate {
    std::vector<int> set;            // canonical sorted E
    double value = 0.0;              // kappa(E) = Phi(nu*)^{1/q}
    double phi = 0.0;                // Phi(nu*)
    std::vector<double> maximizer;   // nu* over all points, sums to 1
    double gap = 0.0;
    long iterations = 0;
};

class NoConvergence : public Error {
public:
    NoConvergence(std::string what, EmbeddingCertificate best)
        : Error(std::move(what)), best_so_far(std::move(best)) {}
    EmbeddingCertificate best_so_far;
};

struct EmbeddingOptions {
    double tol = 1e-9;          // stop when gap <= max(tol, 10 tol Phi)
    long max_iterations = 500000;
    const std::vector<double>* warm_start = nullptr;  // optional initial nu
};

// Away-step conditional gradient with exact line search (bisection on the
// derivative of the 1-D concave restriction).  q is clamped to
// [1e-3, 1-1e-3] at the API boundary (BadExponent outside).
EmbeddingCertificate embedding_constant(const Kernel& kernel, const Measure& sigma, double q,
                                        const std::vector<int>& set_E,
                                        const EmbeddingOptions& options = {});

// Certificate cache keyed by the canonical sigma-support-restricted index
// set; shared across ball chains and centers.  Concurrent reads, serialized
// first-writer-wins insertions.
class KappaCache {
public:
    KappaCache(const Kernel& kernel, const Measure& sigma, double q,
               EmbeddingOptions options = {});

    // kappa(E), using a cached certificate when available; otherwise solves,
    // warm-starting from `warm` when given, and caches the result.
    const EmbeddingCertificate& get(const std::vector<int>& set_E,
                                    const std::vector<double>* warm = nullptr);

    std::vector<EmbeddingCertificate> snapshot() const;

    const Kernel& kernel() const { return kernel_; }
    const Measure& sigma() const { return sigma_; }
    double q() const { return q_; }

private:
    std::vector<int> canonical(const std::vector<int>& set_E) const;

    const Kernel& kernel_;
    Measure sigma_;
    double q_;
    EmbeddingOptions options_;
    mutable std::shared_mutex mutex_;
    std::map<std::vector<int>, EmbeddingCertificate> cache_;
};

} // namespace sublin
