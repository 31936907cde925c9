#pragma once

#include <optional>
#include <vector>

#include "sublin/embedding.hpp"
#include "sublin/kernel.hpp"

namespace sublin {

// Linear potential (G sigma)(x) = sum_y G(x,y) sigma_y, compensated summation.
std::vector<double> potential(const Kernel& kernel, const Measure& measure);

// Adjoint potential (G* mu)(x) = sum_y G(y,x) mu_y.
std::vector<double> adjoint_potential(const Kernel& kernel, const Measure& measure);

// The same value through the radial form int_0^inf sigma(B(x,r))/r^2 dr,
// evaluated exactly as the step sum  sum_j sigma(B_j) (g_j - g_{j+1}).
double potential_radial(const Kernel& kernel, const Measure& measure, int x);

// Tail int_a^inf sigma(B(x,r))/r^2 dr of the radial integral, exact.
double potential_radial_tail(const Kernel& kernel, const Measure& measure, int x, double a);

// Exponent helpers: t^(q/(1-q)) and t^(1/(1-q)), evaluated in the log
// domain for q > 0.9 where the exponents get large.
double pow_q1mq(double t, double q);
double pow_11mq(double t, double q);

struct IntrinsicOptions {
    EmbeddingOptions embedding;
    int threads = 1;  // > 1 parallelizes over centers against the shared cache
};

// Intrinsic potential K sigma(x) = int_0^inf kappa(B(x,r))^{q/(1-q)} / r^2 dr
// as the exact step sum over ball levels; kappa values come from the shared
// cache, warm-started along each center's nested ball chain.
std::vector<double> intrinsic_potential(KappaCache& cache, const IntrinsicOptions& options = {});
std::vector<double> intrinsic_potential(const Kernel& kernel, const Measure& sigma, double q,
                                        const IntrinsicOptions& options = {});

// Tail int_a^inf kappa(B(x,r))^{q/(1-q)}/r^2 dr, exact.
double intrinsic_potential_tail(KappaCache& cache, int x, double a);

// sigma~ with d(sigma~) = m^{1+q} d sigma.
Measure modified_sigma(const Measure& sigma, const Modifier& modifier, double q);

// K~ sigma: intrinsic potential of (G~, sigma~) with G~ = G/(m (x) m).
std::vector<double> modified_intrinsic_potential(const Kernel& kernel, const Modifier& modifier,
                                                 const Measure& sigma, double q,
                                                 const IntrinsicOptions& options = {});

// g_sigma, k_sigma, optional g_mu, and h = (G sigma)^{1/(1-q)} + K sigma + G mu.
struct PotentialProfile {
    std::vector<double> g_sigma;
    std::vector<double> k_sigma;
    std::vector<double> g_mu;  // zeros when no mu
    std::vector<double> h;
    double q = 0.0;
};

PotentialProfile potential_profile(const Kernel& kernel, const Measure& sigma,
                                   const std::optional<Measure>& mu, double q,
                                   const IntrinsicOptions& options = {});

// One-sided Lorentz-norm diagnostics for kappa(B): the paper bounds
//   C1 ||G sigma_B||_{L^{q/(1-q)}(sigma_B)} <= kappa(B) <= C2 ||G sigma_B||_{L^{q/(1-q),q}(sigma_B)}
// with unspecified constants, so only the ratios are reported.
struct LorentzDiagnostic {
    std::vector<int> set;
    double kappa = 0.0;
    double lq_norm = 0.0;       // L^{q/(1-q)}(sigma_B) norm of G sigma_B
    double lorentz_norm = 0.0;  // L^{q/(1-q), q}(sigma_B) quasi-norm
    double ratio_lq = 0.0;      // kappa / lq_norm
    double ratio_lorentz = 0.0; // kappa / lorentz_norm
    bool empty = false;         // sigma(B) = 0 sentinel
};

LorentzDiagnostic lorentz_diagnostic(const Kernel& kernel, const Measure& sigma, double q,
                                     const std::vector<int>& set_B,
                                     const EmbeddingOptions& options = {});

// Lorentz quasi-norm ||f||_{L^{p,s}(w)} on atoms, via the decreasing
// rearrangement: sum_i v_i^s (W_i^{s/p} - W_{i-1}^{s/p}) with v_i the sorted
// values and W_i the cumulative weights (normalized so L^{p,p} = L^p).
double lorentz_quasi_norm(std::vector<double> values, std::vector<double> weights, double p,
                          double s);

} // namespace sublin
