#pragma once

#include <optional>
#include <vector>

#include "sublin/potentials.hpp"

namespace sublin {

// u = G(u^q d sigma) + f with 0 < q < 1.  Forcing is either a measure mu
// (f = G mu) or a nonnegative vector f; neither means the homogeneous
// equation.  An optional modifier switches solve_modified into the
// transformed problem v = G~(v^q d sigma~) + G~ mu~.
struct Problem {
    Kernel kernel;
    Measure sigma;
    double q = 0.5;
    std::optional<Measure> mu;
    std::optional<std::vector<double>> f;
    std::optional<Modifier> modifier;

    int size() const { return kernel.size(); }
    bool f_mode() const { return f.has_value(); }
};

Problem make_problem(Kernel kernel, Measure sigma, double q,
                     std::optional<Measure> mu = std::nullopt,
                     std::optional<std::vector<double>> f = std::nullopt,
                     std::optional<Modifier> modifier = std::nullopt);

// Constants of the bilateral estimates, from kappa_eff = max(kappa, 1/2):
//   b  = 2 kappa                        (WMP constant)
//   c  = (1-q)^{1/(1-q)} b^{-q/(1-q)}   (lower bound)
//   C  = (8 kappa)^{q/(1-q)}            (upper bound)
//   c0 = [(1-q) b^{-q/(1-q)}]^{1/(1-q)} (subsolution seed scale)
struct SolveConstants {
    double q = 0.0;
    double kappa = 0.0;
    double b = 0.0;
    double c = 0.0;
    double C = 0.0;
    double c0 = 0.0;
};

SolveConstants solve_constants(double q, double kappa_eff);

enum class SolveStatus { converged, diverged, nonexistence_detected };

struct BilateralReport {
    std::vector<double> lower;        // pointwise lower bound
    std::vector<double> upper;        // pointwise upper bound
    std::vector<double> lower_ratio;  // u / lower at sigma-mass points (>= 1 passes)
    std::vector<double> upper_ratio;  // u / upper at sigma-mass points (<= 1 passes)
    double worst_lower = 0.0;         // min lower_ratio
    double worst_upper = 0.0;         // max upper_ratio
    int witness_lower = -1;           // worst points
    int witness_upper = -1;
    bool pass = false;
    SolveConstants constants;
};

struct SolveResult {
    std::vector<double> u;
    SolveStatus status = SolveStatus::converged;
    long iterations = 0;
    double residual = 0.0;            // ||u - G(u^q d sigma) - f||_inf
    std::vector<double> trace;        // per-iteration relative sup change
    SolveConstants constants;
    std::optional<BilateralReport> bounds;  // filled by solve when verify=true
};

class MaxIterExceeded : public Error {
public:
    MaxIterExceeded(std::string what, SolveResult partial)
        : Error(std::move(what)), partial_result(std::move(partial)) {}
    SolveResult partial_result;
};

struct SolveOptions {
    double tol = 1e-12;
    long max_iterations = 100000;
    bool verify = true;                 // attach the bilateral report
    double divergence_threshold = 1e100;
    IntrinsicOptions intrinsic;         // for K sigma inside verification
};

// Explicit subsolution seed u0 = c0 [(G sigma)^{1/(1-q)} + G mu]
// (f-mode: c0 (G sigma)^{1/(1-q)} + f).  The subsolution inequality
// u0 <= G(u0^q d sigma) + f is verified, not assumed.
std::vector<double> subsolution_seed(const Problem& problem);

// Monotone iteration u_{j+1} = G(u_j^q d sigma) + f from the subsolution seed.
SolveResult solve(const Problem& problem, const SolveOptions& options = {});

// Bilateral check of a solution u against
//   c [(G sigma)^{1/(1-q)} + K sigma] + F_low <= u <= C [(G sigma)^{1/(1-q)} + K sigma + F_up]
// where F_low = F_up = G mu in mu-mode and G(f^q d sigma) + f in f-mode.
BilateralReport verify_bilateral(const Problem& problem, const std::vector<double>& u,
                                 const SolveOptions& options = {});

// Measured h-superinvariance constant  max_x G(h^q d sigma)(x) / h(x)
// for h = (G sigma)^{1/(1-q)} + K sigma + G mu (paper: <= C(q, kappa)).
double h_superinvariance_constant(const Problem& problem, const std::vector<double>& h);

struct UniquenessReport {
    std::vector<double> u_up;    // limit of the upward iteration
    std::vector<double> u_down;  // limit of the downward iteration
    SolveStatus status = SolveStatus::converged;
    double max_rel_gap = 0.0;    // terminal disagreement at sigma-mass points
    bool agree = false;          // within 10 tol
    double contraction_a = 0.0;  // a = c / C
    double start_factor = 0.0;   // C' actually used for the supersolution start
    std::vector<double> ratio_trace;  // rho_j = max down_j/up_j per iteration
    bool envelope_ok = false;    // rho_j <= a^{-q^j} for all j >= 3
    long iterations = 0;
};

// Runs the iteration upward from the subsolution seed and downward from a
// verified supersolution start C' h, and checks that both limits coincide
// and that the up/down ratio decays inside the a^{q^j} envelope.
UniquenessReport uniqueness_probe(const Problem& problem, const SolveOptions& options = {});

struct ExistenceReport {
    bool exists = false;
    double g_sigma_max = 0.0;
    double k_sigma_max = 0.0;
    double g_mu_max = 0.0;
    bool all_finite = false;
    int x0 = 0;
    double a = 1.0;
    double tail_sigma = 0.0;   // int_a^inf sigma(B(x0,r))/r^2 dr
    double tail_kappa = 0.0;   // int_a^inf kappa(B(x0,r))^{q/(1-q)}/r^2 dr
    double tail_mu = 0.0;
    // Modified-mode criterion: kappa~(Omega) < inf and int g d mu < inf.
    bool modified_mode = false;
    double kappa_tilde_omega = 0.0;
    double int_g_dmu = 0.0;
};

ExistenceReport existence_check(const Problem& problem, int x0 = 0, double a = 1.0,
                                const SolveOptions& options = {});

struct ModifiedSolveResult {
    SolveResult result;            // mapped back: u = m v
    SolveResult transformed;       // the v-problem's raw result
    BilateralReport bounds;        // modified-form bounds on u
    double kappa_modified = 0.0;
};

// Solves through the transform v = u/m, d sigma~ = m^{1+q} d sigma,
// d mu~ = m d mu (f-mode: f~ = f/m), then maps back u = m v and verifies
// the modified bilateral estimates with constants from kappa~.
ModifiedSolveResult solve_modified(const Problem& problem, const SolveOptions& options = {});

} // namespace sublin
