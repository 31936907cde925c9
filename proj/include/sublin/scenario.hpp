#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sublin/kernel.hpp"
#include "sublin/solver.hpp"

namespace sublin {

// Flat key = value scenario with section headers.  Every numeric default
// lives here; a parsed scenario serializes back to a canonical resolved
// form (inline data, all defaults explicit) so a run can be reproduced
// byte-for-byte from its own report.
struct Scenario {
    enum class KernelType { matrix, riesz, green_ball, modified };
    enum class Forcing { none, mu, f };

    // [space]
    int points = 0;
    std::vector<std::vector<double>> coords;
    std::vector<double> sigma;
    std::optional<std::vector<double>> mu;
    std::optional<std::vector<double>> f;

    // [kernel]
    KernelType kernel_type = KernelType::matrix;
    std::vector<std::vector<double>> matrix;           // type = matrix
    double alpha = 1.0;                                // riesz / green_ball
    double dim_n = 2.0;
    DiagonalRule diagonal_rule = DiagonalRule::half_nearest;
    std::vector<double> diagonal;                      // explicit rule
    KernelType base_type = KernelType::matrix;         // type = modified
    int pole = 0;                                      // 0-based internally
    bool require_quasi_metric = false;

    // [problem]
    double q = 0.5;
    Forcing forcing = Forcing::none;

    // [tolerances]
    double tol = 1e-12;
    double gap = 1e-9;
    int subset_limit = 16;
    int exact_limit = 12;
    long max_iter = 100000;

    // [command]
    std::vector<int> set;      // 0-based internally
    int center = 0;
    int x0 = 0;
    double a = 1.0;
    std::string mode = "auto"; // exact | bracket | sampled | auto
    long budget = 2000;
    double inject_scale = 1.0; // test hook: scales u before verification

    // [output]
    std::string out_dir = "out";
    bool emit_plot_data = false;

    // [run]
    std::uint64_t seed = 1;
};

Scenario scenario_from_text(const std::string& text);
Scenario scenario_from_file(const std::string& path);
std::string scenario_to_text(const Scenario& s);

// Base kernel described by the scenario (for modified scenarios, the base).
Kernel build_base_kernel(const Scenario& s);

// The kernel certificates and potentials operate on: the Green-modified
// kernel for modified scenarios, the base kernel otherwise.
Kernel build_effective_kernel(const Scenario& s);

Space build_space(const Scenario& s);

// Assembled problem: base kernel, sigma, forcing, and the Green modifier
// at the scenario pole for modified scenarios.
Problem build_problem(const Scenario& s);

SolveOptions build_solve_options(const Scenario& s);

} // namespace sublin
