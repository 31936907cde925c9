#pragma once

#include <string>

#include "sublin/scenario.hpp"

namespace sublin {

// CLI exit-code contract:
//   0  success, all checks PASS
//   2  a verified bound or structural certificate FAILED
//   3  nonexistence detected
//  64  configuration errors
//  65  structural data errors (asymmetry, bad kernel entries, ...)
//  70  numeric failures (LP, no convergence, iteration budget)
constexpr int exit_ok = 0;
constexpr int exit_bound_fail = 2;
constexpr int exit_nonexistence = 3;
constexpr int exit_config = 64;
constexpr int exit_data = 65;
constexpr int exit_numeric = 70;

int cmd_solve(const Scenario& s);
int cmd_potentials(const Scenario& s);
int cmd_kappa(const Scenario& s);
int cmd_capacity(const Scenario& s);
int cmd_verify(const Scenario& s);
int cmd_existence(const Scenario& s);

// Dispatch by command name; exceptions flow to the caller.
int run_command(const std::string& name, const Scenario& s);

// Load + dispatch with the exit-code contract applied to exceptions;
// error text goes to stderr.
int run_command_guarded(const std::string& name, const std::string& scenario_path,
                        const std::string& out_dir_override = "", bool emit_plot_data = false);

} // namespace sublin
