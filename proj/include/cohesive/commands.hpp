#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cohesive/config.hpp"
#include "cohesive/potentials.hpp"
#include "cohesive/profile_solver.hpp"

namespace cohesive {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  int workers = 1;
  double tol = 0.0;  // > 0 overrides the table tolerance
  bool svg = false;
  std::ostream* log = nullptr;  // one-line summaries, may be null
};

/// Exit codes shared by all commands.
enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2 };

DamagePotential potential_from_config(const ExperimentConfig& cfg);
SolverOptions solver_from_config(const ExperimentConfig& cfg, const RunOptions& run);

/// density.csv and density_checks.csv (check,pass,margin,detail).
int cmd_density(const ExperimentConfig& cfg, const RunOptions& run);
/// profile_s<s>.csv (t,alpha_over_s,beta) per opening and profiles.csv with
/// the source, value and containment of each path.
int cmd_profiles(const ExperimentConfig& cfg, const RunOptions& run);
/// fk.csv (s,f_eps,marker) with rows at 0, at the breakpoint and at 1.
int cmd_fk_plot(const ExperimentConfig& cfg, const RunOptions& run);
/// bar.csv, the phase-field sweep against the limit bar energy.
int cmd_bar(const ExperimentConfig& cfg, const RunOptions& run);
/// regime.csv (+ theta_small_s.csv for the power-law regime).
int cmd_regime(const ExperimentConfig& cfg, const RunOptions& run);
/// oracle.csv (+ oracle_path_s<s>.csv with [oracle] paths = true).
int cmd_oracle(const ExperimentConfig& cfg, const RunOptions& run);

/// Dispatches on "density", "profiles", "fk-plot", "bar", "regime", "oracle".
int run_command(const std::string& name, const ExperimentConfig& cfg, const RunOptions& run);
const std::vector<std::string>& command_names();

}  // namespace cohesive
