#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cohesive/limit_densities.hpp"
#include "cohesive/potentials.hpp"
#include "cohesive/profile_solver.hpp"

namespace cohesive {

enum class RegimeKind : std::uint8_t { Dugdale, PowerLaw, Griffith };

std::string to_string(RegimeKind kind);
RegimeKind regime_kind_from_string(const std::string& name);

struct RegimeParams {
  RegimeKind kind = RegimeKind::Dugdale;
  std::vector<int> indices = {1, 2, 3, 4, 5, 6};
  double ell = 1.0;        // Dugdale: slope of the prototype base
  double a_base = 2.0;     // Dugdale: a_j = a_base^j
  double eps_power = 4.0;  // Dugdale: eps_j = a_j^{-eps_power}, so a_j sqrt(eps_j) -> 0 when > 2
  double p = 3.0;          // PowerLaw exponent
  double kappa = 1.0;      // PowerLaw coefficient
  double ell_base = 4.0;   // Griffith: ell_j = ell_base^j
  /// Overrides the generated a_j / j / ell_j when nonempty (same length as indices).
  std::vector<double> scalings;
};

struct RegimeSequence {
  RegimeKind kind = RegimeKind::Dugdale;
  std::vector<int> indices;
  std::vector<DamagePotential> members;
  std::vector<double> scalings;  // a_j, j or ell_j
  std::vector<double> eps;       // Dugdale only
  double ell = 1.0;              // Dugdale base slope
  double p = 3.0;
  double kappa = 1.0;

  /// Closed-form limit density: 1 ^ ell s (Dugdale), 1 for s > 0 (Griffith).
  /// Throws std::logic_error for PowerLaw, whose limit is tabulated.
  double predicted(double s) const;
};

/// Validates the scalings (increasing, and for Dugdale a_j sqrt(eps_j)
/// decreasing) and the pointwise monotonicity f^(j) <= f^(j+1) on a fine grid.
/// Throws std::invalid_argument on violation.
RegimeSequence build_sequence(const RegimeParams& params);

struct RegimeReport {
  RegimeKind kind = RegimeKind::Dugdale;
  std::vector<int> indices;
  std::vector<DensityTable> tables;  // one per index
  DensityTable predicted;            // limit density on the same grid
  std::vector<double> sup_gap;       // per index
  int monotonicity_violations = 0;   // pairs with g_j > g_{j+1} + 2 tol
  bool sup_gap_decreasing = false;   // strictly
  int solver_flags = 0;              // samples that did not converge or stabilize
};

/// Tables for every member on s_grid, compared with the predicted limit (the
/// theta_p table computed with psi_p for PowerLaw).
/// Members are solved independently, `workers` at a time.
RegimeReport regime_study(const RegimeSequence& seq, const std::vector<double>& s_grid,
                          const SolverOptions& opts, int workers = 1);

/// CSV "j,s,g_j,predicted,gap" followed by '#'-prefixed summary lines.
void write_regime_csv(std::ostream& out, const RegimeReport& report);

/// Density table of psi_p(s) = kappa s / (1 - s)^p.
DensityTable theta_p_table(double p, double kappa, const std::vector<double>& s_grid,
                           const SolverOptions& opts);

/// Smallest c with theta_p(s) <= c s^{2/(p+1)} on the positive grid points.
double fit_holder_constant(const DensityTable& theta, double p);

/// kappa^{2/(p+1)}.
double theta_small_s_lower(double p, double kappa);
/// kappa^{2/(p+1)} (p + 1) / (2^{2/(p+1)} (p - 1)^{(p-1)/(p+1)}).
double theta_small_s_upper(double p, double kappa);

struct SmallSReport {
  std::vector<double> s;
  std::vector<double> ratio;  // theta_p(s) / s^{2/(p+1)}
  double lower = 0.0;
  double upper = 0.0;
  bool in_bounds = false;     // smallest-s ratio in [lower (1 - tol), upper (1 + tol)]
  bool stabilizing = false;   // successive ratio changes shrink
};

/// Ratios at a list of openings decreasing toward 0.
SmallSReport theta_p_small_s_check(double p, double kappa, const std::vector<double>& s_list,
                                   const SolverOptions& opts, double tol = 0.1);

/// Crossover s_j solving a_j s = f(s) in (0, 1), by bisection.
double dugdale_crossover(const DamagePotential& base, double a);

}  // namespace cohesive
