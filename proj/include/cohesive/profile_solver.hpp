#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cohesive/limit_densities.hpp"
#include "cohesive/potentials.hpp"

namespace cohesive {

/// Discretized admissible pair on a uniform grid over [0, T]:
/// alpha(0) = 0, alpha(T) = s, beta(0) = beta(T) = boundary, 0 <= beta <= 1.
struct ProfilePair {
  double T = 1.0;
  double boundary = 1.0;
  std::vector<double> alpha;
  std::vector<double> beta;

  std::size_t nodes() const { return beta.size(); }
  double spacing() const { return T / static_cast<double>(nodes() - 1); }
  double opening() const { return alpha.empty() ? 0.0 : alpha.back(); }
  void validate() const;
};

enum class InitStrategy : std::uint8_t {
  Plateau,  // recovery construction with the best plateau level
  Dip,      // flat dip to 1 - s/2 over the middle half
};

struct SolverOptions {
  int max_iterations = 2000;
  double energy_tol = 1e-6;       // relative energy decrease per iteration
  double initial_T = 0.0;         // <= 0: chosen from the plateau construction
  double T_growth = 2.0;
  double T_stop_tol = 1e-3;       // relative decrease between successive T
  int max_T_steps = 8;
  double nodes_per_unit = 64.0;
  double beta_clamp = 1e-4;       // lower bound on interior beta, in (0, 1e-3]
  std::size_t max_nodes = 1u << 21;
  InitStrategy init = InitStrategy::Plateau;
  double table_tol = 0.02;        // relative tolerance recorded in tables

  void validate() const;
};

/// Midpoint-quadrature value of the cell integrand
/// f^2(beta) |alpha'|^2 + (1 - beta)^2 / 4 + |beta'|^2; +inf if a segment
/// with beta = 1 carries a nonzero alpha slope.
double cell_energy(const ProfilePair& profile, const DamagePotential& pot);

/// (1 - b) f(b) s + 13/6 (1 - b)^2: energy of the plateau construction in the
/// continuum.
double plateau_closed_form(const DamagePotential& pot, double s, double b);
/// Minimizer of plateau_closed_form over a 64-point grid log-spaced in 1 - b.
double best_plateau_level(const DamagePotential& pot, double s, double clamp = 1e-4);
/// Half-length s f(b) / (1 - b) of the plateau.
double plateau_half_length(const DamagePotential& pot, double s, double b);
/// beta = b on a centered plateau of half-length plateau_half_length, unit
/// linear ramps to the boundary value, alpha linear across the plateau.
/// Plateau and ramps are shrunk if they do not fit into [0, T].
ProfilePair plateau_profile(const DamagePotential& pot, double s, double b, double T,
                            double nodes_per_unit, double boundary = 1.0);
/// Domain length that holds the plateau construction for (s, b).
double plateau_domain_length(const DamagePotential& pot, double s, double b);

/// Resamples a profile onto [0, T] with the given node count by stretching
/// the time axis; alpha is rescaled to end at s.
ProfilePair resample(const ProfilePair& profile, double s, double T, std::size_t nodes);

/// Node count for a cell of length T: even number of segments, >= 2.
std::size_t cell_nodes(double T, double nodes_per_unit);

struct CellResult {
  ProfilePair profile;
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;               // sup-norm of the diagonally scaled projected gradient step
  std::vector<double> energy_history;  // one entry per accepted iterate
};

/// Minimizes the cell energy on [0, T] for opening s. alpha is eliminated
/// exactly (slope proportional to 1 / f^2(beta)); beta is updated by projected
/// Newton steps with an Armijo search on the projection arc. The starting
/// point is the better of `init` (resampled) and the plateau construction.
CellResult minimize_cell(const DamagePotential& pot, double s, double T,
                         const SolverOptions& opts, const ProfilePair* init = nullptr,
                         double boundary = 1.0);

struct GhatResult {
  double value = 0.0;
  bool stabilized = false;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> T_values;
  std::vector<double> energies;  // per-T minima, nonincreasing
  ProfilePair profile;

  bool ok() const { return stabilized && converged; }
};

/// Cell-formula value of g(s): minimize_cell over T, growth * T, ... until
/// the relative decrease drops below opts.T_stop_tol.
GhatResult ghat(const DamagePotential& pot, double s, const SolverOptions& opts,
                const ProfilePair* warm = nullptr);

/// Same pipeline with beta = 1 - eta at both ends.
GhatResult g_eta(const DamagePotential& pot, double s, double eta, const SolverOptions& opts);

/// ghat over a strictly increasing grid starting at 0; each minimizer warm
/// starts the next sample after rescaling alpha.
DensityTable build_density_table(const DamagePotential& pot, const std::vector<double>& s_grid,
                                 const SolverOptions& opts);

struct PropertyCheck {
  std::string name;
  bool pass = true;
  double margin = 0.0;  // smallest slack; negative on violation
  std::string detail;
};

struct TableCheckOptions {
  double ell = 1.0;
  double small_slope_tol = 0.1;  // relative window for g(s)/s near 0
  double large_s_level = 0.9;    // g at the largest sample if it is >= 20 / ell
  bool remark_bound = false;     // g <= ell s - (ell s)^2 / 4 for ell s < 2
};

/// 81 openings on [0, 20]: 0, 0.01..0.05, 0.07, 0.1..3 step 0.1,
/// 3.25..8 step 0.25, 8.5..20 step 0.5.
std::vector<double> standard_density_grid();

/// The structural property suite for a table computed from a potential with
/// finite slope ell at the end.
/// With ell = +inf only the ell-free checks run and the cap is 1.
std::vector<PropertyCheck> table_property_suite(const DensityTable& table,
                                                const TableCheckOptions& opts);

/// CSV "t,alpha,beta"; normalized divides alpha by s and t by T.
void write_profile_csv(std::ostream& out, const ProfilePair& profile, bool normalized = false);

}  // namespace cohesive
