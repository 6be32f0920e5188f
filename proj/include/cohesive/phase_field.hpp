#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cohesive/limit_densities.hpp"
#include "cohesive/potentials.hpp"

namespace cohesive {

/// Nodal P1 fields on a uniform mesh of [0, 1] with cells() elements.
/// u(0) = 0 and u(1) = t in the Dirichlet setting; v is free at both ends.
struct PhaseFieldState {
  double eps = 0.1;
  double eta = 0.0;
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> v;

  std::size_t cells() const { return v.size() - 1; }
  double spacing() const { return 1.0 / static_cast<double>(cells()); }
  void validate() const;

  /// v = 1, u linear from 0 to t.
  static PhaseFieldState elastic(std::size_t cells, double eps, double eta, double t);
  /// v = 1 - exp(-|x - 1/2| / (2 eps)) (zero at the midpoint), u a step at 1/2.
  static PhaseFieldState midpoint_well(std::size_t cells, double eps, double eta, double t);
};

struct FidelityData {
  std::vector<double> zeta;  // datum at the nodes
  double q = 2.0;

  void validate(std::size_t nodes) const;
};

/// max(2000, ceil(20 / eps)) cells.
std::size_t mesh_cells(double eps);
/// 1e-6 eps^2.
double default_eta(double eps);

/// Sum over elements of h [ (f_eps^2(v_mid) + eta) |u'|^2 + (1 - v_mid)^2 / (4 eps)
/// + eps |v'|^2 ], v_mid the element midpoint value.
double fk_energy(const PhaseFieldState& state, const DamagePotential& pot);
/// fk_energy plus the nodal (trapezoidal) quadrature of |u - zeta|^q.
double gk_energy(const PhaseFieldState& state, const DamagePotential& pot,
                 const FidelityData& fid);

/// Exact minimization in u for fixed v with u(0) = 0, u(1) = t. Throws
/// std::domain_error if every element coefficient vanishes.
void minimize_u_step(PhaseFieldState& state, const DamagePotential& pot);
/// Minimization in u with free ends and the fidelity term (Newton for q != 2).
void minimize_u_step(PhaseFieldState& state, const DamagePotential& pot, const FidelityData& fid);

struct VStepResult {
  double energy = 0.0;
  int iterations = 0;
  bool flagged = false;  // line search failed before any progress
};

/// Projected Newton-type descent on v with box [0, 1] and an Armijo search on
/// the projection arc; the Hessian of f_eps^2 is replaced by its positive part.
VStepResult minimize_v_step(PhaseFieldState& state, const DamagePotential& pot,
                            int max_iterations = 20, double rel_tol = 1e-12);

struct AlternationOptions {
  double tol = 1e-9;  // relative energy decrease per round
  int max_rounds = 20000;
  int v_iterations = 20;
  bool multistart = true;  // also start from midpoint_well
};

struct AlternationResult {
  PhaseFieldState state;
  double energy = 0.0;
  int rounds = 0;
  bool converged = false;
  bool vstep_flagged = false;
  std::string start;  // "elastic" or "well"
  std::vector<double> history;  // energy after every round
};

/// Alternates u- and v-steps from `init`. With `fid`, u has free ends and
/// the energy is gk_energy.
AlternationResult alternate_minimize(const PhaseFieldState& init, const DamagePotential& pot,
                                     const AlternationOptions& opts,
                                     const FidelityData* fid = nullptr);

/// Best of the elastic start and, with opts.multistart, the midpoint well.
AlternationResult minimize_bar(const DamagePotential& pot, double eps, double t,
                               const AlternationOptions& opts, std::size_t cells = 0);
/// Free-end problem with fidelity datum; multi-start over v = 1 and the well.
AlternationResult minimize_with_fidelity(const DamagePotential& pot, double eps,
                                         const FidelityData& fid, const AlternationOptions& opts);

struct SweepRow {
  double eps = 0.0;
  double t = 0.0;
  double energy = 0.0;
  double limit_energy = 0.0;
  double gap = 0.0;  // |energy - limit| / limit, 0 when both vanish
  int rounds = 0;
  std::string flags;  // '|'-separated: max_rounds, vstep, elastic_bound
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::vector<double> t_values;
  std::vector<bool> gap_decreasing;  // per t, across the decreasing eps-list
  double fraction_decreasing() const;
};

/// E_eps(t) for every pair; eps-list strictly decreasing; the mesh for each
/// eps is mesh_cells(eps) unless `cells` is given, which must be >= 20 / eps.
SweepTable bar_sweep(const DamagePotential& pot, const std::vector<double>& eps_list,
                     const std::vector<double>& t_list, const DensityTable& gtable,
                     const AlternationOptions& opts, std::size_t cells = 0);

/// CSV "eps,t,energy,limit_energy,gap,rounds,flags".
void write_sweep_csv(std::ostream& out, const SweepTable& table);
/// CSV "x,u,v".
void write_state_csv(std::ostream& out, const PhaseFieldState& state);

}  // namespace cohesive
