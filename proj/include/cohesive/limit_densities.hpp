#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace cohesive {

/// Per-sample solver diagnostics carried by a density table.
struct SampleDiagnostics {
  std::string solver = "exact";
  std::size_t grid = 0;
  double T = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
};

/// Sampled surface density s -> value (g or theta_p). Samples are strictly
/// increasing in s, start at s = 0 with value 0; values lie in [0, 1 + tol].
struct DensityTable {
  std::string potential;
  double tolerance = 0.02;  // relative solver tolerance used by property checks
  std::vector<double> s;
  std::vector<double> value;
  std::vector<SampleDiagnostics> diagnostics;

  std::size_t size() const { return s.size(); }
  double max_s() const { return s.empty() ? 0.0 : s.back(); }
  /// Piecewise-linear interpolation; throws std::out_of_range outside the
  /// sampled range.
  double interpolate(double x) const;
  /// Throws std::invalid_argument if the structural invariants fail.
  void validate() const;
};

/// CSV with header "s,value,solver,grid,T,iterations,residual"; reals with
/// 12 significant digits.
void write_density_csv(std::ostream& out, const DensityTable& table);
DensityTable read_density_csv(std::istream& in);

/// Volume density of the limit model: t^2 for t <= ell/2, ell t - ell^2/4 beyond.
double eval_h(double ell, double t);

/// A 1D function with finitely many jumps and no Cantor part: the domain
/// [lo, hi] is split at strictly increasing interior breakpoints; each piece
/// carries node values on its own uniform grid.
struct Candidate1D {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> breakpoints;
  std::vector<std::vector<double>> pieces;

  /// Affine u = slope (x - lo) + offset on [lo, hi] without jumps.
  static Candidate1D affine(double lo, double hi, double slope, double offset, std::size_t nodes);
  /// Constant pieces with the given values separated by the breakpoints.
  static Candidate1D piecewise_constant(double lo, double hi, std::vector<double> breakpoints,
                                        const std::vector<double>& values);

  /// u(x+) - u(x-) at each breakpoint.
  std::vector<double> jumps() const;
  void validate() const;
};

/// Sum over pieces of the integral of h(|u'|) plus the sum over jumps of
/// g(|[u]|), g interpolated from the table. Throws std::out_of_range if a jump
/// exceeds the table range.
double eval_phi_1d(const Candidate1D& cand, double ell, const DensityTable& gtable);

struct BarEnergy {
  double energy = 0.0;
  double jump = 0.0;  // optimal opening s*
};

/// min over s in [0, t] of h(t - s) + g(s), s ranging over the table grid
/// plus the endpoint t; ties go to the smaller s.
BarEnergy limit_bar_energy(const DensityTable& gtable, double ell, double t);

}  // namespace cohesive
