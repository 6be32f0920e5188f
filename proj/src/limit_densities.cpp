#include "cohesive/limit_densities.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "cohesive/csv.hpp"

namespace cohesive {

double DensityTable::interpolate(double x) const {
  if (s.empty()) throw std::out_of_range("empty density table");
  if (x < s.front() || x > s.back()) {
    throw std::out_of_range("opening " + csv::num(x) + " outside density table range [" +
                            csv::num(s.front()) + ", " + csv::num(s.back()) + "]");
  }
  auto it = std::lower_bound(s.begin(), s.end(), x);
  const auto hi = static_cast<std::size_t>(it - s.begin());
  if (s[hi] == x) return value[hi];
  const std::size_t lo = hi - 1;
  const double w = (x - s[lo]) / (s[hi] - s[lo]);
  return value[lo] + w * (value[hi] - value[lo]);
}

void DensityTable::validate() const {
  if (s.empty() || s.size() != value.size()) {
    throw std::invalid_argument("density table needs matching, nonempty columns");
  }
  if (!diagnostics.empty() && diagnostics.size() != s.size()) {
    throw std::invalid_argument("density table diagnostics size mismatch");
  }
  if (s.front() != 0.0 || value.front() != 0.0) {
    throw std::invalid_argument("density table must start at (0, 0)");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0 && !(s[i] > s[i - 1])) {
      throw std::invalid_argument("density table s must be strictly increasing");
    }
    if (!(value[i] >= 0.0) || value[i] > 1.0 + tolerance) {
      throw std::invalid_argument("density table value outside [0, 1 + tol] at s = " +
                                  csv::num(s[i]));
    }
  }
}

void write_density_csv(std::ostream& out, const DensityTable& table) {
  csv::write_row(out, {"s", "value", "solver", "grid", "T", "iterations", "residual"});
  for (std::size_t i = 0; i < table.size(); ++i) {
    SampleDiagnostics d;
    if (i < table.diagnostics.size()) d = table.diagnostics[i];
    csv::write_row(out, {csv::num(table.s[i]), csv::num(table.value[i]), d.solver,
                         std::to_string(d.grid), csv::num(d.T), std::to_string(d.iterations),
                         csv::num(d.residual)});
  }
}

DensityTable read_density_csv(std::istream& in) {
  DensityTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty density CSV");
  const auto header = csv::split(line);
  if (header.size() < 2 || header[0] != "s" || header[1] != "value") {
    throw std::invalid_argument("density CSV header must start with s,value");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = csv::split(line);
    if (cells.size() != header.size()) throw std::invalid_argument("ragged density CSV row");
    table.s.push_back(std::stod(cells[0]));
    table.value.push_back(std::stod(cells[1]));
    if (cells.size() >= 7) {
      SampleDiagnostics d;
      d.solver = cells[2];
      d.grid = static_cast<std::size_t>(std::stoull(cells[3]));
      d.T = std::stod(cells[4]);
      d.iterations = std::stoi(cells[5]);
      d.residual = std::stod(cells[6]);
      table.diagnostics.push_back(d);
    }
  }
  table.validate();
  return table;
}

double eval_h(double ell, double t) {
  if (!(ell > 0.0)) throw std::invalid_argument("ell must be positive");
  if (t < 0.0) throw std::domain_error("h is defined for t >= 0");
  if (t <= 0.5 * ell) return t * t;
  return ell * t - 0.25 * ell * ell;
}

Candidate1D Candidate1D::affine(double lo, double hi, double slope, double offset,
                                std::size_t nodes) {
  Candidate1D c;
  c.lo = lo;
  c.hi = hi;
  std::vector<double> u(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(nodes - 1);
    u[i] = slope * (x - lo) + offset;
  }
  c.pieces.push_back(std::move(u));
  c.validate();
  return c;
}

Candidate1D Candidate1D::piecewise_constant(double lo, double hi, std::vector<double> breakpoints,
                                            const std::vector<double>& values) {
  Candidate1D c;
  c.lo = lo;
  c.hi = hi;
  c.breakpoints = std::move(breakpoints);
  for (double v : values) c.pieces.push_back({v, v});
  c.validate();
  return c;
}

std::vector<double> Candidate1D::jumps() const {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < pieces.size(); ++k) {
    out.push_back(pieces[k + 1].front() - pieces[k].back());
  }
  return out;
}

void Candidate1D::validate() const {
  if (!(hi > lo)) throw std::invalid_argument("candidate domain must be nonempty");
  if (pieces.size() != breakpoints.size() + 1) {
    throw std::invalid_argument("candidate needs one piece per breakpoint interval");
  }
  double prev = lo;
  for (double b : breakpoints) {
    if (!(b > prev) || !(b < hi)) {
      throw std::invalid_argument("breakpoints must be strictly ordered and interior");
    }
    prev = b;
  }
  for (const auto& piece : pieces) {
    if (piece.size() < 2) throw std::invalid_argument("each piece needs >= 2 nodes");
  }
}

double eval_phi_1d(const Candidate1D& cand, double ell, const DensityTable& gtable) {
  cand.validate();
  double total = 0.0;
  for (std::size_t k = 0; k < cand.pieces.size(); ++k) {
    const double a = k == 0 ? cand.lo : cand.breakpoints[k - 1];
    const double b = k == cand.breakpoints.size() ? cand.hi : cand.breakpoints[k];
    const auto& u = cand.pieces[k];
    const double dx = (b - a) / static_cast<double>(u.size() - 1);
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
      total += eval_h(ell, std::abs(u[i + 1] - u[i]) / dx) * dx;
    }
  }
  for (double jump : cand.jumps()) total += gtable.interpolate(std::abs(jump));
  return total;
}

BarEnergy limit_bar_energy(const DensityTable& gtable, double ell, double t) {
  if (t < 0.0) throw std::domain_error("stretch must be nonnegative");
  if (gtable.s.empty() || t > gtable.max_s()) {
    throw std::out_of_range("density table range " + csv::num(gtable.max_s()) +
                            " does not cover stretch " + csv::num(t));
  }
  BarEnergy best{eval_h(ell, t), 0.0};
  auto consider = [&](double s) {
    const double e = eval_h(ell, t - s) + gtable.interpolate(s);
    if (e < best.energy) best = {e, s};
  };
  for (double s : gtable.s) {
    if (s > t) break;
    if (s > 0.0) consider(s);
  }
  consider(t);
  return best;
}

}  // namespace cohesive
