#include "cohesive/phase_field.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cohesive/csv.hpp"
#include "cohesive/tridiagonal.hpp"

namespace cohesive {

namespace {

// Derivative of f_eps^2 at v; zero where the truncation at 1 is active.
double fk_square_slope(const DamagePotential& pot, double eps, double v) {
  if (v >= 1.0) return 0.0;
  const double root = std::sqrt(eps);
  double f;
  double fp;
  if (v > 0.0) {
    f = pot.f(v);
    if (root * f >= 1.0) return 0.0;
    fp = -pot.inverse_derivative(v) * f * f;
  } else {
    constexpr double d = 1e-8;
    f = 0.0;
    fp = pot.f(d) / d;
  }
  return 2.0 * eps * f * fp;
}

struct Coefficient {
  double value;
  double slope;
  double curvature;  // positive part of the second derivative
};

Coefficient fk_square(const DamagePotential& pot, double eps, double v) {
  const double fk = eval_fk(pot, eps, v);
  Coefficient c{fk * fk, 0.0, 0.0};
  if (fk >= 1.0) return c;
  c.slope = fk_square_slope(pot, eps, v);
  const double d = 1e-6;
  const double lo = std::max(0.0, v - d);
  const double hi = std::min(1.0, v + d);
  c.curvature = std::max(0.0, (fk_square_slope(pot, eps, hi) - fk_square_slope(pot, eps, lo)) /
                                  (hi - lo));
  return c;
}

double v_energy(const std::vector<double>& v, const std::vector<double>& grad_u_sq,
                const PhaseFieldState& st, const DamagePotential& pot) {
  const double h = st.spacing();
  double total = 0.0;
  for (std::size_t e = 0; e + 1 < v.size(); ++e) {
    const double vm = 0.5 * (v[e] + v[e + 1]);
    const double fk = eval_fk(pot, st.eps, vm);
    const double dv = (v[e + 1] - v[e]) / h;
    total += h * ((fk * fk + st.eta) * grad_u_sq[e] + (1.0 - vm) * (1.0 - vm) / (4.0 * st.eps) +
                  st.eps * dv * dv);
  }
  return total;
}

double fidelity_term(const PhaseFieldState& st, const FidelityData& fid) {
  const double h = st.spacing();
  double total = 0.0;
  const std::size_t n = st.u.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 * h : h;
    total += w * std::pow(std::abs(st.u[i] - fid.zeta[i]), fid.q);
  }
  return total;
}

double total_energy(const PhaseFieldState& st, const DamagePotential& pot,
                    const FidelityData* fid) {
  return fid != nullptr ? gk_energy(st, pot, *fid) : fk_energy(st, pot);
}

}  // namespace

void PhaseFieldState::validate() const {
  if (v.size() < 3 || u.size() != v.size()) {
    throw std::invalid_argument("phase-field state needs >= 2 cells and matching u/v");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(eta >= 0.0)) throw std::invalid_argument("eta must be nonnegative");
  for (double x : v) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("v outside [0,1]");
  }
}

PhaseFieldState PhaseFieldState::elastic(std::size_t cells, double eps, double eta, double t) {
  PhaseFieldState st;
  st.eps = eps;
  st.eta = eta;
  st.t = t;
  st.v.assign(cells + 1, 1.0);
  st.u.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    st.u[i] = t * static_cast<double>(i) / static_cast<double>(cells);
  }
  st.validate();
  return st;
}

PhaseFieldState PhaseFieldState::midpoint_well(std::size_t cells, double eps, double eta,
                                               double t) {
  PhaseFieldState st = elastic(cells, eps, eta, t);
  for (std::size_t i = 0; i <= cells; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(cells);
    st.v[i] = 1.0 - std::exp(-std::abs(x - 0.5) / (2.0 * eps));
    st.u[i] = x < 0.5 ? 0.0 : (x > 0.5 ? t : 0.5 * t);
  }
  return st;
}

void FidelityData::validate(std::size_t nodes) const {
  if (!(q > 1.0)) throw std::invalid_argument("fidelity exponent must exceed 1");
  if (zeta.size() != nodes) throw std::invalid_argument("fidelity datum size mismatch");
}

std::size_t mesh_cells(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  return std::max<std::size_t>(2000, static_cast<std::size_t>(std::ceil(20.0 / eps)));
}

double default_eta(double eps) { return 1e-6 * eps * eps; }

double fk_energy(const PhaseFieldState& state, const DamagePotential& pot) {
  state.validate();
  const double h = state.spacing();
  double total = 0.0;
  for (std::size_t e = 0; e < state.cells(); ++e) {
    const double vm = 0.5 * (state.v[e] + state.v[e + 1]);
    const double fk = eval_fk(pot, state.eps, vm);
    const double du = (state.u[e + 1] - state.u[e]) / h;
    const double dv = (state.v[e + 1] - state.v[e]) / h;
    total += h * ((fk * fk + state.eta) * du * du +
                  (1.0 - vm) * (1.0 - vm) / (4.0 * state.eps) + state.eps * dv * dv);
  }
  return total;
}

double gk_energy(const PhaseFieldState& state, const DamagePotential& pot,
                 const FidelityData& fid) {
  fid.validate(state.u.size());
  return fk_energy(state, pot) + fidelity_term(state, fid);
}

void minimize_u_step(PhaseFieldState& state, const DamagePotential& pot) {
  state.validate();
  const std::size_t m = state.cells();
  std::vector<double> inv(m);
  double sum = 0.0;
  std::size_t zeros = 0;
  for (std::size_t e = 0; e < m; ++e) {
    const double fk = eval_fk(pot, state.eps, 0.5 * (state.v[e] + state.v[e + 1]));
    const double c = fk * fk + state.eta;
    if (c == 0.0) {
      ++zeros;
      inv[e] = 0.0;
    } else {
      inv[e] = 1.0 / c;
      sum += inv[e];
    }
  }
  if (zeros == m) throw std::domain_error("u-step singular: every coefficient vanishes");
  // The discrete Euler-Lagrange system says c_e (u_{e+1} - u_e) is constant.
  state.u[0] = 0.0;
  for (std::size_t e = 0; e < m; ++e) {
    double du;
    if (zeros > 0) {
      const double fk = eval_fk(pot, state.eps, 0.5 * (state.v[e] + state.v[e + 1]));
      du = (fk * fk + state.eta == 0.0) ? state.t / static_cast<double>(zeros) : 0.0;
    } else {
      du = state.t * inv[e] / sum;
    }
    state.u[e + 1] = state.u[e] + du;
  }
  state.u[m] = state.t;
}

void minimize_u_step(PhaseFieldState& state, const DamagePotential& pot,
                     const FidelityData& fid) {
  state.validate();
  fid.validate(state.u.size());
  const std::size_t n = state.u.size();
  const std::size_t m = n - 1;
  const double h = state.spacing();
  std::vector<double> stiff(m);
  for (std::size_t e = 0; e < m; ++e) {
    const double fk = eval_fk(pot, state.eps, 0.5 * (state.v[e] + state.v[e + 1]));
    stiff[e] = 2.0 * (fk * fk + state.eta) / h;
  }
  auto weight = [&](std::size_t i) { return (i == 0 || i + 1 == n) ? 0.5 * h : h; };
  auto energy = [&](const std::vector<double>& u) {
    double total = 0.0;
    for (std::size_t e = 0; e < m; ++e) total += 0.5 * stiff[e] * (u[e + 1] - u[e]) * (u[e + 1] - u[e]);
    for (std::size_t i = 0; i < n; ++i) total += weight(i) * std::pow(std::abs(u[i] - fid.zeta[i]), fid.q);
    return total;
  };

  std::vector<double> grad(n), diag(n), off(m), dir(n), trial(n);
  TridiagonalLdl ldl;
  double current = energy(state.u);
  for (int it = 0; it < 100; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    std::fill(diag.begin(), diag.end(), 0.0);
    for (std::size_t e = 0; e < m; ++e) {
      const double flux = stiff[e] * (state.u[e + 1] - state.u[e]);
      grad[e] -= flux;
      grad[e + 1] += flux;
      diag[e] += stiff[e];
      diag[e + 1] += stiff[e];
      off[e] = -stiff[e];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double r = state.u[i] - fid.zeta[i];
      const double a = std::abs(r);
      const double w = weight(i);
      if (a > 0.0) grad[i] += w * fid.q * std::pow(a, fid.q - 1.0) * (r > 0.0 ? 1.0 : -1.0);
      const double curv = a > 0.0 ? fid.q * (fid.q - 1.0) * std::pow(a, fid.q - 2.0)
                                  : (fid.q < 2.0 ? 1e12 : (fid.q == 2.0 ? 2.0 : 0.0));
      diag[i] += w * std::clamp(curv, 1e-12, 1e12);
    }
    if (!ldl.factor(diag, off)) throw std::domain_error("u-step Hessian not positive definite");
    for (std::size_t i = 0; i < n; ++i) dir[i] = -grad[i];
    ldl.solve(dir);
    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) slope += grad[i] * dir[i];
    if (!(slope < 0.0)) break;
    double tau = 1.0;
    bool accepted = false;
    double next = current;
    for (int ls = 0; ls < 50; ++ls, tau *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = state.u[i] + tau * dir[i];
      next = energy(trial);
      if (next <= current + 1e-4 * tau * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    state.u.swap(trial);
    const double decrease = current - next;
    current = next;
    if (decrease <= 1e-14 * std::max(current, 1e-300) || (fid.q == 2.0 && tau == 1.0)) break;
  }
}

VStepResult minimize_v_step(PhaseFieldState& state, const DamagePotential& pot,
                            int max_iterations, double rel_tol) {
  state.validate();
  const std::size_t n = state.v.size();
  const std::size_t m = n - 1;
  const double h = state.spacing();
  const double eps = state.eps;
  std::vector<double> gu2(m);
  for (std::size_t e = 0; e < m; ++e) {
    const double du = (state.u[e + 1] - state.u[e]) / h;
    gu2[e] = du * du;
  }
  VStepResult result;
  double energy = v_energy(state.v, gu2, state, pot);
  std::vector<double> grad(n), diag(n), off(m), dir(n), trial(n), a(m);
  std::vector<char> active(n);
  TridiagonalLdl ldl;
  const double stiffness = 2.0 * eps / h;

  for (int it = 0; it < max_iterations; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t e = 0; e < m; ++e) {
      const double vm = 0.5 * (state.v[e] + state.v[e + 1]);
      const Coefficient c = fk_square(pot, eps, vm);
      const double g_mid = h * (c.slope * gu2[e] - (1.0 - vm) / (2.0 * eps));
      const double flux = stiffness * (state.v[e + 1] - state.v[e]);
      grad[e] += 0.5 * g_mid - flux;
      grad[e + 1] += 0.5 * g_mid + flux;
      a[e] = 0.25 * h * (c.curvature * gu2[e] + 1.0 / (2.0 * eps));
    }
    double pg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pg = std::max(pg, std::abs(std::clamp(state.v[i] - grad[i], 0.0, 1.0) - state.v[i]));
    }
    const double eps_active = std::min(1e-6, pg);
    for (std::size_t i = 0; i < n; ++i) {
      active[i] = (state.v[i] <= eps_active && grad[i] > 0.0) ||
                  (state.v[i] >= 1.0 - eps_active && grad[i] < 0.0);
    }
    std::fill(diag.begin(), diag.end(), 0.0);
    for (std::size_t e = 0; e < m; ++e) {
      diag[e] += a[e] + stiffness;
      diag[e + 1] += a[e] + stiffness;
      off[e] = (active[e] || active[e + 1]) ? 0.0 : a[e] - stiffness;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i]) diag[i] = 1.0;
      dir[i] = active[i] ? 0.0 : -grad[i];
    }
    if (!ldl.factor(diag, off)) break;
    ldl.solve(dir);

    double tau = 1.0;
    bool accepted = false;
    double next = energy;
    for (int ls = 0; ls < 50; ++ls, tau *= 0.5) {
      double pred = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = std::clamp(state.v[i] + tau * dir[i], 0.0, 1.0);
        pred += grad[i] * (trial[i] - state.v[i]);
      }
      if (!(pred < 0.0)) continue;
      next = v_energy(trial, gu2, state, pot);
      if (next <= energy + 1e-4 * pred) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (it == 0 && pg > 1e-10) result.flagged = true;
      break;
    }
    state.v.swap(trial);
    const double decrease = energy - next;
    energy = next;
    result.iterations = it + 1;
    if (decrease <= rel_tol * std::max(energy, 1e-300)) break;
  }
  result.energy = fk_energy(state, pot);
  return result;
}

AlternationResult alternate_minimize(const PhaseFieldState& init, const DamagePotential& pot,
                                     const AlternationOptions& opts, const FidelityData* fid) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("alternation tolerance must be positive");
  if (opts.max_rounds <= 0) throw std::invalid_argument("max_rounds must be positive");
  AlternationResult res;
  res.state = init;
  res.state.validate();
  if (fid != nullptr) fid->validate(init.u.size());
  double energy = total_energy(res.state, pot, fid);
  for (int round = 0; round < opts.max_rounds; ++round) {
    if (fid != nullptr) {
      minimize_u_step(res.state, pot, *fid);
    } else {
      minimize_u_step(res.state, pot);
    }
    const VStepResult vr = minimize_v_step(res.state, pot, opts.v_iterations);
    res.vstep_flagged = res.vstep_flagged || vr.flagged;
    const double next = total_energy(res.state, pot, fid);
    res.history.push_back(next);
    res.rounds = round + 1;
    const double decrease = energy - next;
    energy = next;
    if (energy == 0.0 || decrease <= opts.tol * energy) {
      res.converged = true;
      break;
    }
  }
  res.energy = energy;
  return res;
}

AlternationResult minimize_bar(const DamagePotential& pot, double eps, double t,
                               const AlternationOptions& opts, std::size_t cells) {
  if (cells == 0) cells = mesh_cells(eps);
  const double eta = default_eta(eps);
  AlternationResult best =
      alternate_minimize(PhaseFieldState::elastic(cells, eps, eta, t), pot, opts);
  best.start = "elastic";
  if (opts.multistart && t != 0.0) {
    AlternationResult well =
        alternate_minimize(PhaseFieldState::midpoint_well(cells, eps, eta, t), pot, opts);
    well.start = "well";
    if (well.energy < best.energy) best = std::move(well);
  }
  return best;
}

AlternationResult minimize_with_fidelity(const DamagePotential& pot, double eps,
                                         const FidelityData& fid,
                                         const AlternationOptions& opts) {
  if (fid.zeta.size() < 3) throw std::invalid_argument("fidelity datum needs >= 3 nodes");
  const std::size_t cells = fid.zeta.size() - 1;
  const double eta = default_eta(eps);
  PhaseFieldState start = PhaseFieldState::elastic(cells, eps, eta, 0.0);
  start.u = fid.zeta;
  AlternationResult best = alternate_minimize(start, pot, opts, &fid);
  best.start = "elastic";
  if (opts.multistart) {
    PhaseFieldState well = PhaseFieldState::midpoint_well(cells, eps, eta, 0.0);
    well.u = fid.zeta;
    AlternationResult other = alternate_minimize(well, pot, opts, &fid);
    other.start = "well";
    if (other.energy < best.energy) best = std::move(other);
  }
  return best;
}

double SweepTable::fraction_decreasing() const {
  if (gap_decreasing.empty()) return 0.0;
  const auto count = std::count(gap_decreasing.begin(), gap_decreasing.end(), true);
  return static_cast<double>(count) / static_cast<double>(gap_decreasing.size());
}

SweepTable bar_sweep(const DamagePotential& pot, const std::vector<double>& eps_list,
                     const std::vector<double>& t_list, const DensityTable& gtable,
                     const AlternationOptions& opts, std::size_t cells) {
  if (eps_list.empty() || t_list.empty()) throw std::invalid_argument("empty sweep lists");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0) || (k > 0 && !(eps_list[k] < eps_list[k - 1]))) {
      throw std::invalid_argument("eps-list must be positive and strictly decreasing");
    }
    const std::size_t mk = cells != 0 ? cells : mesh_cells(eps_list[k]);
    if (static_cast<double>(mk) < 20.0 / eps_list[k]) {
      throw std::invalid_argument("mesh with " + std::to_string(mk) +
                                  " cells under-resolves eps=" + csv::num(eps_list[k]) +
                                  " (need >= 20/eps)");
    }
  }
  SweepTable table;
  table.t_values = t_list;
  const double ell = pot.ell();
  std::vector<std::vector<double>> gaps(t_list.size());
  for (double eps : eps_list) {
    for (std::size_t j = 0; j < t_list.size(); ++j) {
      const double t = t_list[j];
      const AlternationResult r = minimize_bar(pot, eps, t, opts, cells);
      SweepRow row;
      row.eps = eps;
      row.t = t;
      row.energy = r.energy;
      row.limit_energy = limit_bar_energy(gtable, ell, t).energy;
      row.gap = row.limit_energy > 0.0
                    ? std::abs(row.energy - row.limit_energy) / row.limit_energy
                    : std::abs(row.energy);
      row.rounds = r.rounds;
      std::vector<std::string> flags;
      if (!r.converged) flags.emplace_back("max_rounds");
      if (r.vstep_flagged) flags.emplace_back("vstep");
      if (r.energy > t * t + 1e-6) flags.emplace_back("elastic_bound");
      for (std::size_t f = 0; f < flags.size(); ++f) row.flags += (f ? "|" : "") + flags[f];
      gaps[j].push_back(row.gap);
      table.rows.push_back(std::move(row));
    }
  }
  for (const auto& g : gaps) {
    bool decreasing = true;
    for (std::size_t k = 1; k < g.size(); ++k) decreasing = decreasing && g[k] <= g[k - 1] + 1e-9;
    table.gap_decreasing.push_back(decreasing);
  }
  return table;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  csv::write_row(out, {"eps", "t", "energy", "limit_energy", "gap", "rounds", "flags"});
  for (const auto& r : table.rows) {
    csv::write_row(out, {csv::num(r.eps), csv::num(r.t), csv::num(r.energy),
                         csv::num(r.limit_energy), csv::num(r.gap), std::to_string(r.rounds),
                         r.flags});
  }
}

void write_state_csv(std::ostream& out, const PhaseFieldState& state) {
  csv::write_row(out, {"x", "u", "v"});
  const double h = state.spacing();
  for (std::size_t i = 0; i < state.v.size(); ++i) {
    csv::write_row(out, {csv::num(h * static_cast<double>(i)), csv::num(state.u[i]),
                         csv::num(state.v[i])});
  }
}

}  // namespace cohesive
