#include "cohesive/profile_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "cohesive/csv.hpp"
#include "cohesive/tridiagonal.hpp"

namespace cohesive {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double inverse_second_derivative(const DamagePotential& pot, double b) {
  if (pot.family() == Family::Prototype || pot.family() == Family::GriffithScaled) {
    return 2.0 / (pot.ell() * b * b * b);
  }
  const double step = 1e-6 * std::max(b, 1e-12);
  const double lo = std::max(b - step, 0.5 * b);
  const double hi = std::min(b + step, 1.0);
  return (pot.inverse_derivative(hi) - pot.inverse_derivative(lo)) / (hi - lo);
}

// The clamp is stated for unit slope of (1 - b) f(b) at 0; steeper potentials
// get a proportionally lower bound so that 1 / f stays on the same scale.
double effective_clamp(const DamagePotential& pot, double clamp) {
  constexpr double probe = 1e-9;
  const double slope = pot.product(probe) / probe;
  return slope > 1.0 ? clamp / slope : clamp;
}

/// Cell energy with alpha eliminated: for fixed beta the optimal alpha has
/// segment increments proportional to h / f^2(b_i), which leaves
/// s^2 / S with S = sum_i h / f^2(b_i).
class ReducedCell {
 public:
  ReducedCell(const DamagePotential& pot, double s, double h) : pot_(pot), s_(s), h_(h) {}

  double energy(const std::vector<double>& beta) const {
    double S = 0.0;
    double rest = 0.0;
    for (std::size_t i = 0; i + 1 < beta.size(); ++i) {
      const double b = 0.5 * (beta[i] + beta[i + 1]);
      const double d = beta[i + 1] - beta[i];
      rest += 0.25 * h_ * (1.0 - b) * (1.0 - b) + d * d / h_;
      if (s_ != 0.0) {
        const double r = pot_.inverse(b);
        S += h_ * r * r;
      }
    }
    if (s_ == 0.0) return rest;
    if (!(S > 0.0)) return kInf;
    return s_ * s_ / S + rest;
  }

  struct Derivatives {
    std::vector<double> grad;  // per node, zero at the two ends
    std::vector<double> diag;  // tridiagonal part of the Hessian
    std::vector<double> off;
    std::vector<double> dS;    // gradient of S
    std::vector<double> diag_convex;  // same without the curvature of S
    std::vector<double> off_convex;
    double rank_one = 0.0;     // Hessian = tridiag + rank_one * dS dS^T
  };

  void derivatives(const std::vector<double>& beta, Derivatives& out) const {
    const std::size_t n = beta.size();
    const std::size_t m = n - 1;
    std::vector<double> qp(m, 0.0), qpp(m, 0.0), mid(m);
    double S = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double b = 0.5 * (beta[i] + beta[i + 1]);
      mid[i] = b;
      if (s_ != 0.0) {
        const double r = pot_.inverse(b);
        const double rp = pot_.inverse_derivative(b);
        const double rpp = inverse_second_derivative(pot_, b);
        S += h_ * r * r;
        qp[i] = 2.0 * r * rp;
        qpp[i] = 2.0 * (rp * rp + r * rpp);
      }
    }
    const double w = s_ != 0.0 ? s_ * s_ / (S * S) : 0.0;
    out.rank_one = s_ != 0.0 ? 2.0 * s_ * s_ / (S * S * S) : 0.0;
    out.grad.assign(n, 0.0);
    out.diag.assign(n, 1.0);
    out.off.assign(m, 0.0);
    out.dS.assign(n, 0.0);
    out.diag_convex.assign(n, 1.0);
    out.off_convex.assign(m, 0.0);
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const double dS = 0.5 * h_ * (qp[j - 1] + qp[j]);
      out.dS[j] = dS;
      out.grad[j] = -w * dS - 0.25 * h_ * ((1.0 - mid[j - 1]) + (1.0 - mid[j])) +
                    (2.0 / h_) * (2.0 * beta[j] - beta[j - 1] - beta[j + 1]);
      out.diag_convex[j] = 0.25 * h_ + 4.0 / h_;
      out.diag[j] = out.diag_convex[j] - w * 0.25 * h_ * (qpp[j - 1] + qpp[j]);
      if (j + 2 < n) {
        out.off_convex[j] = 0.125 * h_ - 2.0 / h_;
        out.off[j] = out.off_convex[j] - w * 0.25 * h_ * qpp[j];
      }
    }
  }

  void alpha_from_beta(const std::vector<double>& beta, std::vector<double>& alpha) const {
    const std::size_t n = beta.size();
    alpha.assign(n, 0.0);
    if (s_ == 0.0) return;
    std::vector<double> q(n - 1);
    double S = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double r = pot_.inverse(0.5 * (beta[i] + beta[i + 1]));
      q[i] = r * r;
      S += q[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) alpha[i + 1] = alpha[i] + s_ * q[i] / S;
    alpha[n - 1] = s_;
  }

 private:
  const DamagePotential& pot_;
  double s_;
  double h_;
};

ProfilePair build_plateau(const DamagePotential& pot, double s, double b, double T,
                          std::size_t nodes, double boundary) {
  ProfilePair p;
  p.T = T;
  p.boundary = boundary;
  p.alpha.assign(nodes, 0.0);
  p.beta.assign(nodes, boundary);
  const double h = T / static_cast<double>(nodes - 1);
  const double c = 0.5 * T;
  double half = s > 0.0 ? plateau_half_length(pot, s, b) : 0.0;
  double ramp = 1.0;
  half = std::max(half, h);
  if (2.0 * half + 2.0 * ramp > T) {
    ramp = std::min(1.0, 0.25 * T);
    half = std::max(0.5 * T - ramp, h);
  }
  for (std::size_t i = 0; i < nodes; ++i) {
    const double t = h * static_cast<double>(i);
    const double d = std::abs(t - c);
    if (d <= half) {
      p.beta[i] = b;
    } else if (d <= half + ramp) {
      p.beta[i] = b + (boundary - b) * (d - half) / ramp;
    }
    if (t >= c + half) {
      p.alpha[i] = s;
    } else if (t > c - half) {
      p.alpha[i] = s * (t - (c - half)) / (2.0 * half);
    }
  }
  p.beta.front() = boundary;
  p.beta.back() = boundary;
  p.alpha.front() = 0.0;
  p.alpha.back() = s;
  return p;
}

ProfilePair build_dip(double s, double T, std::size_t nodes, double boundary) {
  ProfilePair p;
  p.T = T;
  p.boundary = boundary;
  p.alpha.assign(nodes, 0.0);
  p.beta.assign(nodes, boundary);
  const double level = std::clamp(1.0 - 0.5 * s, 0.05, 0.999);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(nodes - 1);
    if (x > 0.25 && x < 0.75) p.beta[i] = level;
    p.alpha[i] = s * x;
  }
  p.beta.front() = boundary;
  p.beta.back() = boundary;
  return p;
}

// Doubles the domain by padding half the old node count on each side; the
// reduced energy of the padded profile equals the old one when beta sits at 1
// on the boundary.
ProfilePair pad_profile(const ProfilePair& p) {
  const std::size_t m = p.nodes() - 1;
  const std::size_t pad = m / 2;
  ProfilePair out;
  out.T = 2.0 * p.T;
  out.boundary = p.boundary;
  out.beta.assign(2 * m + 1, p.boundary);
  out.alpha.assign(2 * m + 1, 0.0);
  for (std::size_t i = 0; i <= m; ++i) {
    out.beta[pad + i] = p.beta[i];
    out.alpha[pad + i] = p.alpha[i];
  }
  for (std::size_t i = pad + m + 1; i < out.alpha.size(); ++i) out.alpha[i] = p.opening();
  return out;
}

}  // namespace

void ProfilePair::validate() const {
  if (beta.size() < 3 || alpha.size() != beta.size()) {
    throw std::invalid_argument("profile needs >= 3 nodes and matching alpha/beta");
  }
  if (!(T > 0.0)) throw std::invalid_argument("profile length must be positive");
  if (alpha.front() != 0.0) throw std::invalid_argument("alpha(0) must be 0");
  if (beta.front() != boundary || beta.back() != boundary) {
    throw std::invalid_argument("beta must match the boundary value at both ends");
  }
  for (double b : beta) {
    if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("beta outside [0,1]");
  }
}

void SolverOptions::validate() const {
  if (max_iterations <= 0 || !(energy_tol > 0.0) || !(T_growth > 1.0) || !(T_stop_tol > 0.0) ||
      max_T_steps <= 0 || !(nodes_per_unit > 0.0) || !(table_tol > 0.0) || max_nodes < 3) {
    throw std::invalid_argument("solver options must be positive (growth > 1)");
  }
  if (!(beta_clamp > 0.0 && beta_clamp <= 1e-3)) {
    throw std::invalid_argument("beta clamp must lie in (0, 1e-3]");
  }
}

double cell_energy(const ProfilePair& profile, const DamagePotential& pot) {
  profile.validate();
  const double h = profile.spacing();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < profile.nodes(); ++i) {
    const double b = 0.5 * (profile.beta[i] + profile.beta[i + 1]);
    const double da = profile.alpha[i + 1] - profile.alpha[i];
    const double db = profile.beta[i + 1] - profile.beta[i];
    if (da != 0.0) {
      const double r = pot.inverse(b);
      if (r == 0.0) return kInf;
      total += da * da / (r * r * h);
    }
    total += 0.25 * h * (1.0 - b) * (1.0 - b) + db * db / h;
  }
  return total;
}

double plateau_closed_form(const DamagePotential& pot, double s, double b) {
  return pot.product(b) * s + (13.0 / 6.0) * (1.0 - b) * (1.0 - b);
}

double best_plateau_level(const DamagePotential& pot, double s, double clamp) {
  double best_b = clamp;
  double best = kInf;
  for (int k = 0; k < 64; ++k) {
    const double gap = std::pow(10.0, -4.0 + 4.0 * k / 63.0);
    const double b = std::max(clamp, 1.0 - gap);
    const double e = plateau_closed_form(pot, s, b);
    if (e < best) {
      best = e;
      best_b = b;
    }
  }
  return best_b;
}

double plateau_half_length(const DamagePotential& pot, double s, double b) {
  if (!(b < 1.0)) throw std::domain_error("plateau level must be below 1");
  return s * pot.f(b) / (1.0 - b);
}

double plateau_domain_length(const DamagePotential& pot, double s, double b) {
  return std::max(1.0, 2.0 * plateau_half_length(pot, s, b)) + 2.0;
}

std::size_t cell_nodes(double T, double nodes_per_unit) {
  const double half = std::ceil(0.5 * nodes_per_unit * T);
  return 2 * static_cast<std::size_t>(std::max(1.0, half)) + 1;
}

ProfilePair plateau_profile(const DamagePotential& pot, double s, double b, double T,
                            double nodes_per_unit, double boundary) {
  return build_plateau(pot, s, b, T, cell_nodes(T, nodes_per_unit), boundary);
}

ProfilePair resample(const ProfilePair& profile, double s, double T, std::size_t nodes) {
  ProfilePair out;
  out.T = T;
  out.boundary = profile.boundary;
  out.alpha.assign(nodes, 0.0);
  out.beta.assign(nodes, profile.boundary);
  const double old_s = profile.opening();
  const std::size_t m = profile.nodes() - 1;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(nodes - 1) *
                     static_cast<double>(m);
    const std::size_t k = std::min(static_cast<std::size_t>(x), m - 1);
    const double w = x - static_cast<double>(k);
    out.beta[i] = (1.0 - w) * profile.beta[k] + w * profile.beta[k + 1];
    const double a = (1.0 - w) * profile.alpha[k] + w * profile.alpha[k + 1];
    out.alpha[i] = old_s != 0.0 ? a * s / old_s : s * static_cast<double>(i) /
                                                      static_cast<double>(nodes - 1);
  }
  out.beta.front() = out.beta.back() = profile.boundary;
  out.alpha.front() = 0.0;
  out.alpha.back() = s;
  return out;
}

namespace {

// level < 0 selects best_plateau_level for the built-in start.
CellResult minimize_cell_from(const DamagePotential& pot, double s, double T,
                              const SolverOptions& opts, const ProfilePair* init,
                              double boundary, double level) {
  opts.validate();
  if (!(s >= 0.0)) throw std::domain_error("opening must be nonnegative");
  if (!(T > 0.0)) throw std::domain_error("cell length must be positive");
  if (!(boundary > 0.0 && boundary <= 1.0)) throw std::domain_error("boundary beta in (0,1]");

  std::size_t nodes = cell_nodes(T, opts.nodes_per_unit);
  if (init != nullptr && std::abs(init->T - T) <= 1e-12 * T) nodes = init->nodes();
  const double h = T / static_cast<double>(nodes - 1);
  const double lower = effective_clamp(pot, opts.beta_clamp);
  ReducedCell cell(pot, s, h);

  auto clamp_beta = [&](std::vector<double>& beta) {
    for (std::size_t i = 1; i + 1 < beta.size(); ++i) beta[i] = std::clamp(beta[i], lower, 1.0);
    beta.front() = beta.back() = boundary;
  };

  // Starting point: better of the supplied init and the built-in construction.
  std::vector<double> beta;
  {
    const double b = s == 0.0 ? boundary : (level < 0.0 ? best_plateau_level(pot, s, lower) : level);
    ProfilePair built = opts.init == InitStrategy::Dip
                            ? build_dip(s, T, nodes, boundary)
                            : build_plateau(pot, s, std::min(b, 1.0 - 1e-12), T, nodes, boundary);
    if (s == 0.0) std::fill(built.beta.begin(), built.beta.end(), boundary);
    beta = built.beta;
    clamp_beta(beta);
    double e = cell.energy(beta);
    if (opts.init == InitStrategy::Dip) {
      // The dip is only an alternative; the plateau construction stays a floor.
      auto plateau = build_plateau(pot, s, std::min(b, 1.0 - 1e-12), T, nodes, boundary);
      clamp_beta(plateau.beta);
      const double ep = cell.energy(plateau.beta);
      if (ep < e) {
        e = ep;
        beta = plateau.beta;
      }
    }
    if (init != nullptr) {
      ProfilePair warm = (init->nodes() == nodes && init->boundary == boundary)
                             ? *init
                             : resample(*init, s, T, nodes);
      warm.boundary = boundary;
      warm.beta.front() = warm.beta.back() = boundary;
      clamp_beta(warm.beta);
      const double ew = cell.energy(warm.beta);
      if (ew < e) beta = std::move(warm.beta);
    }
  }

  CellResult result;
  double energy = cell.energy(beta);
  result.energy_history.push_back(energy);

  const std::size_t n = nodes;
  ReducedCell::Derivatives der;
  std::vector<char> active(n, 0);
  std::vector<double> diag(n), off(n - 1), rhs(n), dS(n), z(n), trial(n), dir(n);
  TridiagonalLdl ldl;
  bool converged = false;
  int it = 0;
  double residual = 0.0;

  for (; it < opts.max_iterations; ++it) {
    cell.derivatives(beta, der);

    double pg = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const double moved =
          std::clamp(beta[j] - der.grad[j] / der.diag_convex[j], lower, 1.0) - beta[j];
      pg = std::max(pg, std::abs(moved));
    }
    residual = pg;
    const double eps_active = std::min(1e-3, pg);
    for (std::size_t j = 1; j + 1 < n; ++j) {
      active[j] = (beta[j] <= lower + eps_active && der.grad[j] > 0.0) ||
                  (beta[j] >= 1.0 - eps_active && der.grad[j] < 0.0);
    }
    active[0] = active[n - 1] = 1;

    // Newton system on the free variables; active rows become identity. If
    // the exact Hessian is indefinite, the curvature of S is dropped, which
    // leaves a positive definite tridiagonal plus rank-one matrix.
    auto assemble = [&](const std::vector<double>& d, const std::vector<double>& e) {
      for (std::size_t j = 0; j < n; ++j) {
        diag[j] = active[j] ? 1.0 : d[j];
        rhs[j] = active[j] ? 0.0 : -der.grad[j];
        dS[j] = active[j] ? 0.0 : der.dS[j];
      }
      for (std::size_t j = 0; j + 1 < n; ++j) off[j] = (active[j] || active[j + 1]) ? 0.0 : e[j];
    };
    assemble(der.diag, der.off);
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(diag[j]));
    if (!ldl.factor(diag, off, 1e-13 * scale)) {
      assemble(der.diag_convex, der.off_convex);
      ldl.factor(diag, off, 0.0);
    }
    dir = rhs;
    ldl.solve(dir);
    if (der.rank_one > 0.0) {
      z = dS;
      ldl.solve(z);
      double gy = 0.0, gz = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        gy += dS[j] * dir[j];
        gz += dS[j] * z[j];
      }
      const double coef = der.rank_one * gy / (1.0 + der.rank_one * gz);
      for (std::size_t j = 0; j < n; ++j) dir[j] -= coef * z[j];
    }

    auto search = [&](const std::vector<double>& d, double& accepted_tau) -> bool {
      double tau = 1.0;
      for (int ls = 0; ls < 60; ++ls, tau *= 0.5) {
        double pred = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          trial[j] = (j == 0 || j + 1 == n) ? boundary : std::clamp(beta[j] + tau * d[j], lower, 1.0);
          pred += der.grad[j] * (trial[j] - beta[j]);
        }
        if (!(pred < 0.0)) continue;
        const double e = cell.energy(trial);
        if (e <= energy + 1e-4 * pred) {
          accepted_tau = tau;
          return true;
        }
      }
      return false;
    };

    double slope = 0.0;
    for (std::size_t j = 0; j < n; ++j) slope += der.grad[j] * dir[j];
    double tau = 0.0;
    bool ok = slope < 0.0 && search(dir, tau);
    if (!ok) {
      for (std::size_t j = 0; j < n; ++j) {
        dir[j] = (j == 0 || j + 1 == n) ? 0.0 : -der.grad[j] / std::max(std::abs(der.diag[j]), 1e-300);
      }
      ok = search(dir, tau);
      tau = 0.5 * tau;  // a gradient step never counts as a full Newton step
    }
    if (!ok) {
      // No decrease representable in floating point: stationary.
      converged = true;
      break;
    }
    const double e_new = cell.energy(trial);
    const double decrease = energy - e_new;
    beta.swap(trial);
    energy = e_new;
    result.energy_history.push_back(energy);
    const double tol = opts.energy_tol * std::max(energy, 1e-12);
    if ((decrease <= tol && tau == 1.0) || decrease <= 1e-3 * tol) {
      converged = true;
      ++it;
      break;
    }
  }

  result.profile.T = T;
  result.profile.boundary = boundary;
  result.profile.beta = beta;
  cell.alpha_from_beta(beta, result.profile.alpha);
  result.energy = energy;
  result.iterations = it;
  result.converged = converged;
  result.residual = residual;
  return result;
}

}  // namespace

CellResult minimize_cell(const DamagePotential& pot, double s, double T,
                         const SolverOptions& opts, const ProfilePair* init, double boundary) {
  return minimize_cell_from(pot, s, T, opts, init, boundary, -1.0);
}

namespace {

GhatResult sweep(const DamagePotential& pot, double s, const SolverOptions& opts,
                 const ProfilePair* warm, double boundary) {
  opts.validate();
  if (!(s >= 0.0)) throw std::domain_error("opening must be nonnegative");
  GhatResult out;
  if (s == 0.0 && boundary == 1.0) {
    out.value = 0.0;
    out.stabilized = out.converged = true;
    out.profile = build_plateau(pot, 0.0, 1.0 - 1e-12, 1.0, 3, 1.0);
    std::fill(out.profile.beta.begin(), out.profile.beta.end(), 1.0);
    out.T_values = {1.0};
    out.energies = {0.0};
    return out;
  }
  const double clamp = effective_clamp(pot, opts.beta_clamp);
  const double best_level = s > 0.0 ? best_plateau_level(pot, s, clamp) : 1.0 - 1e-6;
  auto branch = [&](double level, const ProfilePair* init) {
    GhatResult res;
    double T = opts.initial_T;
    if (!(T > 0.0)) T = s > 0.0 ? plateau_domain_length(pot, s, level) : 4.0;
    T = std::max(T, 3.0);
    const bool exact_padding = opts.T_growth == 2.0;

    CellResult current = minimize_cell_from(pot, s, T, opts, init, boundary, level);
    res.converged = current.converged;
    res.iterations = current.iterations;
    res.T_values.push_back(T);
    res.energies.push_back(current.energy);

    for (int step = 1; step < opts.max_T_steps; ++step) {
      const double next_T = T * opts.T_growth;
      const ProfilePair seed = exact_padding ? pad_profile(current.profile) : current.profile;
      const std::size_t next_nodes =
          exact_padding ? seed.nodes() : cell_nodes(next_T, opts.nodes_per_unit);
      if (next_nodes > opts.max_nodes) break;
      CellResult next = minimize_cell_from(pot, s, next_T, opts, &seed, boundary, level);
      res.T_values.push_back(next_T);
      res.energies.push_back(next.energy);
      res.iterations += next.iterations;
      res.converged = res.converged && next.converged;
      const double prev = current.energy;
      current = std::move(next);
      T = next_T;
      if (prev - current.energy <= opts.T_stop_tol * std::max(current.energy, 1e-12)) {
        res.stabilized = true;
        break;
      }
    }
    res.value = *std::min_element(res.energies.begin(), res.energies.end());
    res.residual = current.residual;
    res.profile = std::move(current.profile);
    return res;
  };

  out = branch(best_level, warm);
  // Second branch from the fully damaged plateau.
  if (s > 0.0 && best_level > clamp) {
    GhatResult deep = branch(clamp, nullptr);
    if (deep.value < out.value) out = std::move(deep);
  }
  return out;
}

}  // namespace

GhatResult ghat(const DamagePotential& pot, double s, const SolverOptions& opts,
                const ProfilePair* warm) {
  return sweep(pot, s, opts, warm, 1.0);
}

GhatResult g_eta(const DamagePotential& pot, double s, double eta, const SolverOptions& opts) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::domain_error("eta must lie in (0,1)");
  return sweep(pot, s, opts, nullptr, 1.0 - eta);
}

DensityTable build_density_table(const DamagePotential& pot, const std::vector<double>& s_grid,
                                 const SolverOptions& opts) {
  if (s_grid.empty() || s_grid.front() != 0.0) {
    throw std::invalid_argument("s-grid must start at 0");
  }
  for (std::size_t i = 1; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > s_grid[i - 1])) throw std::invalid_argument("s-grid must be increasing");
  }
  DensityTable table;
  table.potential = pot.describe();
  table.tolerance = opts.table_tol;
  ProfilePair previous;
  bool have_previous = false;
  for (double s : s_grid) {
    const GhatResult r = ghat(pot, s, opts, have_previous ? &previous : nullptr);
    table.s.push_back(s);
    table.value.push_back(r.value);
    SampleDiagnostics d;
    d.solver = s == 0.0 ? "exact" : "cell";
    d.grid = r.profile.nodes();
    d.T = r.profile.T;
    d.iterations = r.iterations;
    d.residual = r.residual;
    d.converged = r.ok();
    table.diagnostics.push_back(d);
    if (s > 0.0) {
      previous = r.profile;
      have_previous = true;
    }
  }
  return table;
}

std::vector<double> standard_density_grid() {
  std::vector<double> grid = {0.0, 0.01, 0.02, 0.03, 0.04, 0.05, 0.07};
  for (int i = 1; i <= 30; ++i) grid.push_back(i / 10.0);
  for (int i = 1; i <= 20; ++i) grid.push_back(3.0 + i / 4.0);
  for (int i = 1; i <= 24; ++i) grid.push_back(8.0 + i / 2.0);
  return grid;
}

std::vector<PropertyCheck> table_property_suite(const DensityTable& table,
                                                const TableCheckOptions& opts) {
  const double ell = opts.ell;
  const double tol = table.tolerance;
  const auto& s = table.s;
  const auto& g = table.value;
  const std::size_t n = table.size();
  const bool finite_ell = std::isfinite(ell);
  auto cap = [&](double x) { return finite_ell ? std::min(1.0, ell * x) : (x > 0.0 ? 1.0 : 0.0); };
  auto tol_at = [&](double x) { return tol * std::max(cap(x), 1e-12); };
  std::vector<PropertyCheck> checks;

  {
    PropertyCheck c{"g(0)=0", n > 0 && s[0] == 0.0 && g[0] == 0.0, n > 0 ? 0.0 - std::abs(g[0]) : -1.0,
                    ""};
    checks.push_back(c);
  }
  {
    PropertyCheck c{"nondecreasing", true, kInf, ""};
    for (std::size_t i = 1; i < n; ++i) {
      const double slack = g[i] - g[i - 1] + 2.0 * tol_at(s[i]);
      if (slack < c.margin) c.margin = slack;
      if (slack < 0.0 && c.pass) {
        c.pass = false;
        c.detail = "drop at s=" + csv::num(s[i]);
      }
    }
    checks.push_back(c);
  }
  {
    PropertyCheck c{"subadditive", true, kInf, ""};
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double sum = s[i] + s[j];
        if (sum > table.max_s()) break;
        const double slack = g[i] + g[j] + 2.0 * tol_at(sum) - table.interpolate(sum);
        if (slack < c.margin) c.margin = slack;
        if (slack < 0.0 && c.pass) {
          c.pass = false;
          c.detail = "pair (" + csv::num(s[i]) + "," + csv::num(s[j]) + ")";
        }
      }
    }
    checks.push_back(c);
  }
  {
    PropertyCheck c{"0<=g<=1^ls", true, kInf, ""};
    for (std::size_t i = 0; i < n; ++i) {
      const double slack = std::min(g[i], cap(s[i]) + tol_at(s[i]) - g[i]);
      if (slack < c.margin) c.margin = slack;
      if (slack < 0.0 && c.pass) {
        c.pass = false;
        c.detail = "at s=" + csv::num(s[i]);
      }
    }
    checks.push_back(c);
  }
  if (finite_ell) {
    PropertyCheck c{"lipschitz<=ell", true, kInf, ""};
    for (std::size_t i = 1; i < n; ++i) {
      const double ratio = (g[i] - g[i - 1]) / (s[i] - s[i - 1]);
      const double slack = ell * (1.0 + tol) - ratio;
      if (slack < c.margin) c.margin = slack;
      if (slack < 0.0 && c.pass) {
        c.pass = false;
        c.detail = "ratio " + csv::num(ratio) + " at s=" + csv::num(s[i]);
      }
    }
    checks.push_back(c);
  }
  if (finite_ell) {
    PropertyCheck c{"slope_at_0", true, kInf, ""};
    int seen = 0;
    for (std::size_t i = 1; i < n && seen < 2; ++i, ++seen) {
      const double ratio = g[i] / (s[i] * ell);
      const double slack = opts.small_slope_tol - std::abs(ratio - 1.0);
      if (slack < c.margin) c.margin = slack;
      if (slack < 0.0 && c.pass) {
        c.pass = false;
        c.detail = "g/(ell s)=" + csv::num(ratio) + " at s=" + csv::num(s[i]);
      }
    }
    if (seen < 2) {
      c.pass = false;
      c.detail = "fewer than two positive samples";
    }
    checks.push_back(c);
  }
  if (n > 0 && s.back() * ell >= 20.0) {
    PropertyCheck c{"large_s_level", g.back() >= opts.large_s_level,
                    g.back() - opts.large_s_level, "g(" + csv::num(s.back()) + ")"};
    checks.push_back(c);
  }
  if (opts.remark_bound && finite_ell) {
    PropertyCheck c{"g<=ls-(ls)^2/4", true, kInf, ""};
    for (std::size_t i = 0; i < n; ++i) {
      const double x = ell * s[i];
      if (x >= 2.0) break;
      const double slack = x - 0.25 * x * x + tol_at(s[i]) - g[i];
      if (slack < c.margin) c.margin = slack;
      if (slack < 0.0 && c.pass) {
        c.pass = false;
        c.detail = "at s=" + csv::num(s[i]);
      }
    }
    checks.push_back(c);
  }
  return checks;
}

void write_profile_csv(std::ostream& out, const ProfilePair& profile, bool normalized) {
  csv::write_row(out, {"t", normalized ? "alpha_over_s" : "alpha", "beta"});
  const double s = profile.opening();
  const double h = profile.spacing();
  for (std::size_t i = 0; i < profile.nodes(); ++i) {
    double t = h * static_cast<double>(i);
    double a = profile.alpha[i];
    if (normalized) {
      t /= profile.T;
      a = s != 0.0 ? a / s : 0.0;
    }
    csv::write_row(out, {csv::num(t), csv::num(a), csv::num(profile.beta[i])});
  }
}

}  // namespace cohesive
