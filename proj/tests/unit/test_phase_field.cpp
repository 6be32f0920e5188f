#include <algorithm>
#include <cmath>
#include <random>

#include "cohesive/phase_field.hpp"
#include "cohesive/profile_solver.hpp"
#include "doctest.h"

using namespace cohesive;

namespace {

const auto kProto = DamagePotential::prototype(1.0);

PhaseFieldState linear_state(std::size_t cells, double eps, double eta, double t, double v) {
  auto st = PhaseFieldState::elastic(cells, eps, eta, t);
  std::fill(st.v.begin(), st.v.end(), v);
  return st;
}

double grad_u_squared(const PhaseFieldState& st) {
  double total = 0.0;
  for (std::size_t e = 0; e + 1 < st.u.size(); ++e) {
    const double d = (st.u[e + 1] - st.u[e]) / st.spacing();
    total += d * d * st.spacing();
  }
  return total;
}

}  // namespace

TEST_CASE("energy closed forms") {
  auto st = linear_state(100, 0.05, 0.0, 0.0, 1.0);
  CHECK(fk_energy(st, kProto) == 0.0);
  st = linear_state(100, 0.05, 0.0, 0.8, 1.0);
  CHECK(fk_energy(st, kProto) == doctest::Approx(0.64));
  const double delta = 0.3, eps = 0.05, eta = 1e-4, t = 0.8;
  st = linear_state(100, eps, eta, t, 1.0 - delta);
  st.v.front() = st.v.back() = 1.0 - delta;
  const double fk = eval_fk(kProto, eps, 1.0 - delta);
  CHECK(fk_energy(st, kProto) ==
        doctest::Approx(fk * fk * t * t + delta * delta / (4.0 * eps) + eta * t * t));
}

TEST_CASE("property: eta enters linearly with the elastic integral") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto st = PhaseFieldState::elastic(64, 0.1, 0.0, 0.5);
  for (std::size_t i = 1; i + 1 < st.v.size(); ++i) {
    st.v[i] = unit(rng);
    st.u[i] = 0.5 * unit(rng);
  }
  const double base = fk_energy(st, kProto);
  const double k = grad_u_squared(st);
  for (double eta : {1e-4, 1e-2, 0.3}) {
    auto other = st;
    other.eta = eta;
    CHECK(fk_energy(other, kProto) - base == doctest::Approx(eta * k).epsilon(1e-9));
  }
}

TEST_CASE("u-step") {
  SUBCASE("undamaged bar stretches linearly") {
    auto st = PhaseFieldState::elastic(50, 0.1, 1e-8, 0.7);
    std::fill(st.u.begin() + 1, st.u.end() - 1, 0.0);
    minimize_u_step(st, kProto);
    for (std::size_t i = 0; i < st.u.size(); ++i) {
      CHECK(st.u[i] == doctest::Approx(0.7 * static_cast<double>(i) / 50.0));
    }
  }
  SUBCASE("symmetric damage gives an antisymmetric displacement") {
    auto st = PhaseFieldState::midpoint_well(80, 0.05, 1e-6, 1.0);
    minimize_u_step(st, kProto);
    const std::size_t n = st.u.size();
    for (std::size_t i = 0; i < n; ++i) CHECK(st.u[i] + st.u[n - 1 - i] == doctest::Approx(1.0));
  }
  SUBCASE("a deep well concentrates the displacement") {
    const double eps = 0.01, t = 2.0;
    auto st = PhaseFieldState::elastic(2000, eps, default_eta(eps), t);
    // Optimal one-dimensional transition profile, fully damaged at the midpoint.
    for (std::size_t i = 0; i < st.v.size(); ++i) {
      const double d = std::abs(static_cast<double>(i) * st.spacing() - 0.5);
      st.v[i] = 1.0 - std::exp(-d / (2.0 * eps));
    }
    st.v.front() = st.v.back() = 1.0;
    auto candidate = st;
    for (std::size_t i = 0; i < st.u.size(); ++i) {
      const double x = static_cast<double>(i) * st.spacing();
      candidate.u[i] = t * std::clamp((x - 0.5 + eps) / (2.0 * eps), 0.0, 1.0);
    }
    minimize_u_step(st, kProto);
    CHECK(fk_energy(st, kProto) <= fk_energy(candidate, kProto));
    CHECK(fk_energy(st, kProto) < t * t);
    CHECK(st.u[1200] - st.u[800] > 0.99 * t);
  }
}

TEST_CASE("v-step") {
  SUBCASE("constant displacement keeps the bar intact") {
    auto st = PhaseFieldState::elastic(40, 0.1, 1e-6, 0.0);
    const auto r = minimize_v_step(st, kProto);
    CHECK(r.energy == 0.0);
    for (double v : st.v) CHECK(v == 1.0);
  }
  SUBCASE("property: never increases the energy and respects the box") {
    for (unsigned seed = 1; seed <= 20; ++seed) {
      std::mt19937 rng(seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      auto st = PhaseFieldState::elastic(60, 0.02 + 0.1 * unit(rng), 1e-6, 2.0 * unit(rng));
      for (std::size_t i = 1; i + 1 < st.v.size(); ++i) {
        st.v[i] = unit(rng);
        st.u[i] = st.t * unit(rng);
      }
      const double before = fk_energy(st, kProto);
      minimize_v_step(st, kProto);
      CHECK(fk_energy(st, kProto) <= before);
      for (double v : st.v) REQUIRE((v >= 0.0 && v <= 1.0));
    }
  }
}

TEST_CASE("alternating minimization") {
  const AlternationOptions opts;
  SUBCASE("zero stretch recovers the intact bar") {
    const auto r = minimize_bar(kProto, 0.05, 0.0, opts);
    CHECK(r.energy == 0.0);
    double dev = 0.0;
    for (double v : r.state.v) dev = std::max(dev, std::abs(1.0 - v));
    CHECK(dev <= 1e-8);
  }
  SUBCASE("property: energy decreases every round") {
    for (double t : {0.3, 1.0, 2.0}) {
      const auto r = alternate_minimize(PhaseFieldState::midpoint_well(1000, 0.03, default_eta(0.03), t),
                                        kProto, opts);
      for (std::size_t i = 1; i < r.history.size(); ++i) REQUIRE(r.history[i] <= r.history[i - 1]);
      for (double v : r.state.v) REQUIRE((v >= 0.0 && v <= 1.0));
      CHECK(r.energy <= t * t * (1.0 + default_eta(0.03)) * (1.0 + 1e-12));
    }
  }
  SUBCASE("large stretch beats both the elastic and the cracked candidates") {
    const auto r = minimize_bar(kProto, 1e-3, 2.0, opts);
    CHECK(r.converged);
    CHECK(r.energy < 1.0);
  }
}

TEST_CASE("fidelity energies") {
  auto st = PhaseFieldState::elastic(100, 0.05, 0.0, 0.0);
  FidelityData fid{std::vector<double>(101, 0.0), 2.0};
  CHECK(gk_energy(st, kProto, fid) == 0.0);
  for (std::size_t i = 0; i < st.u.size(); ++i) {
    st.u[i] = std::sin(0.1 * static_cast<double>(i));
    fid.zeta[i] = static_cast<double>(i % 3);
  }
  CHECK(gk_energy(st, kProto, fid) >= fk_energy(st, kProto));
  fid.q = 1.0;
  CHECK_THROWS(gk_energy(st, kProto, fid));
}

TEST_CASE("step datum approaches the one-jump limit") {
  // Limit oracle: u = a on the left, b on the right of the step, with cost
  // g(b - a) + a^2 / 2 + (2 - b)^2 / 2 minimized over a grid of (a, b).
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.1 * i);
  const auto g = build_density_table(kProto, grid, SolverOptions{});
  double oracle = 1e300;
  for (int i = 0; i <= 100; ++i) {
    for (int k = i; k <= 100; ++k) {
      const double a = 0.02 * i, b = 0.02 * k;
      oracle = std::min(oracle, g.interpolate(b - a) + 0.5 * a * a + 0.5 * (2.0 - b) * (2.0 - b));
    }
  }
  const double eps = 0.005;
  const std::size_t cells = mesh_cells(eps);
  FidelityData fid{std::vector<double>(cells + 1), 2.0};
  for (std::size_t i = 0; i <= cells; ++i) fid.zeta[i] = 2 * i >= cells ? 2.0 : 0.0;
  const auto r = minimize_with_fidelity(kProto, eps, fid, AlternationOptions{});
  CAPTURE(oracle);
  CHECK(r.energy == doctest::Approx(oracle).epsilon(0.1));
}

TEST_CASE("bar sweep") {
  std::vector<double> grid;
  for (int i = 0; i <= 25; ++i) grid.push_back(0.1 * i);
  const auto g = build_density_table(kProto, grid, SolverOptions{});
  const auto table = bar_sweep(kProto, {0.1, 0.03}, {0.0, 0.2, 1.5}, g, AlternationOptions{});
  REQUIRE(table.rows.size() == 6);
  for (const auto& row : table.rows) {
    if (row.t == 0.0) CHECK(row.energy == 0.0);
    CHECK(row.energy <= std::min(row.t * row.t, 1.0) + 1e-6);
    CHECK(row.flags.empty());
  }
  CHECK(table.rows[4].energy == doctest::Approx(0.04).epsilon(0.05));
  CHECK_THROWS(bar_sweep(kProto, {0.03, 0.1}, {0.5}, g, AlternationOptions{}));
  CHECK_THROWS(bar_sweep(kProto, {0.01}, {0.5}, g, AlternationOptions{}, 100));
}
