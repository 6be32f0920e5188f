#include <cmath>
#include <sstream>

#include "cohesive/regimes.hpp"
#include "doctest.h"

using namespace cohesive;

TEST_CASE("regime names") {
  for (auto k : {RegimeKind::Dugdale, RegimeKind::PowerLaw, RegimeKind::Griffith}) {
    CHECK(regime_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS(regime_kind_from_string("brittle"));
}

TEST_CASE("sequence construction") {
  RegimeParams p;
  SUBCASE("dugdale") {
    const auto seq = build_sequence(p);
    REQUIRE(seq.members.size() == 6);
    CHECK(seq.scalings[5] == 64.0);
    CHECK(seq.predicted(0.3) == doctest::Approx(0.3));
    CHECK(seq.predicted(3.0) == 1.0);
    for (std::size_t k = 1; k < seq.members.size(); ++k) {
      for (double s = 0.0; s < 1.0; s += 0.01) {
        REQUIRE(eval_f(seq.members[k - 1], s) <= eval_f(seq.members[k], s));
      }
    }
  }
  SUBCASE("power law") {
    p.kind = RegimeKind::PowerLaw;
    const auto seq = build_sequence(p);
    for (std::size_t k = 0; k < seq.members.size(); ++k) {
      CHECK(ell_of(seq.members[k]) == doctest::Approx(seq.indices[k]));
    }
    CHECK_THROWS_AS(seq.predicted(1.0), std::logic_error);
  }
  SUBCASE("griffith") {
    p.kind = RegimeKind::Griffith;
    const auto seq = build_sequence(p);
    CHECK(seq.scalings.back() == 4096.0);
    CHECK(eval_f(seq.members[2], 0.5) == doctest::Approx(64.0));
    CHECK(seq.predicted(0.0) == 0.0);
    CHECK(seq.predicted(1e-6) == 1.0);
  }
  SUBCASE("rejections") {
    p.indices = {2, 1};
    CHECK_THROWS(build_sequence(p));
    p.indices = {1, 2};
    p.eps_power = 1.0;
    CHECK_THROWS(build_sequence(p));
    p.eps_power = 4.0;
    p.scalings = {3.0, 2.0};
    CHECK_THROWS(build_sequence(p));
  }
}

TEST_CASE("dugdale crossover approaches ell") {
  const auto base = DamagePotential::prototype(1.5);
  double prev = 1e300;
  for (int j = 2; j <= 20; j += 3) {
    const double a = std::ldexp(1.0, j);
    const double sj = dugdale_crossover(base, a);
    CHECK(a * sj == doctest::Approx(eval_f(base, sj)).epsilon(1e-9));
    const double err = std::abs((1.0 - sj) * a - 1.5);
    CHECK(err <= prev + 1e-9);
    prev = err;
  }
  CHECK(prev < 1e-6);
  CHECK_THROWS(dugdale_crossover(base, 1.0));
}

TEST_CASE("small regime studies") {
  SolverOptions opts;
  const std::vector<double> grid = {0.0, 0.5, 2.0};
  SUBCASE("dugdale") {
    RegimeParams p;
    p.indices = {1, 2};
    const auto rep = regime_study(build_sequence(p), grid, opts);
    CHECK(rep.monotonicity_violations == 0);
    CHECK(rep.solver_flags == 0);
    CHECK(rep.sup_gap_decreasing);
    for (const auto& t : rep.tables) {
      for (double v : t.value) CHECK(v <= 1.0 + opts.table_tol);
    }
    std::ostringstream out;
    write_regime_csv(out, rep);
    CHECK(out.str().rfind("j,s,g_j,predicted,gap\n", 0) == 0);
    CHECK(out.str().find("# monotonicity_violations,0\n") != std::string::npos);
  }
  SUBCASE("griffith") {
    RegimeParams p;
    p.kind = RegimeKind::Griffith;
    p.indices = {1, 2};
    const auto rep = regime_study(build_sequence(p), grid, opts, 2);
    CHECK(rep.monotonicity_violations == 0);
    CHECK(rep.tables[1].value[2] > 0.85);
  }
}

TEST_CASE("theta_p bounds") {
  CHECK(theta_small_s_lower(3.0, 1.0) == doctest::Approx(1.0));
  CHECK(theta_small_s_upper(3.0, 1.0) == doctest::Approx(2.0));
  CHECK(theta_small_s_lower(3.0, 16.0) == doctest::Approx(4.0));
  CHECK(theta_small_s_upper(3.0, 16.0) == doctest::Approx(8.0));

  SolverOptions opts;
  const auto theta = theta_p_table(3.0, 1.0, {0.0, 0.01, 0.1, 0.5}, opts);
  CHECK(theta.value[0] == 0.0);
  for (std::size_t i = 1; i < theta.size(); ++i) {
    // Plateau at depth sigma = s^{1/4} below 1.
    const double sigma = std::pow(theta.s[i], 0.25);
    const double psi = (1.0 - sigma) / std::pow(sigma, 3.0);
    const double bound = sigma * psi * theta.s[i] + sigma * sigma;
    CHECK(theta.value[i] <= bound + opts.table_tol);
    CHECK(theta.value[i] <= 1.0 + opts.table_tol);
  }
  CHECK(fit_holder_constant(theta, 3.0) >= 1.0 * (1.0 - 0.1));
}

TEST_CASE("small-s ratio check") {
  const auto rep = theta_p_small_s_check(3.0, 1.0, {0.1, 0.01, 0.001}, SolverOptions{});
  CHECK(rep.in_bounds);
  CHECK(rep.ratio.size() == 3);
  CHECK_THROWS(theta_p_small_s_check(3.0, 1.0, {0.01, 0.1}, SolverOptions{}));
  CHECK_THROWS(theta_p_small_s_check(1.0, 1.0, {0.1}, SolverOptions{}));
}
