#include <algorithm>
#include <cmath>
#include <sstream>

#include "cohesive/limit_densities.hpp"
#include "doctest.h"

using namespace cohesive;

namespace {

// Convex envelope of t^2 ^ ell t by brute force over chords: a on a fine
// grid of [0, t], b on a geometric grid reaching far to the right.
double envelope_oracle(double ell, double t) {
  auto raw = [ell](double x) { return std::min(x * x, ell * x); };
  double best = raw(t);
  const int n = 2000;
  for (int i = 0; i <= n; ++i) {
    const double a = t * i / n;
    for (double b = t * 1.001 + 1e-9; b < 1e9; b *= 1.05) {
      const double th = (b - t) / (b - a);
      best = std::min(best, th * raw(a) + (1.0 - th) * raw(b));
    }
  }
  return best;
}

DensityTable capped_table() {
  DensityTable t;
  for (int i = 0; i <= 40; ++i) {
    const double s = 0.1 * i;
    t.s.push_back(s);
    t.value.push_back(std::min(1.0, s) * (1.0 - 0.1 * std::min(1.0, s)));
  }
  return t;
}

}  // namespace

TEST_CASE("h on both branches") {
  CHECK(eval_h(1.0, 0.3) == doctest::Approx(0.09));
  CHECK(eval_h(1.0, 0.5) == doctest::Approx(0.25));
  CHECK(eval_h(1.0, 2.0) == doctest::Approx(1.75));
  CHECK(eval_h(1.0, 0.0) == 0.0);
  CHECK_THROWS(eval_h(0.0, 1.0));
  CHECK_THROWS(eval_h(1.0, -1.0));
}

TEST_CASE("h matches a brute-force convex envelope") {
  for (double ell : {0.5, 1.0, 3.0}) {
    for (double t : {0.05, 0.2, 0.7, 1.3, 2.9}) {
      CAPTURE(ell);
      CAPTURE(t);
      CHECK(eval_h(ell, t) == doctest::Approx(envelope_oracle(ell, t)).epsilon(1e-3));
    }
  }
}

TEST_CASE("property: h convexity and envelope") {
  for (double ell : {0.5, 1.0, 2.0}) {
    for (double t1 = 0.0; t1 <= 3.0; t1 += 0.173) {
      for (double t2 = t1; t2 <= 3.0; t2 += 0.211) {
        for (double th = 0.0; th <= 1.0; th += 0.125) {
          const double lhs = eval_h(ell, th * t1 + (1.0 - th) * t2);
          REQUIRE(lhs <= th * eval_h(ell, t1) + (1.0 - th) * eval_h(ell, t2) + 1e-12);
        }
      }
      REQUIRE(eval_h(ell, t1) <= std::min(t1 * t1, ell * t1) + 1e-12);
      if (t1 <= ell / 2) REQUIRE(eval_h(ell, t1) == doctest::Approx(t1 * t1));
    }
  }
}

TEST_CASE("density table interpolation and validation") {
  auto t = capped_table();
  CHECK_NOTHROW(t.validate());
  CHECK(t.interpolate(0.15) == doctest::Approx(0.5 * (t.value[1] + t.value[2])));
  CHECK_THROWS_AS(t.interpolate(4.5), std::out_of_range);
  t.value[0] = 0.1;
  CHECK_THROWS(t.validate());
}

TEST_CASE("density table CSV round trip") {
  const auto t = capped_table();
  std::stringstream buf;
  write_density_csv(buf, t);
  CHECK(buf.str().rfind("s,value,solver,grid,T,iterations,residual\n", 0) == 0);
  const auto back = read_density_csv(buf);
  REQUIRE(back.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(back.value[i] == doctest::Approx(t.value[i]).epsilon(1e-11));
}

TEST_CASE("one-dimensional candidates") {
  const auto g = capped_table();
  const auto affine = Candidate1D::affine(0.0, 1.0, 0.7, 0.0, 11);
  CHECK(eval_phi_1d(affine, 1.0, g) == doctest::Approx(eval_h(1.0, 0.7)));
  const auto step = Candidate1D::piecewise_constant(0.0, 1.0, {0.5}, {0.0, 1.3});
  CHECK(eval_phi_1d(step, 1.0, g) == doctest::Approx(g.interpolate(1.3)));

  Candidate1D mixed;
  mixed.breakpoints = {0.5};
  mixed.pieces = {{0.0, 0.1}, {0.6, 0.7}};
  CHECK(eval_phi_1d(mixed, 1.0, g) == doctest::Approx(0.04 + g.interpolate(0.5)));
}

TEST_CASE("property: phi is additive over subintervals") {
  const auto g = capped_table();
  Candidate1D whole;
  whole.lo = 0.0;
  whole.hi = 2.0;
  whole.breakpoints = {0.5, 1.5};
  whole.pieces = {{0.0, 0.2, 0.3}, {0.9, 1.0, 1.4}, {1.4, 2.0}};
  Candidate1D left;
  left.lo = 0.0;
  left.hi = 1.0;
  left.breakpoints = {0.5};
  left.pieces = {{0.0, 0.2, 0.3}, {0.9, 1.0}};
  Candidate1D right;
  right.lo = 1.0;
  right.hi = 2.0;
  right.breakpoints = {1.5};
  right.pieces = {{1.0, 1.4}, {1.4, 2.0}};
  CHECK(eval_phi_1d(whole, 1.0, g) ==
        doctest::Approx(eval_phi_1d(left, 1.0, g) + eval_phi_1d(right, 1.0, g)));
}

TEST_CASE("limit bar energy") {
  const auto g = capped_table();
  const auto zero = limit_bar_energy(g, 1.0, 0.0);
  CHECK(zero.energy == 0.0);
  CHECK(zero.jump == 0.0);
  const auto small = limit_bar_energy(g, 1.0, 0.25);
  CHECK(small.energy == doctest::Approx(0.0625));
  CHECK(small.jump == 0.0);
  double prev = 0.0;
  for (double t = 0.0; t <= 4.0; t += 0.05) {
    const auto e = limit_bar_energy(g, 1.0, t);
    REQUIRE(e.energy >= prev - 1e-12);
    REQUIRE(e.energy <= std::min(eval_h(1.0, t), g.interpolate(t)) + 1e-12);
    REQUIRE(e.energy <= 1.0);
    prev = e.energy;
  }
  CHECK_THROWS_AS(limit_bar_energy(g, 1.0, 5.0), std::out_of_range);
}
