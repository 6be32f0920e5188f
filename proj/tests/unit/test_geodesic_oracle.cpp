#include <algorithm>
#include <cmath>
#include <sstream>

#include "cohesive/geodesic_oracle.hpp"
#include "cohesive/profile_solver.hpp"
#include "doctest.h"

using namespace cohesive;

namespace {

const auto kProto = DamagePotential::prototype(1.0);

// Down to level lam, across, and back up.
double trapezoid_oracle(double s, double lam) {
  return (1.0 - lam) * (1.0 - lam) + (1.0 - lam) * (lam / (1.0 - lam)) * s;
}

std::vector<PlanePoint> trapezoid(double s, double lam) {
  return {{0.0, 1.0}, {0.0, lam}, {s, lam}, {s, 1.0}};
}

GeodesicGrid small_grid(int stencil = 16) {
  GeodesicGrid g;
  g.n_alpha = 65;
  g.n_beta = 65;
  g.stencil = stencil;
  return g;
}

}  // namespace

TEST_CASE("segment lengths of simple paths") {
  const auto ell2 = DamagePotential::prototype(2.0);
  CHECK(segment_length({0.0, 1.0}, {0.7, 1.0}, ell2) == doctest::Approx(2.0 * 0.7));
  CHECK(segment_length({0.0, 1.0}, {0.0, 0.0}, kProto) == doctest::Approx(0.5));
  CHECK(segment_length({0.0, 0.0}, {5.0, 0.0}, kProto) == 0.0);
  const std::vector<PlanePoint> box = {{0.0, 1.0}, {0.0, 0.0}, {3.0, 0.0}, {3.0, 1.0}};
  CHECK(metric_length(box, kProto) == doctest::Approx(1.0));
  for (double lam : {0.1, 0.4, 0.8}) {
    CHECK(metric_length(trapezoid(0.6, lam), kProto) == doctest::Approx(trapezoid_oracle(0.6, lam)));
  }
}

TEST_CASE("oblique segments agree with fine subdivision") {
  const PlanePoint a{0.1, 0.9}, b{0.8, 0.2};
  double fine = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const double t0 = static_cast<double>(i) / n, t1 = static_cast<double>(i + 1) / n;
    const double tm = 0.5 * (t0 + t1);
    const double beta = a[1] + tm * (b[1] - a[1]);
    const double da = (b[0] - a[0]) / n, db = (b[1] - a[1]) / n;
    const double f = beta / (1.0 - beta);
    fine += (1.0 - beta) * std::sqrt(f * f * da * da + db * db);
  }
  CHECK(segment_length(a, b, kProto) == doctest::Approx(fine).epsilon(1e-6));
}

TEST_CASE("geodesic values") {
  CHECK(geodesic_g(kProto, 0.0, small_grid()).value == 0.0);
  const auto one = geodesic_g(kProto, 1.0, small_grid());
  CHECK(one.value <= 0.75 + 5e-3);
  CHECK(one.value <= one.grid_value);
  CHECK(one.path.front() == PlanePoint{0.0, 1.0});
  CHECK(one.path.back() == PlanePoint{1.0, 1.0});
  const double small = geodesic_g(kProto, 0.01, small_grid()).value;
  CHECK(small / 0.01 >= 0.9);
  CHECK(small / 0.01 <= 1.1);
}

TEST_CASE("property: bounded by trapezoids and by the two limit paths") {
  for (double s : {0.2, 0.9, 2.5}) {
    const auto grid = small_grid();
    const auto r = geodesic_g(kProto, s, grid);
    double best_trap = 1e300;
    for (std::size_t j = 0; j + 1 < grid.n_beta; ++j) {
      best_trap = std::min(best_trap, trapezoid_oracle(s, static_cast<double>(j) / (grid.n_beta - 1)));
    }
    CHECK(r.value >= 0.0);
    CHECK(r.grid_value <= best_trap + 1e-12);
    CHECK(r.value <= std::min(1.0, s) + 1e-9);
  }
}

TEST_CASE("property: the richer stencil never loses") {
  for (double s : {0.3, 1.0, 2.0}) {
    const double g8 = geodesic_g(kProto, s, small_grid(8), false).grid_value;
    const double g16 = geodesic_g(kProto, s, small_grid(16), false).grid_value;
    CHECK(g16 <= g8 + 1e-12);
  }
}

TEST_CASE("property: mirrored paths have the same length") {
  const double s = 0.8;
  const auto r = geodesic_g(kProto, s, small_grid());
  std::vector<PlanePoint> mirrored;
  for (auto it = r.path.rbegin(); it != r.path.rend(); ++it) mirrored.push_back({s - (*it)[0], (*it)[1]});
  CHECK(metric_length(mirrored, kProto) == doctest::Approx(r.value).epsilon(1e-10));
  std::vector<PlanePoint> reversed(r.path.rbegin(), r.path.rend());
  CHECK(metric_length(reversed, kProto) == doctest::Approx(r.value).epsilon(1e-10));
}

TEST_CASE("polishing shortens a coarse path") {
  auto path = trapezoid(1.0, 0.5);
  const double before = metric_length(path, kProto);
  const double after = polish_path(path, kProto, 1.0);
  CHECK(after <= before);
  CHECK(after == doctest::Approx(metric_length(path, kProto)));
}

TEST_CASE("refinement stabilizes and agrees with the cell solver") {
  const auto r = refine_until_stable(kProto, 1.0, small_grid(), 2.0, 5e-3, 4);
  CHECK(r.stable);
  CHECK(r.values.size() == r.grids.size());
  for (std::size_t i = 1; i < r.values.size(); ++i) CHECK(r.values[i] <= r.values[i - 1] * (1.0 + 5e-3));
  const double g = ghat(kProto, 1.0, SolverOptions{}).value;
  CHECK(std::abs(g - r.value) / r.value <= 0.02);
  CHECK(refine_until_stable(kProto, 0.0, small_grid()).value == 0.0);
}

TEST_CASE("grid validation and path output") {
  GeodesicGrid g;
  g.stencil = 12;
  CHECK_THROWS(g.validate());
  g = GeodesicGrid{};
  g.n_beta = 1;
  CHECK_THROWS(g.validate());
  const auto r = small_grid().refined(2.0);
  CHECK(r.n_alpha == 129);
  std::ostringstream out;
  write_path_csv(out, trapezoid(1.0, 0.5));
  CHECK(out.str() == "alpha,beta\n0,1\n0,0.5\n1,0.5\n1,1\n");
}
