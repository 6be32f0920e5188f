#include <cmath>
#include <limits>
#include <vector>

#include "cohesive/potentials.hpp"
#include "doctest.h"

using namespace cohesive;

namespace {

std::vector<double> unit_samples(int n) {
  std::vector<double> s;
  for (int i = 0; i < n; ++i) s.push_back(static_cast<double>(i) / n);
  return s;
}

std::vector<DamagePotential> all_families() {
  return {DamagePotential::prototype(1.0),
          DamagePotential::prototype(2.5),
          DamagePotential::dugdale(DamagePotential::prototype(1.0), 4.0),
          DamagePotential::power_law(3.0, 1.0),
          DamagePotential::power_law_truncated(3.0, 1.0, 5.0),
          DamagePotential::griffith(16.0),
          DamagePotential::tabulated({0.0, 0.25, 0.5, 0.75, 0.9}, {0.0, 0.3, 1.0, 3.0, 9.0})};
}

}  // namespace

TEST_CASE("prototype values") {
  const auto pot = DamagePotential::prototype(1.0);
  CHECK(eval_f(pot, 0.5) == doctest::Approx(1.0));
  CHECK(eval_f(pot, 0.0) == 0.0);
  CHECK(one_minus_s_times_f(pot, 0.0) == 0.0);
  CHECK(one_minus_s_times_f(DamagePotential::prototype(2.0), 1.0) == doctest::Approx(2.0));
  CHECK(ell_of(DamagePotential::prototype(3.5)) == 3.5);
  CHECK_THROWS_AS(eval_f(pot, 1.0), std::domain_error);
  CHECK_THROWS_AS(eval_f(pot, -0.1), std::domain_error);
}

TEST_CASE("dugdale modification takes the max with a linear part") {
  const auto pot = DamagePotential::dugdale(DamagePotential::prototype(1.0), 4.0);
  CHECK(eval_f(pot, 0.5) == doctest::Approx(2.0));
  CHECK(eval_f(pot, 0.9) == doctest::Approx(9.0));
  CHECK(ell_of(pot) == doctest::Approx(1.0));
}

TEST_CASE("power law product diverges at the end") {
  const auto pot = DamagePotential::power_law(3.0, 1.0);
  CHECK(std::isinf(one_minus_s_times_f(pot, 1.0)));
  CHECK(eval_f(pot, 0.5) == doctest::Approx(0.5 / 0.125));
}

TEST_CASE("truncated power law has slope j at the end") {
  const auto pot = DamagePotential::power_law_truncated(3.0, 1.0, 7.0);
  // Independent limit: (1 - s) f(s) on a grid approaching 1.
  double last = 0.0;
  for (double d = 1e-2; d > 1e-7; d *= 0.1) last = d * eval_f(pot, 1.0 - d);
  CHECK(last == doctest::Approx(7.0).epsilon(1e-5));
  CHECK(ell_of(pot) == 7.0);
  CHECK(ell_of(DamagePotential::griffith(100.0)) == 100.0);
}

TEST_CASE("truncation f_eps") {
  const auto pot = DamagePotential::prototype(1.0);
  CHECK(eval_fk(pot, 0.01, 0.5) == doctest::Approx(0.1));
  CHECK(eval_fk(pot, 0.01, 20.0 / 21.0) == 1.0);
  for (const auto& p : all_families()) {
    CHECK(eval_fk(p, 0.37, 1.0) == 1.0);
    CHECK(eval_fk(p, 0.37, 0.0) == 0.0);
  }
}

TEST_CASE("breakpoint of the truncation") {
  const auto pot = DamagePotential::prototype(1.0);
  for (double eps : {0.04, 0.01, 1e-4}) {
    CHECK(fk_breakpoint(pot, eps) == doctest::Approx(1.0 / (1.0 + std::sqrt(eps))).epsilon(1e-10));
  }
}

TEST_CASE("property: every family is nondecreasing and vanishes only at 0") {
  for (const auto& pot : all_families()) {
    CAPTURE(pot.describe());
    const auto s = unit_samples(997);
    for (std::size_t i = 1; i < s.size(); ++i) {
      REQUIRE(eval_f(pot, s[i - 1]) <= eval_f(pot, s[i]));
      REQUIRE(eval_f(pot, s[i]) > 0.0);
    }
    CHECK(eval_f(pot, 0.0) == 0.0);
  }
}

TEST_CASE("property: truncation order") {
  for (const auto& pot : all_families()) {
    for (double eps : {0.5, 0.04, 1e-3}) {
      for (double s : unit_samples(211)) {
        const double fk = eval_fk(pot, eps, s);
        REQUIRE(fk <= 1.0);
        REQUIRE(fk <= std::sqrt(eps) * eval_f(pot, s) * (1.0 + 1e-15));
      }
    }
  }
}

TEST_CASE("property: dugdale family grows with a") {
  const auto base = DamagePotential::prototype(1.0);
  for (int j = 1; j < 8; ++j) {
    const auto lo = DamagePotential::dugdale(base, std::ldexp(1.0, j));
    const auto hi = DamagePotential::dugdale(base, std::ldexp(1.0, j + 1));
    for (double s : unit_samples(301)) REQUIRE(eval_f(lo, s) <= eval_f(hi, s));
  }
}

TEST_CASE("property: (1-s) f(s) approaches ell") {
  for (const auto& pot : all_families()) {
    if (pot.family() == Family::PowerLaw) continue;
    double prev = std::numeric_limits<double>::infinity();
    for (double d = 1e-1; d > 1e-9; d *= 0.1) {
      const double err = std::abs(one_minus_s_times_f(pot, 1.0 - d) - pot.ell());
      CHECK(err <= prev + 1e-12);
      prev = err;
    }
    CHECK(prev < 1e-6 * std::max(1.0, pot.ell()));
  }
}

TEST_CASE("tabulated potentials reject bad samples") {
  CHECK_THROWS(DamagePotential::tabulated({0.0, 0.5}, {0.0, 1.0}));
  CHECK_THROWS(DamagePotential::tabulated({0.0, 0.5, 0.8}, {0.0, 2.0, 1.0}));
  CHECK_THROWS(DamagePotential::tabulated({0.1, 0.5, 0.8}, {0.0, 1.0, 2.0}));
}

TEST_CASE("pointwise limits of the scaled sequences") {
  using SK = SequenceKind;
  CHECK(classify_fkk_pointwise(SK::ScaledPrototype, Coupling::Vanishing).limit ==
        PointwiseLimit::IndicatorOfOne);
  const auto fin = classify_fkk_pointwise(SK::ScaledPrototype, Coupling::Finite, 2.0);
  CHECK(fin.limit == PointwiseLimit::CappedScaled);
  CHECK(fin.limit_value(0.2) == doctest::Approx(0.5));
  CHECK(fin.limit_value(0.5) == 1.0);
  CHECK(classify_fkk_pointwise(SK::ScaledPrototype, Coupling::Diverging).limit ==
        PointwiseLimit::IndicatorPositive);
  CHECK(classify_fkk_pointwise(SK::DugdaleMax, Coupling::InverseRoot).limit ==
        PointwiseLimit::Identity);
  CHECK_THROWS_AS(classify_fkk_pointwise(SK::DugdaleMax, Coupling::Finite), UnsupportedRegime);
}

TEST_CASE("finite-k samples approach the classified limit") {
  struct Case {
    SequenceKind kind;
    Coupling coupling;
  };
  for (const auto& c : {Case{SequenceKind::ScaledPrototype, Coupling::Vanishing},
                        Case{SequenceKind::ScaledPrototype, Coupling::Finite},
                        Case{SequenceKind::ScaledPrototype, Coupling::Diverging},
                        Case{SequenceKind::DugdaleMax, Coupling::InverseRoot}}) {
    const auto cls = classify_fkk_pointwise(c.kind, c.coupling);
    for (double s : {0.5, 0.9}) {
      double prev = std::numeric_limits<double>::infinity();
      for (int k = 1; k <= 20; ++k) {
        const double err = std::abs(eval_fkk(c.kind, c.coupling, k, s) - cls.limit_value(s));
        CHECK(err <= prev + 1e-12);
        prev = err;
      }
      CHECK(prev < 0.05);
    }
  }
}
