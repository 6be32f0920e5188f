#include "cohesive/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "cohesive/csv.hpp"
#include "cohesive/parallel.hpp"

namespace cohesive {

std::string to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::Dugdale:
      return "dugdale";
    case RegimeKind::PowerLaw:
      return "power_law";
    case RegimeKind::Griffith:
      return "griffith";
  }
  return "?";
}

RegimeKind regime_kind_from_string(const std::string& name) {
  if (name == "dugdale") return RegimeKind::Dugdale;
  if (name == "power_law") return RegimeKind::PowerLaw;
  if (name == "griffith") return RegimeKind::Griffith;
  throw std::invalid_argument("unknown regime '" + name + "' (dugdale, power_law, griffith)");
}

double RegimeSequence::predicted(double s) const {
  switch (kind) {
    case RegimeKind::Dugdale:
      return std::min(1.0, ell * s);
    case RegimeKind::Griffith:
      return s > 0.0 ? 1.0 : 0.0;
    case RegimeKind::PowerLaw:
      break;
  }
  throw std::logic_error("power-law limit is the theta_p table, not a closed form");
}

RegimeSequence build_sequence(const RegimeParams& params) {
  if (params.indices.empty()) throw std::invalid_argument("regime needs at least one index");
  for (std::size_t k = 1; k < params.indices.size(); ++k) {
    if (params.indices[k] <= params.indices[k - 1]) {
      throw std::invalid_argument("regime indices must be strictly increasing");
    }
  }
  if (!params.scalings.empty() && params.scalings.size() != params.indices.size()) {
    throw std::invalid_argument("one scaling per index required");
  }
  RegimeSequence seq;
  seq.kind = params.kind;
  seq.indices = params.indices;
  seq.ell = params.ell;
  seq.p = params.p;
  seq.kappa = params.kappa;
  for (std::size_t k = 0; k < params.indices.size(); ++k) {
    const int j = params.indices[k];
    double scale;
    if (!params.scalings.empty()) {
      scale = params.scalings[k];
    } else if (params.kind == RegimeKind::Dugdale) {
      scale = std::pow(params.a_base, j);
    } else if (params.kind == RegimeKind::PowerLaw) {
      scale = j;
    } else {
      scale = std::pow(params.ell_base, j);
    }
    if (k > 0 && !(scale > seq.scalings.back())) {
      throw std::invalid_argument("regime scalings must be strictly increasing");
    }
    seq.scalings.push_back(scale);
    switch (params.kind) {
      case RegimeKind::Dugdale:
        seq.members.push_back(DamagePotential::dugdale(DamagePotential::prototype(params.ell), scale));
        seq.eps.push_back(std::pow(scale, -params.eps_power));
        break;
      case RegimeKind::PowerLaw:
        seq.members.push_back(DamagePotential::power_law_truncated(params.p, params.kappa, scale));
        break;
      case RegimeKind::Griffith:
        seq.members.push_back(DamagePotential::griffith(scale));
        break;
    }
  }
  if (params.kind == RegimeKind::Dugdale) {
    for (std::size_t k = 1; k < seq.eps.size(); ++k) {
      const double prev = seq.scalings[k - 1] * std::sqrt(seq.eps[k - 1]);
      const double cur = seq.scalings[k] * std::sqrt(seq.eps[k]);
      if (!(cur < prev)) throw std::invalid_argument("a_j sqrt(eps_j) must decrease");
    }
  }
  for (std::size_t k = 1; k < seq.members.size(); ++k) {
    for (int i = 1; i < 1000; ++i) {
      const double s = i / 1000.0;
      if (seq.members[k - 1].product(s) > seq.members[k].product(s) * (1.0 + 1e-12)) {
        throw std::invalid_argument("regime members not pointwise nondecreasing at s=" +
                                    csv::num(s));
      }
    }
  }
  return seq;
}

RegimeReport regime_study(const RegimeSequence& seq, const std::vector<double>& s_grid,
                          const SolverOptions& opts, int workers) {
  RegimeReport report;
  report.kind = seq.kind;
  report.indices = seq.indices;
  if (seq.kind == RegimeKind::PowerLaw) {
    report.predicted = theta_p_table(seq.p, seq.kappa, s_grid, opts);
  } else {
    report.predicted.potential = "limit:" + to_string(seq.kind);
    report.predicted.tolerance = opts.table_tol;
    report.predicted.s = s_grid;
    for (double s : s_grid) report.predicted.value.push_back(seq.predicted(s));
  }
  std::vector<DensityTable> tables(seq.members.size());
  parallel_for(seq.members.size(), workers, [&](std::size_t k) {
    tables[k] = build_density_table(seq.members[k], s_grid, opts);
  });
  for (auto& table : tables) {
    double sup = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
      sup = std::max(sup, std::abs(table.value[i] - report.predicted.value[i]));
      if (!table.diagnostics[i].converged) ++report.solver_flags;
    }
    report.sup_gap.push_back(sup);
    report.tables.push_back(std::move(table));
  }
  for (std::size_t k = 1; k < report.tables.size(); ++k) {
    const auto& lo = report.tables[k - 1];
    const auto& hi = report.tables[k];
    for (std::size_t i = 0; i < lo.size(); ++i) {
      const double slack = 2.0 * opts.table_tol * std::max(lo.value[i], hi.value[i]);
      if (lo.value[i] > hi.value[i] + slack) ++report.monotonicity_violations;
    }
  }
  report.sup_gap_decreasing = true;
  for (std::size_t k = 1; k < report.sup_gap.size(); ++k) {
    report.sup_gap_decreasing = report.sup_gap_decreasing && report.sup_gap[k] < report.sup_gap[k - 1];
  }
  return report;
}

void write_regime_csv(std::ostream& out, const RegimeReport& report) {
  csv::write_row(out, {"j", "s", "g_j", "predicted", "gap"});
  for (std::size_t k = 0; k < report.tables.size(); ++k) {
    const auto& t = report.tables[k];
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double pred = report.predicted.value[i];
      csv::write_row(out, {std::to_string(report.indices[k]), csv::num(t.s[i]), csv::num(t.value[i]),
                           csv::num(pred), csv::num(std::abs(t.value[i] - pred))});
    }
  }
  out << "# regime," << to_string(report.kind) << '\n';
  for (std::size_t k = 0; k < report.sup_gap.size(); ++k) {
    out << "# sup_gap," << report.indices[k] << ',' << csv::num(report.sup_gap[k]) << '\n';
  }
  out << "# sup_gap_decreasing," << (report.sup_gap_decreasing ? "true" : "false") << '\n';
  out << "# monotonicity_violations," << report.monotonicity_violations << '\n';
  out << "# solver_flags," << report.solver_flags << '\n';
}

DensityTable theta_p_table(double p, double kappa, const std::vector<double>& s_grid,
                           const SolverOptions& opts) {
  return build_density_table(DamagePotential::power_law(p, kappa), s_grid, opts);
}

double fit_holder_constant(const DensityTable& theta, double p) {
  const double e = 2.0 / (p + 1.0);
  double c = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (theta.s[i] > 0.0) c = std::max(c, theta.value[i] / std::pow(theta.s[i], e));
  }
  return c;
}

double theta_small_s_lower(double p, double kappa) { return std::pow(kappa, 2.0 / (p + 1.0)); }

double theta_small_s_upper(double p, double kappa) {
  return theta_small_s_lower(p, kappa) * (p + 1.0) /
         (std::pow(2.0, 2.0 / (p + 1.0)) * std::pow(p - 1.0, (p - 1.0) / (p + 1.0)));
}

SmallSReport theta_p_small_s_check(double p, double kappa, const std::vector<double>& s_list,
                                   const SolverOptions& opts, double tol) {
  if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
  if (s_list.empty()) throw std::invalid_argument("empty s-list");
  for (std::size_t i = 0; i < s_list.size(); ++i) {
    if (!(s_list[i] > 0.0) || (i > 0 && !(s_list[i] < s_list[i - 1]))) {
      throw std::invalid_argument("s-list must be positive and decreasing");
    }
  }
  const auto psi = DamagePotential::power_law(p, kappa);
  SmallSReport rep;
  rep.lower = theta_small_s_lower(p, kappa);
  rep.upper = theta_small_s_upper(p, kappa);
  const double e = 2.0 / (p + 1.0);
  for (double s : s_list) {
    rep.s.push_back(s);
    rep.ratio.push_back(ghat(psi, s, opts).value / std::pow(s, e));
  }
  const double last = rep.ratio.back();
  rep.in_bounds = last >= rep.lower * (1.0 - tol) && last <= rep.upper * (1.0 + tol);
  rep.stabilizing = true;
  for (std::size_t i = 2; i < rep.ratio.size(); ++i) {
    rep.stabilizing = rep.stabilizing && std::abs(rep.ratio[i] - rep.ratio[i - 1]) <=
                                             std::abs(rep.ratio[i - 1] - rep.ratio[i - 2]);
  }
  return rep;
}

double dugdale_crossover(const DamagePotential& base, double a) {
  // a s = f(s) on (0,1) is equivalent to a s (1 - s) = (1 - s) f(s).
  auto gap = [&](double s) { return base.product(s) - a * s * (1.0 - s); };
  double lo = 1e-12;
  double hi = 1.0 - 1e-15;
  if (!(gap(lo) < 0.0) || !(gap(hi) > 0.0)) {
    throw std::domain_error("a s and f(s) do not cross in (0,1) for a=" + csv::num(a));
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace cohesive
