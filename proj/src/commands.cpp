#include "cohesive/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "cohesive/csv.hpp"
#include "cohesive/geodesic_oracle.hpp"
#include "cohesive/parallel.hpp"
#include "cohesive/phase_field.hpp"
#include "cohesive/regimes.hpp"
#include "cohesive/svg.hpp"

namespace cohesive {

namespace {

std::ofstream open_output(const RunOptions& run, const std::string& name) {
  std::filesystem::create_directories(run.out_dir);
  const auto path = run.out_dir / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void say(const RunOptions& run, const std::string& line) {
  if (run.log != nullptr) *run.log << line << '\n';
}

void emit_svg(const RunOptions& run, const std::string& name, const std::string& title,
              const std::string& x_label, const std::string& y_label,
              const std::vector<SvgSeries>& series) {
  if (!run.svg) return;
  auto out = open_output(run, name);
  write_svg_chart(out, title, x_label, y_label, series);
}

std::vector<double> density_grid(const ExperimentConfig& cfg) {
  return cfg.reals("grid", "s", standard_density_grid());
}

constexpr double kCornerTol = 1e-9;

const std::vector<double> kRegimeGrid = {0.0, 0.05, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0};

}  // namespace

DamagePotential potential_from_config(const ExperimentConfig& cfg) {
  const std::string family = cfg.text("potential", "family", "prototype");
  const double ell = cfg.real("potential", "ell", 1.0);
  if (family == "prototype") return DamagePotential::prototype(ell);
  if (family == "dugdale") {
    return DamagePotential::dugdale(DamagePotential::prototype(ell), cfg.real("potential", "a", 2.0));
  }
  if (family == "power_law") {
    return DamagePotential::power_law(cfg.real("potential", "p", 3.0), cfg.real("potential", "kappa", 1.0));
  }
  if (family == "power_law_truncated") {
    return DamagePotential::power_law_truncated(cfg.real("potential", "p", 3.0),
                                                cfg.real("potential", "kappa", 1.0),
                                                cfg.real("potential", "j", 1.0));
  }
  if (family == "griffith") return DamagePotential::griffith(ell);
  if (family == "tabulated") {
    return DamagePotential::tabulated(cfg.reals("potential", "tab_s", {}),
                                      cfg.reals("potential", "tab_f", {}));
  }
  throw std::invalid_argument("unknown potential family '" + family + "'");
}

SolverOptions solver_from_config(const ExperimentConfig& cfg, const RunOptions& run) {
  SolverOptions o;
  o.max_iterations = static_cast<int>(cfg.integer("solver", "max_iterations", o.max_iterations));
  o.energy_tol = cfg.real("solver", "energy_tol", o.energy_tol);
  o.initial_T = cfg.real("solver", "initial_T", o.initial_T);
  o.T_growth = cfg.real("solver", "T_growth", o.T_growth);
  o.T_stop_tol = cfg.real("solver", "T_stop_tol", o.T_stop_tol);
  o.max_T_steps = static_cast<int>(cfg.integer("solver", "max_T_steps", o.max_T_steps));
  o.nodes_per_unit = cfg.real("solver", "nodes_per_unit", o.nodes_per_unit);
  o.beta_clamp = cfg.real("solver", "beta_clamp", o.beta_clamp);
  o.max_nodes = static_cast<std::size_t>(
      cfg.integer("solver", "max_nodes", static_cast<long>(o.max_nodes)));
  const std::string init = cfg.text("solver", "init", "plateau");
  if (init == "plateau") {
    o.init = InitStrategy::Plateau;
  } else if (init == "dip") {
    o.init = InitStrategy::Dip;
  } else {
    throw std::invalid_argument("solver.init must be plateau or dip");
  }
  o.table_tol = cfg.real("solver", "table_tol", o.table_tol);
  if (run.tol > 0.0) o.table_tol = run.tol;
  o.validate();
  return o;
}

int cmd_density(const ExperimentConfig& cfg, const RunOptions& run) {
  const auto pot = potential_from_config(cfg);
  const auto opts = solver_from_config(cfg, run);
  const DensityTable table = build_density_table(pot, density_grid(cfg), opts);
  {
    auto out = open_output(run, "density.csv");
    write_density_csv(out, table);
  }
  TableCheckOptions checks;
  checks.ell = pot.ell();
  checks.small_slope_tol = cfg.real("checks", "small_slope_tol", checks.small_slope_tol);
  checks.large_s_level = cfg.real("checks", "large_s_level", checks.large_s_level);
  checks.remark_bound = cfg.boolean("checks", "remark_bound", pot.family() == Family::Prototype);
  const auto results = table_property_suite(table, checks);
  int failures = 0;
  {
    auto out = open_output(run, "density_checks.csv");
    csv::write_row(out, {"check", "pass", "margin", "detail"});
    for (const auto& c : results) {
      csv::write_row(out, {c.name, c.pass ? "true" : "false", csv::num(c.margin), c.detail});
      failures += c.pass ? 0 : 1;
    }
  }
  int unconverged = 0;
  for (const auto& d : table.diagnostics) unconverged += d.converged ? 0 : 1;
  SvgSeries g{"g", table.s, table.value};
  SvgSeries cap{"1 ^ ell s", table.s, {}};
  for (double s : table.s) cap.y.push_back(std::isfinite(pot.ell()) ? std::min(1.0, pot.ell() * s) : 1.0);
  emit_svg(run, "density.svg", "surface density " + pot.describe(), "s", "g(s)", {g, cap});
  say(run, "density: " + std::to_string(table.size()) + " samples, " + std::to_string(failures) +
               " failed checks, " + std::to_string(unconverged) + " unconverged samples");
  return failures == 0 && unconverged == 0 ? kOk : kViolation;
}

int cmd_profiles(const ExperimentConfig& cfg, const RunOptions& run) {
  const auto pot = potential_from_config(cfg);
  const auto opts = solver_from_config(cfg, run);
  const auto s_list = cfg.reals("profiles", "s", {0.1, 0.3, 0.5, 1.0, 1.5});
  const bool use_oracle = cfg.boolean("profiles", "oracle", true);
  GeodesicGrid grid;
  grid.n_alpha = static_cast<std::size_t>(cfg.integer("oracle", "n_alpha", 512));
  grid.n_beta = static_cast<std::size_t>(cfg.integer("oracle", "n_beta", 512));
  grid.stencil = static_cast<int>(cfg.integer("oracle", "stencil", 16));
  const bool polish = cfg.boolean("oracle", "polish", true);

  struct Row {
    std::string source;
    double value = 0.0;
    double solver_value = 0.0;
    double oracle_value = NAN;
    bool flagged = false;
    std::vector<std::array<double, 3>> points;  // t, alpha/s, beta
  };
  std::vector<Row> rows(s_list.size());
  parallel_for(s_list.size(), run.workers, [&](std::size_t k) {
    const double s = s_list[k];
    Row& row = rows[k];
    const GhatResult r = ghat(pot, s, opts);
    row.solver_value = r.value;
    row.flagged = !r.ok();
    row.source = "solver";
    row.value = r.value;
    if (s == 0.0) {
      row.points.push_back({0.0, 0.0, 1.0});
      return;
    }
    const auto& p = r.profile;
    for (std::size_t i = 0; i < p.nodes(); ++i) {
      row.points.push_back({static_cast<double>(i) / static_cast<double>(p.nodes() - 1),
                            p.alpha[i] / s, p.beta[i]});
    }
    if (!use_oracle) return;
    const GeodesicResult g = geodesic_g(pot, s, grid, polish);
    row.oracle_value = g.value;
    if (g.value < r.value) {
      row.source = "oracle";
      row.value = g.value;
      row.points.clear();
      std::vector<double> arc = {0.0};
      for (std::size_t i = 1; i < g.path.size(); ++i) {
        arc.push_back(arc.back() + std::hypot((g.path[i][0] - g.path[i - 1][0]) / s,
                                              g.path[i][1] - g.path[i - 1][1]));
      }
      for (std::size_t i = 0; i < g.path.size(); ++i) {
        row.points.push_back({arc.back() > 0.0 ? arc[i] / arc.back() : 0.0, g.path[i][0] / s,
                              g.path[i][1]});
      }
    }
  });

  int violations = 0;
  int uncontained = 0;
  auto report = open_output(run, "profiles.csv");
  csv::write_row(report, {"s", "source", "value", "solver_value", "oracle_value", "interior_points",
                          "min_beta", "max_beta", "contained"});
  std::vector<SvgSeries> series;
  for (std::size_t k = 0; k < s_list.size(); ++k) {
    const double s = s_list[k];
    const Row& row = rows[k];
    {
      auto out = open_output(run, "profile_s" + csv::num(s) + ".csv");
      csv::write_row(out, {"t", "alpha_over_s", "beta"});
      for (const auto& pt : row.points) {
        csv::write_row(out, {csv::num(pt[0]), csv::num(pt[1]), csv::num(pt[2])});
      }
    }
    // Interior: everything strictly between the two endpoint corners.
    const auto at_corner = [](const std::array<double, 3>& pt, double a) {
      return std::abs(pt[1] - a) <= kCornerTol && pt[2] >= 1.0 - kCornerTol;
    };
    std::size_t first = 0;
    std::size_t last = row.points.size();
    while (first < last && at_corner(row.points[first], 0.0)) ++first;
    while (last > first && at_corner(row.points[last - 1], 1.0)) --last;
    double lo = 1.0;
    double hi = 0.0;
    for (std::size_t i = first; i < last; ++i) {
      lo = std::min(lo, row.points[i][2]);
      hi = std::max(hi, row.points[i][2]);
    }
    const std::size_t interior = last - first;
    const bool contained = interior == 0 || (lo > 0.0 && hi < 1.0);
    if (!contained) ++uncontained;
    if (row.flagged) ++violations;
    csv::write_row(report, {csv::num(s), row.source, csv::num(row.value), csv::num(row.solver_value),
                            std::isnan(row.oracle_value) ? "" : csv::num(row.oracle_value),
                            std::to_string(interior), interior ? csv::num(lo) : "",
                            interior ? csv::num(hi) : "", contained ? "true" : "false"});
    SvgSeries ser{"s=" + csv::num(s), {}, {}};
    for (const auto& pt : row.points) {
      ser.x.push_back(pt[1]);
      ser.y.push_back(pt[2]);
    }
    series.push_back(std::move(ser));
  }
  emit_svg(run, "profiles.svg", "optimal profiles", "alpha / s", "beta", series);
  say(run, "profiles: " + std::to_string(s_list.size()) + " openings, " +
               std::to_string(violations) + " flagged, " + std::to_string(uncontained) +
               " leaving the open rectangle");
  return violations == 0 ? kOk : kViolation;
}

int cmd_fk_plot(const ExperimentConfig& cfg, const RunOptions& run) {
  const auto pot = potential_from_config(cfg);
  const double eps = cfg.real("fk", "eps", 0.04);
  const long points = cfg.integer("fk", "points", 1001);
  if (points < 2) throw std::invalid_argument("fk.points must be >= 2");
  const double br = fk_breakpoint(pot, eps);
  std::vector<double> s;
  for (long i = 0; i < points; ++i) s.push_back(static_cast<double>(i) / static_cast<double>(points - 1));
  s.push_back(br);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  auto out = open_output(run, "fk.csv");
  csv::write_row(out, {"s", "f_eps", "marker"});
  SvgSeries ser{"f_eps", {}, {}};
  for (double x : s) {
    const double v = eval_fk(pot, eps, x);
    std::string marker;
    if (x == br) marker = "breakpoint";
    csv::write_row(out, {csv::num(x), csv::num(v), marker});
    ser.x.push_back(x);
    ser.y.push_back(v);
  }
  emit_svg(run, "fk.svg", "truncated potential, eps=" + csv::num(eps), "s", "f_eps(s)", {ser});
  say(run, "fk-plot: breakpoint at s=" + csv::num(br));
  return kOk;
}

int cmd_bar(const ExperimentConfig& cfg, const RunOptions& run) {
  const auto pot = potential_from_config(cfg);
  const auto opts = solver_from_config(cfg, run);
  const auto eps_list = cfg.reals("bar", "eps", {0.1, 0.03, 0.01, 0.003});
  const auto t_list = cfg.reals("bar", "t", {0.0, 0.1, 0.3, 0.6, 1.0, 2.0});
  AlternationOptions alt;
  alt.tol = cfg.real("bar", "tol", alt.tol);
  alt.max_rounds = static_cast<int>(cfg.integer("bar", "max_rounds", alt.max_rounds));
  alt.v_iterations = static_cast<int>(cfg.integer("bar", "v_iterations", alt.v_iterations));
  alt.multistart = cfg.boolean("bar", "multistart", alt.multistart);
  const auto cells = static_cast<std::size_t>(cfg.integer("bar", "cells", 0));

  std::vector<double> grid = density_grid(cfg);
  const double t_max = *std::max_element(t_list.begin(), t_list.end());
  if (grid.back() < t_max) {
    throw std::invalid_argument("[grid] s must reach the largest stretch " + csv::num(t_max));
  }
  const DensityTable gtable = build_density_table(pot, grid, opts);

  // One sweep per eps keeps each cell independent; the rows are reassembled
  // in the configured order.
  std::vector<SweepTable> parts(eps_list.size() * t_list.size());
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (k > 0 && !(eps_list[k] < eps_list[k - 1])) {
      throw std::invalid_argument("bar.eps must be strictly decreasing");
    }
  }
  parallel_for(parts.size(), run.workers, [&](std::size_t idx) {
    const std::size_t k = idx / t_list.size();
    const std::size_t j = idx % t_list.size();
    parts[idx] = bar_sweep(pot, {eps_list[k]}, {t_list[j]}, gtable, alt, cells);
  });
  SweepTable table;
  table.t_values = t_list;
  for (const auto& part : parts) table.rows.push_back(part.rows.front());
  int flagged = 0;
  for (std::size_t j = 0; j < t_list.size(); ++j) {
    bool decreasing = true;
    for (std::size_t k = 1; k < eps_list.size(); ++k) {
      decreasing = decreasing && table.rows[k * t_list.size() + j].gap <=
                                     table.rows[(k - 1) * t_list.size() + j].gap + 1e-9;
    }
    table.gap_decreasing.push_back(decreasing);
  }
  for (const auto& r : table.rows) flagged += r.flags.empty() ? 0 : 1;
  {
    auto out = open_output(run, "bar.csv");
    write_sweep_csv(out, table);
    out << "# fraction_gap_decreasing," << csv::num(table.fraction_decreasing()) << '\n';
  }
  std::vector<SvgSeries> series;
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    SvgSeries ser{"eps=" + csv::num(eps_list[k]), t_list, {}};
    for (std::size_t j = 0; j < t_list.size(); ++j) ser.y.push_back(table.rows[k * t_list.size() + j].energy);
    series.push_back(std::move(ser));
  }
  SvgSeries lim{"limit", t_list, {}};
  for (std::size_t j = 0; j < t_list.size(); ++j) lim.y.push_back(table.rows[j].limit_energy);
  series.push_back(std::move(lim));
  emit_svg(run, "bar.svg", "bar energies", "t", "E(t)", series);
  say(run, "bar: " + std::to_string(table.rows.size()) + " cells, " + std::to_string(flagged) +
               " flagged, gap decreasing for " + csv::num(100.0 * table.fraction_decreasing()) +
               "% of t");
  return flagged == 0 ? kOk : kViolation;
}

int cmd_regime(const ExperimentConfig& cfg, const RunOptions& run) {
  const auto opts = solver_from_config(cfg, run);
  RegimeParams params;
  params.kind = regime_kind_from_string(cfg.text("regime", "kind", "dugdale"));
  params.indices = cfg.integers("regime", "indices", params.indices);
  params.ell = cfg.real("regime", "ell", params.ell);
  params.a_base = cfg.real("regime", "a_base", params.a_base);
  params.eps_power = cfg.real("regime", "eps_power", params.eps_power);
  params.p = cfg.real("regime", "p", params.p);
  params.kappa = cfg.real("regime", "kappa", params.kappa);
  params.ell_base = cfg.real("regime", "ell_base", params.ell_base);
  const auto grid = cfg.reals("regime", "s", kRegimeGrid);
  const double sup_gap_max = cfg.real("regime", "sup_gap_max", 0.1);
  const double level_min = cfg.real("regime", "level_min", 0.85);
  const RegimeSequence seq = build_sequence(params);

  RegimeReport report = regime_study(seq, grid, opts, run.workers);

  bool threshold_ok = true;
  std::string threshold_line;
  if (seq.kind == RegimeKind::Griffith) {
    double level = 1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] > 0.0) level = std::min(level, report.tables.back().value[i]);
    }
    threshold_ok = level >= level_min;
    threshold_line = "# min_level_last_j," + csv::num(level) + "," + csv::num(level_min);
  } else {
    threshold_ok = report.sup_gap.back() <= sup_gap_max;
    threshold_line = "# sup_gap_last_j," + csv::num(report.sup_gap.back()) + "," + csv::num(sup_gap_max);
  }
  {
    auto out = open_output(run, "regime.csv");
    write_regime_csv(out, report);
    out << threshold_line << '\n';
  }
  int extra = 0;
  if (seq.kind == RegimeKind::PowerLaw) {
    const auto small = cfg.reals("regime", "small_s", {0.1, 0.01, 0.001});
    const SmallSReport rep = theta_p_small_s_check(seq.p, seq.kappa, small, opts);
    auto out = open_output(run, "theta_small_s.csv");
    csv::write_row(out, {"s", "ratio"});
    for (std::size_t i = 0; i < rep.s.size(); ++i) csv::write_row(out, {csv::num(rep.s[i]), csv::num(rep.ratio[i])});
    out << "# bounds," << csv::num(rep.lower) << ',' << csv::num(rep.upper) << '\n';
    out << "# in_bounds," << (rep.in_bounds ? "true" : "false") << '\n';
    out << "# stabilizing," << (rep.stabilizing ? "true" : "false") << '\n';
    out << "# holder_constant," << csv::num(fit_holder_constant(report.predicted, seq.p)) << '\n';
    extra += rep.in_bounds ? 0 : 1;
  }
  std::vector<SvgSeries> series;
  for (std::size_t k = 0; k < report.tables.size(); ++k) {
    series.push_back({"j=" + std::to_string(report.indices[k]), report.tables[k].s, report.tables[k].value});
  }
  series.push_back({"limit", report.predicted.s, report.predicted.value});
  emit_svg(run, "regime.svg", to_string(seq.kind) + " regime", "s", "g_j(s)", series);
  const bool ok = report.monotonicity_violations == 0 && report.solver_flags == 0 && threshold_ok &&
                  extra == 0 && (seq.kind != RegimeKind::Dugdale || report.sup_gap_decreasing);
  say(run, "regime " + to_string(seq.kind) + ": last sup-gap " + csv::num(report.sup_gap.back()) +
               ", " + std::to_string(report.monotonicity_violations) + " monotonicity violations");
  return ok ? kOk : kViolation;
}

int cmd_oracle(const ExperimentConfig& cfg, const RunOptions& run) {
  const auto pot = potential_from_config(cfg);
  const auto s_list = cfg.reals("oracle", "s", {0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 5.0});
  GeodesicGrid grid;
  grid.n_alpha = static_cast<std::size_t>(cfg.integer("oracle", "n_alpha", 128));
  grid.n_beta = static_cast<std::size_t>(cfg.integer("oracle", "n_beta", 128));
  grid.stencil = static_cast<int>(cfg.integer("oracle", "stencil", 16));
  grid.validate();
  const double factor = cfg.real("oracle", "factor", 2.0);
  const double tol = cfg.real("oracle", "tol", 5e-3);
  const int max_ref = static_cast<int>(cfg.integer("oracle", "max_refinements", 5));
  const bool polish = cfg.boolean("oracle", "polish", true);
  const bool paths = cfg.boolean("oracle", "paths", false);

  std::vector<RefinementResult> results(s_list.size());
  parallel_for(s_list.size(), run.workers, [&](std::size_t k) {
    results[k] = refine_until_stable(pot, s_list[k], grid, factor, tol, max_ref, polish);
  });
  int unstable = 0;
  auto out = open_output(run, "oracle.csv");
  csv::write_row(out, {"s", "value", "grid_value", "stable", "refinements", "sequence"});
  SvgSeries ser{"geodesic g", {}, {}};
  for (std::size_t k = 0; k < s_list.size(); ++k) {
    const auto& r = results[k];
    std::string seq;
    for (std::size_t i = 0; i < r.values.size(); ++i) seq += (i ? ";" : "") + csv::num(r.values[i]);
    csv::write_row(out, {csv::num(s_list[k]), csv::num(r.value), csv::num(r.last.grid_value),
                         r.stable ? "true" : "false", std::to_string(r.values.size() - 1), seq});
    unstable += r.stable ? 0 : 1;
    ser.x.push_back(s_list[k]);
    ser.y.push_back(r.value);
    if (paths) {
      auto po = open_output(run, "oracle_path_s" + csv::num(s_list[k]) + ".csv");
      write_path_csv(po, r.last.path);
    }
  }
  emit_svg(run, "oracle.svg", "geodesic oracle", "s", "g(s)", {ser});
  say(run, "oracle: " + std::to_string(s_list.size()) + " openings, " + std::to_string(unstable) +
               " not stabilized");
  return unstable == 0 ? kOk : kViolation;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"density", "profiles", "fk-plot",
                                                 "bar",     "regime",   "oracle"};
  return names;
}

int run_command(const std::string& name, const ExperimentConfig& cfg, const RunOptions& run) {
  if (run.workers < 1) throw std::invalid_argument("--workers must be >= 1");
  if (name == "density") return cmd_density(cfg, run);
  if (name == "profiles") return cmd_profiles(cfg, run);
  if (name == "fk-plot") return cmd_fk_plot(cfg, run);
  if (name == "bar") return cmd_bar(cfg, run);
  if (name == "regime") return cmd_regime(cfg, run);
  if (name == "oracle") return cmd_oracle(cfg, run);
  throw std::invalid_argument("unknown command '" + name + "'");
}

}  // namespace cohesive
