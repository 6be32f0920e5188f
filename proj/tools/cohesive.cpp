#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "cohesive/commands.hpp"
#include "cohesive/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Cohesive fracture surface densities, phase-field bars and regime limits"};
  app.require_subcommand(1);

  std::string config_path;
  cohesive::RunOptions run;
  std::string out_dir = ".";
  bool print_schema = false;
  app.add_flag("--schema", print_schema, "Print the configuration schema and exit");

  const std::map<std::string, std::string> blurbs = {
      {"density", "surface density table g(s) with property checks"},
      {"profiles", "normalized optimal profiles (alpha/s, beta)"},
      {"fk-plot", "regularized potential f_eps(s) with its breakpoint"},
      {"bar", "phase-field bar energies against the limit energy"},
      {"regime", "regime study of a potential sequence"},
      {"oracle", "geodesic oracle values with grid refinement"},
  };
  for (const auto& name : cohesive::command_names()) {
    auto* sub = app.add_subcommand(name, blurbs.at(name));
    sub->add_option("--config", config_path, "Experiment config file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--workers", run.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--tol", run.tol, "Relative table tolerance override")->check(CLI::PositiveNumber);
    sub->add_flag("--svg", run.svg, "Also write SVG line charts");
  }
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cohesive::kUsage;
  }
  if (print_schema) {
    std::cout << cohesive::config_schema();
    return cohesive::kOk;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return cohesive::kUsage;
  }

  try {
    const auto cfg = config_path.empty() ? cohesive::ExperimentConfig{}
                                         : cohesive::ExperimentConfig::load(config_path);
    run.out_dir = out_dir;
    run.log = &std::cerr;
    return cohesive::run_command(app.get_subcommands().front()->get_name(), cfg, run);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cohesive::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cohesive::kViolation;
  }
}
