#include <filesystem>
#include <fstream>
#include <sstream>

#include "cohesive/commands.hpp"
#include "cohesive/config.hpp"
#include "doctest.h"

using namespace cohesive;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return ExperimentConfig::parse(in, "test.cfg");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cohesive_unit_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse(
      "# comment\n"
      "[potential]\n"
      "family = dugdale   # trailing comment\n"
      "a = 8\n"
      "[grid]\n"
      "s = 0, 0.5, 1\n"
      "[bar]\n"
      "multistart = false\n"
      "max_rounds = 30\n");
  CHECK(cfg.text("potential", "family", "") == "dugdale");
  CHECK(cfg.real("potential", "a", 0.0) == 8.0);
  CHECK(cfg.real("potential", "ell", 1.5) == 1.5);
  CHECK(cfg.reals("grid", "s", {}) == std::vector<double>{0.0, 0.5, 1.0});
  CHECK_FALSE(cfg.boolean("bar", "multistart", true));
  CHECK(cfg.integer("bar", "max_rounds", 0) == 30);
  const auto pot = potential_from_config(cfg);
  CHECK(pot.family() == Family::DugdaleModified);
  CHECK(pot.param_a() == 8.0);
}

TEST_CASE("config rejects unknown and ill-typed entries") {
  CHECK_THROWS_WITH(parse("[potential]\ncolour = red\n"), doctest::Contains("test.cfg:2"));
  CHECK_THROWS_WITH(parse("[plots]\n"), doctest::Contains("unknown config section"));
  CHECK_THROWS_WITH(parse("[potential]\nell = one\n"), doctest::Contains("not a real"));
  CHECK_THROWS_WITH(parse("[bar]\nmax_rounds = 2.5\n"), doctest::Contains("integer"));
  CHECK_THROWS_WITH(parse("[bar]\nmultistart = yes\n"), doctest::Contains("bool"));
  CHECK_THROWS_WITH(parse("[grid]\ns = 0, x\n"), doctest::Contains("real list"));
  CHECK_THROWS_WITH(parse("ell = 1\n"), doctest::Contains("outside of a section"));
  CHECK_THROWS_WITH(parse("[potential]\nell = 1\nell = 2\n"), doctest::Contains("duplicate"));
  CHECK_THROWS_WITH(parse("[potential\n"), doctest::Contains("unterminated"));
  CHECK_THROWS(potential_from_config(parse("[potential]\nfamily = elastic\n")));
  CHECK_THROWS(solver_from_config(parse("[solver]\ninit = random\n"), RunOptions{}));
  CHECK_THROWS(solver_from_config(parse("[solver]\nbeta_clamp = 0.5\n"), RunOptions{}));
  CHECK(config_schema().find("[regime] kind : string") != std::string::npos);
}

TEST_CASE("tolerance override") {
  RunOptions run;
  run.tol = 0.05;
  CHECK(solver_from_config(ExperimentConfig{}, run).table_tol == 0.05);
}

TEST_CASE("fk-plot command output") {
  RunOptions run;
  run.out_dir = scratch_dir("fk");
  run.svg = true;
  CHECK(run_command("fk-plot", parse("[fk]\neps = 0.04\npoints = 11\n"), run) == kOk);
  const std::string text = slurp(run.out_dir / "fk.csv");
  CHECK(text.rfind("s,f_eps,marker\n0,0,\n", 0) == 0);
  CHECK(text.find("0.833333333333,1,breakpoint\n") != std::string::npos);
  CHECK(text.find("\n1,1,\n") != std::string::npos);
  CHECK(std::filesystem::exists(run.out_dir / "fk.svg"));
}

TEST_CASE("profiles command with a zero opening") {
  RunOptions run;
  run.out_dir = scratch_dir("profiles");
  const auto cfg = parse("[profiles]\ns = 0, 0.5\n[oracle]\nn_alpha = 65\nn_beta = 65\n");
  CHECK(run_command("profiles", cfg, run) == kOk);
  CHECK(slurp(run.out_dir / "profile_s0.csv") == "t,alpha_over_s,beta\n0,0,1\n");
  const std::string report = slurp(run.out_dir / "profiles.csv");
  CHECK(report.find("\n0,solver,0,0,,0,,,true\n") != std::string::npos);
  CHECK(report.find(",true\n", report.find("\n0.5,")) != std::string::npos);
}

TEST_CASE("commands are deterministic") {
  const auto cfg = parse(
      "[grid]\ns = 0, 0.25, 0.5, 1\n"
      "[bar]\neps = 0.1\nt = 0, 0.5, 1\n"
      "[oracle]\ns = 0.5\nn_alpha = 33\nn_beta = 33\n");
  for (const std::string cmd : {"bar", "oracle", "density"}) {
    RunOptions a, b;
    a.out_dir = scratch_dir(cmd + "_a");
    b.out_dir = scratch_dir(cmd + "_b");
    b.workers = 2;
    run_command(cmd, cfg, a);
    run_command(cmd, cfg, b);
    for (const auto& entry : std::filesystem::directory_iterator(a.out_dir)) {
      CAPTURE(entry.path().string());
      CHECK(slurp(entry.path()) == slurp(b.out_dir / entry.path().filename()));
    }
  }
}

TEST_CASE("unknown command and bad workers") {
  RunOptions run;
  CHECK_THROWS(run_command("plot", ExperimentConfig{}, run));
  run.workers = 0;
  CHECK_THROWS(run_command("fk-plot", ExperimentConfig{}, run));
}
