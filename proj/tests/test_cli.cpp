#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pnlab/experiment.hpp"

using namespace pnlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("pnlab_test_" + tag);
  fs::remove_all(dir);
  return dir;
}

// small but valid settings so CLI-path tests stay quick
RunConfig small_config(const fs::path& out) {
  RunConfig cfg;
  cfg.layer.X = 20.0;
  cfg.layer.count = 512;
  cfg.output.dir = out.string();
  return cfg;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("minimal config fills defaults") {
  const auto cfg = parse_config("potential = \"standard\"\n");
  CHECK(cfg.potential == "standard");
  CHECK(cfg.levy.r == 0.5);
  CHECK(cfg.layer.count == 2048);
  CHECK(cfg.cell.deltas.size() == 3);
}

TEST_CASE("comments, blank lines, and quoting") {
  const auto cfg = parse_config(
      "# a comment\n"
      "\n"
      "potential = standard  # trailing comment\n"
      "layer.X = 25\n");
  CHECK(cfg.layer.X == 25.0);
}

TEST_CASE("invalid values name the violated precondition") {
  CHECK_THROWS_WITH_AS(static_cast<void>(parse_config("levy.r = -1\n")),
                       doctest::Contains("inner radius"), ConfigError);
  CHECK_THROWS_WITH_AS(static_cast<void>(parse_config("layer.X = 5\n")),
                       doctest::Contains("layer.X"), ConfigError);
}

TEST_CASE("unknown keys are hard errors with the line number") {
  CHECK_THROWS_WITH_AS(static_cast<void>(parse_config("potential = standard\nwobble = 3\n")),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(static_cast<void>(parse_config("just words\n")),
                       doctest::Contains("line 1"), ConfigError);
}

TEST_CASE("deltas lists parse into scan plans") {
  const auto cfg = parse_config("cell.deltas = 0.2, 0.1, 0.05\n");
  REQUIRE(cfg.cell.deltas.size() == 3);
  CHECK(cfg.cell.deltas[0] == 0.2);
  CHECK(cfg.cell.deltas[2] == 0.05);
  CHECK_THROWS_AS(static_cast<void>(parse_config("cell.deltas = 0.05, 0.1\n")), ConfigError);
}

TEST_CASE("serialization round-trips") {
  RunConfig cfg;
  cfg.layer.X = 23.5;
  cfg.cell.deltas = {0.4, 0.2, 0.1};
  cfg.potential = "perturbed";
  const std::string s = serialize_config(cfg);
  const auto back = parse_config(s);
  CHECK(serialize_config(back) == s);
}

TEST_CASE("deterministic reruns produce identical bytes") {
  const auto dir_a = fresh_dir("det_a");
  const auto dir_b = fresh_dir("det_b");
  auto cfg = small_config(dir_a);
  cfg.particles.N = 8;
  cfg.particles.T = 0.2;
  cfg.particles.dt = 1e-3;
  REQUIRE(run_experiment(cfg, "particles") == kOk);
  cfg.output.dir = dir_b.string();
  REQUIRE(run_experiment(cfg, "particles") == kOk);
  CHECK(slurp(dir_a / "particles.csv") == slurp(dir_b / "particles.csv"));
  CHECK(slurp(dir_a / "summary.txt") == slurp(dir_b / "summary.txt"));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("corrector reusing the cached layer matches a fresh joint run") {
  const auto dir_a = fresh_dir("cache_a");
  const auto dir_b = fresh_dir("cache_b");
  auto cfg = small_config(dir_a);

  // split run: layer first (fills the cache), then corrector
  REQUIRE(run_experiment(cfg, "layer") == kOk);
  REQUIRE(fs::exists(dir_a / "cache"));
  REQUIRE(run_experiment(cfg, "corrector") == kOk);

  // fresh joint run in a clean directory
  cfg.output.dir = dir_b.string();
  REQUIRE(run_experiment(cfg, "corrector") == kOk);
  CHECK(slurp(dir_a / "corrector.csv") == slurp(dir_b / "corrector.csv"));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("orowan CSV column contract") {
  const auto dir = fresh_dir("orowan");
  auto cfg = small_config(dir);
  cfg.cell.deltas = {0.5, 0.4};
  cfg.cell.T = 5.0;
  cfg.cell.points_per_unit = 8;
  REQUIRE(run_experiment(cfg, "orowan") == kOk);
  const std::string csv = slurp(dir / "orowan.csv");
  CHECK(csv.rfind("delta,p,L,lambda,lambda_over_delta2,target_c0_p0_L0,rel_error,converged\n",
                  0) == 0);
  // one row per delta
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(fs::exists(dir / "manifest.txt"));
  fs::remove_all(dir);
}

TEST_CASE("invalid config produces no output files") {
  const auto dir = fresh_dir("failfast");
  auto cfg = small_config(dir);
  cfg.layer.count = 100;  // violates count >= 512
  CHECK_THROWS_AS(static_cast<void>(run_experiment(cfg, "layer")), ConfigError);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("unknown subcommand is a config error") {
  const auto dir = fresh_dir("unknown");
  auto cfg = small_config(dir);
  CHECK_THROWS_AS(static_cast<void>(run_experiment(cfg, "frobnicate")), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("overrides apply one-to-one") {
  RunConfig cfg;
  apply_override(cfg, "hull.delta", "0.2");
  apply_override(cfg, "particles.wrap", "false");
  apply_override(cfg, "output.dir", "elsewhere");
  CHECK(cfg.hull.delta == 0.2);
  CHECK_FALSE(cfg.particles.wrap);
  CHECK(cfg.output.dir == "elsewhere");
  CHECK_THROWS_AS(apply_override(cfg, "nope", "1"), ConfigError);
}

}  // TEST_SUITE
