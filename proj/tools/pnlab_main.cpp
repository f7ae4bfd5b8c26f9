// pnlab command line: subcommand dispatch over the experiment runner.
//
//   pnlab layer      --X 40 --count 4096
//   pnlab corrector  --L 1.0
//   pnlab hull       --delta 0.1 --p0 1 --L 1
//   pnlab cell       --delta 0.1 --p0 1 --L0 1
//   pnlab orowan     --p0 1 --L0 1 --deltas 0.2,0.1,0.05
//   pnlab particles  --N 32 --L0 1 --wrap
//   pnlab verify
//
// Flags override config-file keys one-to-one; --config loads a key=value
// file first, --set key=value applies arbitrary overrides.  Exit status:
// 0 ok, 1 compute failure, 2 config failure.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "pnlab/experiment.hpp"

namespace {

struct PendingOverride {
  std::string key, value;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pnlab: one-dimensional Peierls-Nabarro dislocation laboratory"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_option("--set", sets, "extra overrides as key=value")->take_all();

  std::vector<PendingOverride> overrides;
  const auto bind = [&overrides](CLI::App* cmd, const std::string& flag, const std::string& key) {
    auto holder = std::make_shared<std::string>();
    cmd->add_option(flag, *holder, key)
        ->each([&overrides, key, holder](const std::string& v) {
          overrides.push_back({key, v});
          (void)holder;
        });
  };

  auto* c_layer = app.add_subcommand("layer", "solve the dislocation layer profile");
  bind(c_layer, "--X", "layer.X");
  bind(c_layer, "--count", "layer.count");
  bind(c_layer, "--tol", "layer.tol");

  auto* c_corr = app.add_subcommand("corrector", "solve the stress corrector");
  bind(c_corr, "--L", "corrector.L");
  bind(c_corr, "--tol", "corrector.tol");

  auto* c_hull = app.add_subcommand("hull", "evaluate the hull-function ansatz");
  bind(c_hull, "--delta", "hull.delta");
  bind(c_hull, "--p0", "hull.p0");
  bind(c_hull, "--L", "hull.L");
  bind(c_hull, "--tol", "hull.tol");
  bind(c_hull, "--n", "hull.n");

  auto* c_cell = app.add_subcommand("cell", "run one cell-problem evolution");
  bind(c_cell, "--delta", "cell.delta");
  bind(c_cell, "--p0", "cell.p0");
  bind(c_cell, "--L0", "cell.L0");
  bind(c_cell, "--T", "cell.T");
  bind(c_cell, "--dt", "cell.dt");

  auto* c_orowan = app.add_subcommand("orowan", "scan lambda/delta^2 against c0 |p0| L0");
  bind(c_orowan, "--p0", "cell.p0");
  bind(c_orowan, "--L0", "cell.L0");
  bind(c_orowan, "--deltas", "cell.deltas");

  auto* c_part = app.add_subcommand("particles", "integrate the dislocation particle system");
  bind(c_part, "--N", "particles.N");
  bind(c_part, "--spacing", "particles.spacing");
  bind(c_part, "--L0", "particles.L0");
  bind(c_part, "--c0", "particles.c0");
  bind(c_part, "--T", "particles.T");
  bind(c_part, "--dt", "particles.dt");
  bind(c_part, "--wrap", "particles.wrap");
  bind(c_part, "--images", "particles.images");

  app.add_subcommand("verify", "run the quick property suite");

  CLI11_PARSE(app, argc, argv);

  try {
    pnlab::RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "pnlab: cannot read config file " << config_path << "\n";
        return pnlab::kConfigFailure;
      }
      std::ostringstream ss;
      ss << in.rdbuf();
      cfg = pnlab::parse_config(ss.str());
    }
    for (const auto& o : overrides) pnlab::apply_override(cfg, o.key, o.value);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos)
        throw pnlab::ConfigError("--set expects key=value, got '" + s + "'");
      pnlab::apply_override(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!out_dir.empty()) pnlab::apply_override(cfg, "output.dir", out_dir);
    pnlab::validate_config(cfg);

    const std::string sub = app.get_subcommands().front()->get_name();
    return pnlab::run_experiment(cfg, sub);
  } catch (const pnlab::ConfigError& e) {
    std::cerr << "pnlab: config error: " << e.what() << "\n";
    return pnlab::kConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << "pnlab: " << e.what() << "\n";
    return pnlab::kComputeFailure;
  }
}
