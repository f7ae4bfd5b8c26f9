#include "pnlab/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "pnlab/cell.hpp"
#include "pnlab/fractional.hpp"
#include "pnlab/hull.hpp"
#include "pnlab/particles.hpp"
#include "pnlab/special.hpp"

namespace pnlab {

namespace fs = std::filesystem;

std::string format_real(Real v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string config_hash(const std::string& canonical) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ComputeError("cannot open " + path.string() + " for writing");
  out << content;
}

std::string layer_key(const RunConfig& cfg) {
  std::string m = "layer;potential=" + cfg.potential + ";X=" + format_real(cfg.layer.X) +
                  ";count=" + std::to_string(cfg.layer.count) + ";tol=" +
                  format_real(cfg.layer.tol);
  return config_hash(m);
}

std::string corrector_key(const RunConfig& cfg, Real L) {
  std::string m = "corrector;" + layer_key(cfg) + ";L=" + format_real(L) + ";tol=" +
                  format_real(cfg.corrector.tol);
  return config_hash(m);
}

// Header metadata lines + numeric columns, everything %.17g so the cache
// round-trips bit for bit.
void save_layer_cache(const fs::path& path, const LayerSolution& layer,
                      const std::string& potential_label) {
  std::string out = "# pnlab layer cache\n";
  out += "# potential = " + potential_label + "\n";
  out += "# alpha = " + format_real(layer.alpha) + "\n";
  out += "# half_width = " + format_real(layer.half_width) + "\n";
  out += "# c0 = " + format_real(layer.c0) + "\n";
  out += "# K0 = " + format_real(layer.K0) + "\n";
  out += "# K1 = " + format_real(layer.K1) + "\n";
  out += "# tail_d_plus = " + format_real(layer.tail_d_plus) + "\n";
  out += "# tail_d_minus = " + format_real(layer.tail_d_minus) + "\n";
  out += "# residual_sup = " + format_real(layer.residual_sup) + "\n";
  out += "# newton_iterations = " + std::to_string(layer.newton_iterations) + "\n";
  out += "x,phi,phi1,phi2,phi3\n";
  for (Eigen::Index j = 0; j < layer.xs.size(); ++j) {
    out += format_real(layer.xs[j]) + "," + format_real(layer.phi[j]) + "," +
           format_real(layer.phi1[j]) + "," + format_real(layer.phi2[j]) + "," +
           format_real(layer.phi3[j]) + "\n";
  }
  write_file(path, out);
}

std::map<std::string, std::string> parse_cache_header(std::istream& in, std::string& columns) {
  std::map<std::string, std::string> meta;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        std::string k = line.substr(2, eq - 3);
        std::string v = line.substr(eq + 2);
        meta[k] = v;
      }
      continue;
    }
    columns = line;
    break;
  }
  return meta;
}

LayerSolution load_layer_cache(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string columns;
  auto meta = parse_cache_header(in, columns);
  std::vector<Real> xs, phi, phi1, phi2, phi3;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Real vals[5];
    for (int c = 0; c < 5; ++c) {
      std::getline(ss, cell, ',');
      vals[c] = std::strtod(cell.c_str(), nullptr);
    }
    xs.push_back(vals[0]);
    phi.push_back(vals[1]);
    phi1.push_back(vals[2]);
    phi2.push_back(vals[3]);
    phi3.push_back(vals[4]);
  }
  const auto n = static_cast<Eigen::Index>(xs.size());
  LayerSolution layer;
  layer.xs = Eigen::Map<const ArrayXr>(xs.data(), n);
  layer.phi = Eigen::Map<const ArrayXr>(phi.data(), n);
  layer.phi1 = Eigen::Map<const ArrayXr>(phi1.data(), n);
  layer.phi2 = Eigen::Map<const ArrayXr>(phi2.data(), n);
  layer.phi3 = Eigen::Map<const ArrayXr>(phi3.data(), n);
  layer.potential = make_potential(meta.at("potential"));
  layer.alpha = std::strtod(meta.at("alpha").c_str(), nullptr);
  layer.half_width = std::strtod(meta.at("half_width").c_str(), nullptr);
  layer.c0 = std::strtod(meta.at("c0").c_str(), nullptr);
  layer.K0 = std::strtod(meta.at("K0").c_str(), nullptr);
  layer.K1 = std::strtod(meta.at("K1").c_str(), nullptr);
  layer.tail_d_plus = std::strtod(meta.at("tail_d_plus").c_str(), nullptr);
  layer.tail_d_minus = std::strtod(meta.at("tail_d_minus").c_str(), nullptr);
  layer.residual_sup = std::strtod(meta.at("residual_sup").c_str(), nullptr);
  layer.newton_iterations = static_cast<int>(std::strtol(meta.at("newton_iterations").c_str(), nullptr, 10));
  const Real h = layer.xs[1] - layer.xs[0];
  const Real xl = layer.xs[0];
  layer.s_phi = CubicSpline(xl, h, layer.phi, layer.phi1[0], layer.phi1[n - 1]);
  layer.s_phi1 = CubicSpline(xl, h, layer.phi1, layer.phi2[0], layer.phi2[n - 1]);
  layer.s_phi2 = CubicSpline(xl, h, layer.phi2, layer.phi3[0], layer.phi3[n - 1]);
  layer.s_phi3 = CubicSpline(xl, h, layer.phi3, 0.0, 0.0);
  return layer;
}

void save_corrector_cache(const fs::path& path, const CorrectorSolution& sol) {
  std::string out = "# pnlab corrector cache\n";
  out += "# c = " + format_real(sol.c) + "\n";
  out += "# L = " + format_real(sol.L) + "\n";
  out += "# K2 = " + format_real(sol.K2) + "\n";
  out += "# K3 = " + format_real(sol.K3) + "\n";
  out += "# tail_e_plus = " + format_real(sol.tail_e_plus) + "\n";
  out += "# tail_e_minus = " + format_real(sol.tail_e_minus) + "\n";
  out += "# residual_sup = " + format_real(sol.residual_sup) + "\n";
  out += "# fredholm_defect = " + format_real(sol.fredholm_defect) + "\n";
  out += "# condition_estimate = " + format_real(sol.condition_estimate) + "\n";
  out += "x,psi,psi1,psi2\n";
  for (Eigen::Index j = 0; j < sol.xs.size(); ++j) {
    out += format_real(sol.xs[j]) + "," + format_real(sol.psi[j]) + "," +
           format_real(sol.psi1[j]) + "," + format_real(sol.psi2[j]) + "\n";
  }
  write_file(path, out);
}

CorrectorSolution load_corrector_cache(const fs::path& path, const LayerSolution& layer) {
  std::ifstream in(path, std::ios::binary);
  std::string columns;
  auto meta = parse_cache_header(in, columns);
  std::vector<Real> psi, psi1, psi2;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    Real vals[4];
    for (int c = 0; c < 4; ++c) {
      std::getline(ss, cell, ',');
      vals[c] = std::strtod(cell.c_str(), nullptr);
    }
    psi.push_back(vals[1]);
    psi1.push_back(vals[2]);
    psi2.push_back(vals[3]);
  }
  const auto n = static_cast<Eigen::Index>(psi.size());
  CorrectorSolution sol;
  sol.xs = layer.xs;
  sol.psi = Eigen::Map<const ArrayXr>(psi.data(), n);
  sol.psi1 = Eigen::Map<const ArrayXr>(psi1.data(), n);
  sol.psi2 = Eigen::Map<const ArrayXr>(psi2.data(), n);
  sol.c = std::strtod(meta.at("c").c_str(), nullptr);
  sol.L = std::strtod(meta.at("L").c_str(), nullptr);
  sol.K2 = std::strtod(meta.at("K2").c_str(), nullptr);
  sol.K3 = std::strtod(meta.at("K3").c_str(), nullptr);
  sol.tail_e_plus = std::strtod(meta.at("tail_e_plus").c_str(), nullptr);
  sol.tail_e_minus = std::strtod(meta.at("tail_e_minus").c_str(), nullptr);
  sol.residual_sup = std::strtod(meta.at("residual_sup").c_str(), nullptr);
  sol.fredholm_defect = std::strtod(meta.at("fredholm_defect").c_str(), nullptr);
  sol.condition_estimate = std::strtod(meta.at("condition_estimate").c_str(), nullptr);
  const Real h = layer.xs[1] - layer.xs[0];
  const Real xl = layer.xs[0];
  sol.s_psi = CubicSpline(xl, h, sol.psi, sol.psi1[0], sol.psi1[n - 1]);
  sol.s_psi1 = CubicSpline(xl, h, sol.psi1, sol.psi2[0], sol.psi2[n - 1]);
  sol.s_psi2 = CubicSpline(xl, h, sol.psi2, 0.0, 0.0);
  return sol;
}

fs::path resolved_output_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("PNLAB_OUT"); env && *env) return fs::path(env);
  return fs::path(cfg.output.dir);
}

void write_manifest(const fs::path& dir, const RunConfig& cfg, const std::string& subcommand) {
  std::string m = "# pnlab run manifest\n";
  m += "subcommand = " + subcommand + "\n";
  m += serialize_config(cfg);
  write_file(dir / "manifest.txt", m);
}

int verify_suite(const RunConfig& cfg, std::ostream& out);

}  // namespace

std::shared_ptr<const LayerSolution> layer_for_config(const RunConfig& cfg,
                                                      const fs::path& dir) {
  const fs::path cache = dir / "cache" / ("layer_" + layer_key(cfg) + ".csv");
  if (fs::exists(cache))
    return std::make_shared<const LayerSolution>(load_layer_cache(cache));
  auto layer = std::make_shared<const LayerSolution>(
      solve_layer(make_potential(cfg.potential), cfg.layer.X, cfg.layer.count, cfg.layer.tol));
  fs::create_directories(dir / "cache");
  save_layer_cache(cache, *layer, cfg.potential);
  return layer;
}

std::shared_ptr<const CorrectorSolution> corrector_for_config(const RunConfig& cfg, Real L,
                                                              const LayerSolution& layer,
                                                              const fs::path& dir) {
  const fs::path cache = dir / "cache" / ("corrector_" + corrector_key(cfg, L) + ".csv");
  if (fs::exists(cache))
    return std::make_shared<const CorrectorSolution>(load_corrector_cache(cache, layer));
  auto sol = std::make_shared<const CorrectorSolution>(
      solve_corrector(layer, make_potential(cfg.potential), L, cfg.corrector.tol));
  fs::create_directories(dir / "cache");
  save_corrector_cache(cache, *sol);
  return sol;
}

int run_experiment(const RunConfig& cfg, const std::string& subcommand) {
  validate_config(cfg);
  const fs::path dir = resolved_output_dir(cfg);

  try {
    fs::create_directories(dir);
    std::string summary;

    if (subcommand == "layer") {
      auto layer = layer_for_config(cfg, dir);
      if (cfg.output.emit_plot_data) {
        std::string csv = "x,phi,phi1,phi2,phi3\n";
        for (Eigen::Index j = 0; j < layer->xs.size(); ++j)
          csv += format_real(layer->xs[j]) + "," + format_real(layer->phi[j]) + "," +
                 format_real(layer->phi1[j]) + "," + format_real(layer->phi2[j]) + "," +
                 format_real(layer->phi3[j]) + "\n";
        write_file(dir / "layer.csv", csv);
      }
      summary += "layer: potential=" + cfg.potential + " X=" + format_real(cfg.layer.X) +
                 " count=" + std::to_string(cfg.layer.count) + "\n";
      summary += "c0 = " + format_real(layer->c0) + "\n";
      summary += "K0 = " + format_real(layer->K0) + "\n";
      summary += "K1 = " + format_real(layer->K1) + "\n";
      summary += "residual_sup = " + format_real(layer->residual_sup) + "\n";
    } else if (subcommand == "corrector") {
      auto layer = layer_for_config(cfg, dir);
      auto sol = corrector_for_config(cfg, cfg.corrector.L, *layer, dir);
      if (cfg.output.emit_plot_data) {
        std::string csv = "x,psi,psi1,psi2\n";
        for (Eigen::Index j = 0; j < sol->xs.size(); ++j)
          csv += format_real(sol->xs[j]) + "," + format_real(sol->psi[j]) + "," +
                 format_real(sol->psi1[j]) + "," + format_real(sol->psi2[j]) + "\n";
        write_file(dir / "corrector.csv", csv);
      }
      summary += "corrector: L=" + format_real(sol->L) + " gauge=<psi,phi'>=0\n";
      summary += "c = " + format_real(sol->c) + "\n";
      summary += "K2 = " + format_real(sol->K2) + "\n";
      summary += "K3 = " + format_real(sol->K3) + "\n";
      summary += "residual_sup = " + format_real(sol->residual_sup) + "\n";
      summary += "fredholm_defect = " + format_real(sol->fredholm_defect) + "\n";
    } else if (subcommand == "hull") {
      auto layer = layer_for_config(cfg, dir);
      auto corr = corrector_for_config(cfg, cfg.hull.L, *layer, dir);
      auto params = make_hull_params(cfg.hull.delta, cfg.hull.p0, cfg.hull.L, cfg.hull.n,
                                     layer, corr);
      std::string csv = "x,h,h_minus_x,nl_residual\n";
      Real sup_nl = 0.0, sup_hx = 0.0, min_h1 = std::numeric_limits<Real>::infinity();
      for (int k = 0; k < cfg.hull.x_count; ++k) {
        const Real x = (cfg.hull.x_count == 1)
                           ? cfg.hull.x_min
                           : cfg.hull.x_min + (cfg.hull.x_max - cfg.hull.x_min) * k /
                                                  (cfg.hull.x_count - 1);
        const auto ev = hull_value(params, x, cfg.hull.tol);
        sup_nl = std::max(sup_nl, std::abs(ev.nl));
        sup_hx = std::max(sup_hx, std::abs(ev.h - x));
        min_h1 = std::min(min_h1, ev.h1);
        csv += format_real(x) + "," + format_real(ev.h) + "," + format_real(ev.h - x) + "," +
               format_real(ev.nl) + "\n";
      }
      if (cfg.output.emit_plot_data) write_file(dir / "hull.csv", csv);
      summary += "hull: delta=" + format_real(cfg.hull.delta) + " p0=" + format_real(cfg.hull.p0) +
                 " L=" + format_real(cfg.hull.L) + " gauge=<psi,phi'>=0\n";
      summary += "lambda_bar = " + format_real(cfg.hull.delta * cfg.hull.delta * layer->c0 *
                                               std::abs(cfg.hull.p0) * cfg.hull.L) + "\n";
      summary += "sup_nl_residual = " + format_real(sup_nl) + "\n";
      summary += "nl_constant_C = " + format_real(sup_nl / (cfg.hull.delta * cfg.hull.delta)) + "\n";
      summary += "sup_h_minus_x = " + format_real(sup_hx) + "\n";
      summary += "mean_h_minus_x = " + format_real(hull_mean_offset(params)) + "\n";
      summary += "min_h_prime = " + format_real(min_h1) + "\n";
    } else if (subcommand == "cell") {
      const Real delta = (cfg.cell.delta > 0.0) ? cfg.cell.delta : cfg.cell.deltas.front();
      const int count = orowan_grid_count(delta, cfg.cell.p0, cfg.cell.points_per_unit);
      const Real horizon = (cfg.cell.T > 0.0) ? cfg.cell.T : orowan_horizon(delta);
      auto cell_cfg = make_cell_config(delta * cfg.cell.p0, delta * cfg.cell.L0, count,
                                       cfg.cell.dt, horizon, cfg.cell.burn_in);
      const auto traj = evolve_cell(cell_cfg, make_potential(cfg.potential));
      const auto est = estimate_lambda(traj, cfg.cell.burn_in);
      if (cfg.output.emit_plot_data) {
        std::string csv = "tau,mean_w\n";
        for (Eigen::Index j = 0; j < traj.times.size(); ++j)
          csv += format_real(traj.times[j]) + "," + format_real(traj.mean_w[j]) + "\n";
        write_file(dir / "drift.csv", csv);
      }
      summary += "cell: delta=" + format_real(delta) + " p=" + format_real(cell_cfg.p) +
                 " L=" + format_real(cell_cfg.L) + " count=" + std::to_string(count) + "\n";
      summary += "lambda = " + format_real(est.lambda) + "\n";
      summary += "slope_fit_stderr = " + format_real(est.slope_fit_stderr) + "\n";
      summary += std::string("converged = ") + (est.converged ? "true" : "false") + "\n";
      summary += "sup_w = " + format_real(traj.sup_w) + "\n";
      if (traj.cfl_warning) summary += "warning = explicit step outside comfortable stability region\n";
    } else if (subcommand == "orowan") {
      auto layer = layer_for_config(cfg, dir);
      OrowanScanConfig scan;
      scan.p0 = cfg.cell.p0;
      scan.L0 = cfg.cell.L0;
      scan.deltas = cfg.cell.deltas;
      scan.points_per_unit = cfg.cell.points_per_unit;
      scan.dt = cfg.cell.dt;
      scan.horizon = cfg.cell.T;
      scan.burn_in = cfg.cell.burn_in;
      const auto rows = orowan_scan(scan, layer->c0, make_potential(cfg.potential));
      std::string csv = "delta,p,L,lambda,lambda_over_delta2,target_c0_p0_L0,rel_error,converged\n";
      bool any_failed = false;
      for (const auto& row : rows) {
        if (row.failed) {
          any_failed = true;
          csv += format_real(row.delta) + "," + format_real(row.p) + "," + format_real(row.L) +
                 ",nan,nan," + format_real(row.target) + ",nan,false\n";
          summary += "row delta=" + format_real(row.delta) + " FAILED: " + row.message + "\n";
          continue;
        }
        csv += format_real(row.delta) + "," + format_real(row.p) + "," + format_real(row.L) +
               "," + format_real(row.lambda) + "," + format_real(row.lambda_over_delta2) + "," +
               format_real(row.target) + "," + format_real(row.rel_error) + "," +
               (row.converged ? "true" : "false") + "\n";
      }
      write_file(dir / "orowan.csv", csv);
      summary = "orowan: p0=" + format_real(scan.p0) + " L0=" + format_real(scan.L0) +
                " c0=" + format_real(layer->c0) + "\n" + summary;
      write_manifest(dir, cfg, subcommand);
      write_file(dir / "summary.txt", summary);
      return any_failed ? kComputeFailure : kOk;
    } else if (subcommand == "particles") {
      auto state = make_lattice_state(cfg.particles.N, cfg.particles.spacing, cfg.particles.c0,
                                      cfg.particles.L0, cfg.particles.wrap);
      state.image_count = cfg.particles.images;
      const auto traj = integrate(state, cfg.particles.dt, cfg.particles.T);
      if (cfg.output.emit_plot_data) {
        std::string csv = "t";
        for (int i = 1; i <= cfg.particles.N; ++i) csv += ",x" + std::to_string(i);
        csv += "\n";
        const long stride = std::max<long>(1, static_cast<long>(traj.size()) / 2000);
        for (std::size_t s = 0; s < traj.size(); s += stride) {
          csv += format_real(traj[s].t);
          for (Eigen::Index i = 0; i < traj[s].positions.size(); ++i)
            csv += "," + format_real(traj[s].positions[i]);
          csv += "\n";
        }
        write_file(dir / "particles.csv", csv);
      }
      summary += "particles: N=" + std::to_string(cfg.particles.N) +
                 " wrap=" + (cfg.particles.wrap ? std::string("true") : std::string("false")) + "\n";
      summary += "mean_velocity = " + format_real(lattice_mean_velocity(traj)) + "\n";
      summary += "drift_prediction = " + format_real(-cfg.particles.c0 * cfg.particles.L0) + "\n";
    } else if (subcommand == "verify") {
      std::ostringstream report;
      const int failures = verify_suite(cfg, report);
      std::cout << report.str();
      write_file(dir / "verify.txt", report.str());
      write_manifest(dir, cfg, subcommand);
      return failures == 0 ? kOk : kComputeFailure;
    } else {
      throw ConfigError("unknown subcommand '" + subcommand + "'");
    }

    write_manifest(dir, cfg, subcommand);
    write_file(dir / "summary.txt", summary);
    return kOk;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "pnlab " << subcommand << ": " << e.what() << "\n";
    return kComputeFailure;
  }
}

namespace {

// Quick property sweep behind the `verify` subcommand: a fast cross-section
// of the invariants the full test suite checks exhaustively.
int verify_suite(const RunConfig& cfg, std::ostream& out) {
  int failures = 0;
  const auto check = [&](const std::string& name, bool ok, const std::string& detail) {
    out << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
    if (!ok) ++failures;
  };
  const Real pi = std::numbers::pi_v<Real>;

  {
    auto pot = make_potential(cfg.potential);
    auto rep = validate_potential(pot, ArrayXr::LinSpaced(512, -2.0, 2.0));
    check("potential-invariants", rep.ok,
          "periodicity defect " + format_real(rep.periodicity_defect));
  }
  {
    const int n = 256;
    ArrayXr v(n);
    for (int j = 0; j < n; ++j) v[j] = std::cos(2.0 * pi * j / n);
    const ArrayXr w = half_laplacian_spectral(v, 2.0 * pi);
    const Real err = (w + v).abs().maxCoeff();
    check("spectral-multiplier", err < 1e-12, "cos oracle error " + format_real(err));
  }
  {
    LevyQuadratureConfig q;
    q.r = cfg.levy.r;
    q.R = cfg.levy.R;
    q.nodes_per_decade = cfg.levy.nodes_per_decade;
    Real worst = 0.0;
    for (Real x : {0.0, 1.0, 2.5, 5.0, -3.0}) {
      const Real got = half_laplacian_quadrature([](Real y) { return std::atan(y); },
                                                 1.0 / (1.0 + x * x), x, q);
      worst = std::max(worst, std::abs(got + x / (1.0 + x * x)));
    }
    check("quadrature-arctan-oracle", worst < 1e-4, "max error " + format_real(worst));
  }
  {
    LevyQuadratureConfig qa, qb;
    qa.r = 0.05;
    qb.r = 0.5;
    qa.R = qb.R = 1e7;
    const auto f = [](Real y) { return std::atan(y); };
    const Real d = std::abs(half_laplacian_quadrature(f, 0.5, 1.0, qa) -
                            half_laplacian_quadrature(f, 0.5, 1.0, qb));
    check("quadrature-r-independence", d < 1e-6, "r=0.05 vs r=0.5 differ by " + format_real(d));
  }

  auto pot = make_potential(cfg.potential);
  auto layer = std::make_shared<const LayerSolution>(solve_layer(pot, 40.0, 1024, cfg.layer.tol));
  if (cfg.potential == "standard") {
    Real sup = 0.0;
    for (Real x = -20.0; x <= 20.0; x += 0.05)
      sup = std::max(sup, std::abs(layer_eval(*layer, x, 0) - (0.5 + std::atan(x) / pi)));
    check("layer-closed-form-oracle", sup < 1e-3, "sup error " + format_real(sup));
    check("layer-c0", std::abs(layer->c0 / (2.0 * pi) - 1.0) < 0.01,
          "c0 = " + format_real(layer->c0));
  } else {
    check("layer-residual", layer->residual_sup <= cfg.layer.tol,
          "residual " + format_real(layer->residual_sup));
  }
  check("layer-monotone", layer->phi1.minCoeff() > 0.0,
        "min phi' = " + format_real(layer->phi1.minCoeff()));

  auto corr0 = solve_corrector(*layer, pot, 0.0, cfg.corrector.tol);
  check("corrector-zero-stress", corr0.psi.abs().maxCoeff() < 1e-10 && corr0.c == 0.0,
        "max |psi| = " + format_real(corr0.psi.abs().maxCoeff()));
  auto corr = std::make_shared<const CorrectorSolution>(
      solve_corrector(*layer, pot, 1.0, cfg.corrector.tol));
  check("corrector-fredholm", corr->fredholm_defect < 1e-8,
        "defect " + format_real(corr->fredholm_defect));

  {
    const auto sums = lattice_reference_sums(0.5, 1000);
    const auto sums0 = lattice_reference_sums(0.0, 1000);
    const bool ok = std::abs(sums.s1_limit + 2.0) < 1e-10 &&
                    std::abs(sums0.s2_limit - pi * pi / 6.0) < 1e-10 &&
                    std::abs(sums0.s1_limit) < 1e-12;
    check("lattice-sums", ok, "S1(1/2) = " + format_real(sums.s1_limit));
  }
  {
    auto params = make_hull_params(0.1, 1.0, 1.0, 64, layer, corr);
    Real sup_nl = 0.0;
    for (Real x : {0.0, 0.25, 0.5}) sup_nl = std::max(sup_nl, std::abs(nl_residual(params, x)));
    check("hull-nl-residual", sup_nl < 0.1, "sup |NL| = " + format_real(sup_nl) + " at delta=0.1");
  }
  {
    auto state = make_lattice_state(32, 1.0, 2.0 * pi, 1.0, true);
    const auto traj = integrate(state, 1e-3, 0.2);
    const Real err = std::abs(lattice_mean_velocity(traj) + 2.0 * pi);
    check("particle-lattice-drift", err < 1e-8, "drift error " + format_real(err));
  }
  out << (failures == 0 ? "verify: all checks passed\n"
                        : "verify: " + std::to_string(failures) + " check(s) failed\n");
  return failures;
}

}  // namespace

}  // namespace pnlab
