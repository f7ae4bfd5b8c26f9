#include "pnlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "pnlab/fractional.hpp"
#include "pnlab/potential.hpp"

namespace pnlab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

Real parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const Real r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a real number, got '" + v + "'");
  }
}

long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long r = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::vector<Real> parse_list(const std::string& key, const std::string& v) {
  std::vector<Real> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_real(key, item));
  }
  if (out.empty()) throw ConfigError(key + ": expected a comma list of reals");
  return out;
}

std::string format_value(Real v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void apply_override(RunConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string v = unquote(trim(raw));
  if (key == "potential") cfg.potential = v;
  else if (key == "levy.r") cfg.levy.r = parse_real(key, v);
  else if (key == "levy.R") cfg.levy.R = parse_real(key, v);
  else if (key == "levy.nodes_per_decade") cfg.levy.nodes_per_decade = static_cast<int>(parse_int(key, v));
  else if (key == "layer.X") cfg.layer.X = parse_real(key, v);
  else if (key == "layer.count") cfg.layer.count = static_cast<int>(parse_int(key, v));
  else if (key == "layer.tol") cfg.layer.tol = parse_real(key, v);
  else if (key == "corrector.L") cfg.corrector.L = parse_real(key, v);
  else if (key == "corrector.tol") cfg.corrector.tol = parse_real(key, v);
  else if (key == "hull.delta") cfg.hull.delta = parse_real(key, v);
  else if (key == "hull.p0") cfg.hull.p0 = parse_real(key, v);
  else if (key == "hull.L") cfg.hull.L = parse_real(key, v);
  else if (key == "hull.tol") cfg.hull.tol = parse_real(key, v);
  else if (key == "hull.n") cfg.hull.n = parse_int(key, v);
  else if (key == "hull.x_min") cfg.hull.x_min = parse_real(key, v);
  else if (key == "hull.x_max") cfg.hull.x_max = parse_real(key, v);
  else if (key == "hull.x_count") cfg.hull.x_count = static_cast<int>(parse_int(key, v));
  else if (key == "cell.p0") cfg.cell.p0 = parse_real(key, v);
  else if (key == "cell.L0") cfg.cell.L0 = parse_real(key, v);
  else if (key == "cell.deltas") cfg.cell.deltas = parse_list(key, v);
  else if (key == "cell.delta") cfg.cell.delta = parse_real(key, v);
  else if (key == "cell.dt") cfg.cell.dt = parse_real(key, v);
  else if (key == "cell.T") cfg.cell.T = parse_real(key, v);
  else if (key == "cell.burn_in") cfg.cell.burn_in = parse_real(key, v);
  else if (key == "cell.points_per_unit") cfg.cell.points_per_unit = static_cast<int>(parse_int(key, v));
  else if (key == "particles.N") cfg.particles.N = static_cast<int>(parse_int(key, v));
  else if (key == "particles.spacing") cfg.particles.spacing = parse_real(key, v);
  else if (key == "particles.L0") cfg.particles.L0 = parse_real(key, v);
  else if (key == "particles.c0") cfg.particles.c0 = parse_real(key, v);
  else if (key == "particles.T") cfg.particles.T = parse_real(key, v);
  else if (key == "particles.dt") cfg.particles.dt = parse_real(key, v);
  else if (key == "particles.wrap") cfg.particles.wrap = parse_bool(key, v);
  else if (key == "particles.images") cfg.particles.images = static_cast<int>(parse_int(key, v));
  else if (key == "output.dir") cfg.output.dir = v;
  else if (key == "output.emit_plot_data") cfg.output.emit_plot_data = parse_bool(key, v);
  else throw ConfigError("unknown config key '" + key + "'");
}

void validate_config(const RunConfig& cfg) {
  make_potential(cfg.potential);  // throws on unknown label

  LevyQuadratureConfig levy;
  levy.r = cfg.levy.r;
  levy.R = cfg.levy.R;
  levy.nodes_per_decade = cfg.levy.nodes_per_decade;
  validate_levy_config(levy);

  if (!(cfg.layer.X >= 20.0)) throw ConfigError("layer.X: half width must be >= 20");
  if (cfg.layer.count < 512 || cfg.layer.count % 2 != 0)
    throw ConfigError("layer.count: must be an even integer >= 512");
  if (!(cfg.layer.tol > 0.0)) throw ConfigError("layer.tol: must be positive");
  if (!(cfg.corrector.tol > 0.0)) throw ConfigError("corrector.tol: must be positive");

  if (!(cfg.hull.delta > 0.0)) throw ConfigError("hull.delta: must be positive");
  if (cfg.hull.p0 == 0.0) throw ConfigError("hull.p0: must be nonzero");
  if (1.0 / (cfg.hull.delta * std::abs(cfg.hull.p0)) < 2.0)
    throw ConfigError("hull: requires 1/(delta |p0|) >= 2");
  if (!(cfg.hull.tol > 0.0)) throw ConfigError("hull.tol: must be positive");
  if (cfg.hull.n < 1) throw ConfigError("hull.n: must be >= 1");
  if (cfg.hull.x_count < 1) throw ConfigError("hull.x_count: must be >= 1");
  if (!(cfg.hull.x_max >= cfg.hull.x_min)) throw ConfigError("hull.x_max: must be >= hull.x_min");

  if (cfg.cell.p0 == 0.0) throw ConfigError("cell.p0: must be nonzero");
  if (cfg.cell.deltas.empty()) throw ConfigError("cell.deltas: must be nonempty");
  for (std::size_t i = 0; i < cfg.cell.deltas.size(); ++i) {
    if (!(cfg.cell.deltas[i] > 0.0)) throw ConfigError("cell.deltas: must be positive");
    if (i > 0 && !(cfg.cell.deltas[i] < cfg.cell.deltas[i - 1]))
      throw ConfigError("cell.deltas: must be sorted descending");
  }
  if (cfg.cell.delta < 0.0) throw ConfigError("cell.delta: must be >= 0 (0 = first of deltas)");
  if (cfg.cell.dt < 0.0) throw ConfigError("cell.dt: must be >= 0 (0 = auto)");
  if (cfg.cell.T < 0.0) throw ConfigError("cell.T: must be >= 0 (0 = auto)");
  if (!(cfg.cell.burn_in >= 0.0) || !(cfg.cell.burn_in < 1.0))
    throw ConfigError("cell.burn_in: must lie in [0, 1)");
  if (cfg.cell.points_per_unit < 4) throw ConfigError("cell.points_per_unit: must be >= 4");

  if (cfg.particles.N < 1) throw ConfigError("particles.N: must be >= 1");
  if (!(cfg.particles.spacing > 0.0)) throw ConfigError("particles.spacing: must be positive");
  if (!(cfg.particles.T > 0.0)) throw ConfigError("particles.T: must be positive");
  if (!(cfg.particles.dt > 0.0)) throw ConfigError("particles.dt: must be positive");
  if (cfg.particles.images < 1) throw ConfigError("particles.images: must be >= 1");

  if (cfg.output.dir.empty()) throw ConfigError("output.dir: must be nonempty");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "config line " << lineno << ": expected 'key = value'";
      throw ConfigError(msg.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_override(cfg, key, value);
    } catch (const ConfigError& e) {
      std::ostringstream msg;
      msg << "config line " << lineno << ": " << e.what();
      throw ConfigError(msg.str());
    }
  }
  validate_config(cfg);
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["potential"] = "\"" + cfg.potential + "\"";
  kv["levy.r"] = format_value(cfg.levy.r);
  kv["levy.R"] = format_value(cfg.levy.R);
  kv["levy.nodes_per_decade"] = std::to_string(cfg.levy.nodes_per_decade);
  kv["layer.X"] = format_value(cfg.layer.X);
  kv["layer.count"] = std::to_string(cfg.layer.count);
  kv["layer.tol"] = format_value(cfg.layer.tol);
  kv["corrector.L"] = format_value(cfg.corrector.L);
  kv["corrector.tol"] = format_value(cfg.corrector.tol);
  kv["hull.delta"] = format_value(cfg.hull.delta);
  kv["hull.p0"] = format_value(cfg.hull.p0);
  kv["hull.L"] = format_value(cfg.hull.L);
  kv["hull.tol"] = format_value(cfg.hull.tol);
  kv["hull.n"] = std::to_string(cfg.hull.n);
  kv["hull.x_min"] = format_value(cfg.hull.x_min);
  kv["hull.x_max"] = format_value(cfg.hull.x_max);
  kv["hull.x_count"] = std::to_string(cfg.hull.x_count);
  kv["cell.p0"] = format_value(cfg.cell.p0);
  kv["cell.L0"] = format_value(cfg.cell.L0);
  {
    std::string l;
    for (std::size_t i = 0; i < cfg.cell.deltas.size(); ++i) {
      if (i) l += ",";
      l += format_value(cfg.cell.deltas[i]);
    }
    kv["cell.deltas"] = l;
  }
  kv["cell.delta"] = format_value(cfg.cell.delta);
  kv["cell.dt"] = format_value(cfg.cell.dt);
  kv["cell.T"] = format_value(cfg.cell.T);
  kv["cell.burn_in"] = format_value(cfg.cell.burn_in);
  kv["cell.points_per_unit"] = std::to_string(cfg.cell.points_per_unit);
  kv["particles.N"] = std::to_string(cfg.particles.N);
  kv["particles.spacing"] = format_value(cfg.particles.spacing);
  kv["particles.L0"] = format_value(cfg.particles.L0);
  kv["particles.c0"] = format_value(cfg.particles.c0);
  kv["particles.T"] = format_value(cfg.particles.T);
  kv["particles.dt"] = format_value(cfg.particles.dt);
  kv["particles.wrap"] = cfg.particles.wrap ? "true" : "false";
  kv["particles.images"] = std::to_string(cfg.particles.images);
  kv["output.dir"] = "\"" + cfg.output.dir + "\"";
  kv["output.emit_plot_data"] = cfg.output.emit_plot_data ? "true" : "false";

  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

}  // namespace pnlab
