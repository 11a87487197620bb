#include "ilab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ilab/errors.hpp"

namespace ilab {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

long to_int(const std::string& key, const std::string& v) {
  long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

std::vector<double> preset_args(const std::string& spec, const std::string& name, std::size_t count) {
  std::vector<double> out;
  std::stringstream ss(spec.substr(name.size() + 1));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(name, trim(item)));
  if (out.size() != count) throw ConfigError("config: preset '" + spec + "' has the wrong number of arguments");
  return out;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  return {{"rho_plus", format_double(rho_plus)},
          {"rho_minus", format_double(rho_minus)},
          {"n_nodes", std::to_string(n_nodes)},
          {"k_energy", std::to_string(k_energy)},
          {"dt", format_double(dt)},
          {"t_end", format_double(t_end)},
          {"cfl_safety", format_double(cfl_safety)},
          {"initial_curve", initial_curve},
          {"initial_gamma", initial_gamma},
          {"report_every", std::to_string(report_every)},
          {"output_dir", output_dir},
          {"c_cal", format_double(c_cal)},
          {"seed", std::to_string(seed)}};
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  RunConfig c;
  c.base_dir = base_dir;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "rho_plus") c.rho_plus = to_double(key, value);
    else if (key == "rho_minus") c.rho_minus = to_double(key, value);
    else if (key == "n_nodes") c.n_nodes = static_cast<int>(to_int(key, value));
    else if (key == "k_energy") c.k_energy = static_cast<int>(to_int(key, value));
    else if (key == "dt") c.dt = to_double(key, value);
    else if (key == "t_end") c.t_end = to_double(key, value);
    else if (key == "cfl_safety") c.cfl_safety = to_double(key, value);
    else if (key == "initial_curve") c.initial_curve = value;
    else if (key == "initial_gamma") c.initial_gamma = value;
    else if (key == "report_every") c.report_every = static_cast<int>(to_int(key, value));
    else if (key == "output_dir") c.output_dir = value;
    else if (key == "c_cal") c.c_cal = to_double(key, value);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, value));
    else throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (c.rho_plus <= 0.0 || c.rho_minus <= 0.0) throw ConfigError("config: densities must be positive");
  if (c.n_nodes < 8 || c.n_nodes > 4096 || c.n_nodes % 2 != 0) {
    throw ConfigError("config: n_nodes must be even and in [8, 4096]");
  }
  if (c.k_energy < 1) throw ConfigError("config: k_energy must be >= 1");
  if (c.dt < 0.0 || c.t_end < 0.0 || c.cfl_safety <= 0.0) throw ConfigError("config: dt, t_end, cfl_safety");
  if (c.report_every < 1) throw ConfigError("config: report_every must be >= 1");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.parent_path());
}

ClosedCurve build_initial_curve(const RunConfig& config) {
  const std::string& spec = config.initial_curve;
  const int n = config.n_nodes;
  if (starts_with(spec, "circle:")) {
    const auto a = preset_args(spec, "circle", 1);
    return ClosedCurve::circle(a[0], n);
  }
  if (starts_with(spec, "ellipse:")) {
    const auto a = preset_args(spec, "ellipse", 2);
    return ClosedCurve::ellipse(a[0], a[1], n);
  }
  if (starts_with(spec, "perturbed:")) {
    const auto a = preset_args(spec, "perturbed", 3);
    return ClosedCurve::perturbed_circle(a[0], static_cast<int>(a[1]), a[2], n);
  }
  std::filesystem::path path(spec);
  if (path.is_relative()) path = config.base_dir / path;
  std::ifstream in(path);
  if (!in) throw ConfigError("initial_curve: not a preset and no such file: " + spec);
  try {
    return read_curve_spec(in, n);
  } catch (const ContractError& e) {
    throw ConfigError(std::string("initial_curve: ") + e.what());
  }
}

SheetState build_initial_state(const RunConfig& config) {
  const ClosedCurve curve = reparametrize_equal_arclength(build_initial_curve(config));
  const int n = curve.size();
  VectorXd gamma = VectorXd::Zero(n);
  const std::string& g = config.initial_gamma;
  if (g == "zero") {
  } else if (starts_with(g, "uniform:")) {
    gamma.setConstant(preset_args(g, "uniform", 1)[0]);
  } else if (starts_with(g, "mode:")) {
    const auto a = preset_args(g, "mode", 2);
    for (int j = 0; j < n; ++j) gamma[j] = a[1] * std::cos(a[0] * 2.0 * kPi * j / n);
  } else {
    throw ConfigError("initial_gamma: expected zero, uniform:c or mode:m,amp");
  }
  return state_from_gamma(curve, gamma, config.rho_plus, config.rho_minus, curve.centroid());
}

double resolve_dt(const RunConfig& config, const SheetState& initial) {
  if (config.dt > 0.0) return config.dt;
  const double limit = 0.9 * max_stable_dt(initial, config.cfl_safety);
  if (config.t_end <= 0.0) return limit;
  return config.t_end / std::ceil(config.t_end / limit);
}

}  // namespace ilab
