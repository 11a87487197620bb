#include "cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "ilab/config.hpp"
#include "ilab/errors.hpp"
#include "ilab/evolver.hpp"
#include "ilab/linearized.hpp"
#include "ilab/pressure.hpp"

#ifndef ILAB_VERSION
#define ILAB_VERSION "unknown"
#endif

namespace ilab::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

struct ModeRange {
  int first = 1, last = 16;
};

ModeRange parse_modes(const std::string& s) {
  const auto dots = s.find("..");
  ModeRange r;
  try {
    if (dots == std::string::npos) {
      r.first = r.last = std::stoi(s);
    } else {
      r.first = std::stoi(s.substr(0, dots));
      r.last = std::stoi(s.substr(dots + 2));
    }
  } catch (const std::exception&) {
    throw ConfigError("--modes expects a..b, got '" + s + "'");
  }
  if (r.first < 1 || r.last < r.first) throw ConfigError("--modes: need 1 <= a <= b");
  return r;
}

int thread_cap() {
  const char* env = std::getenv("INTERFACE_LAB_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw ConfigError("INTERFACE_LAB_THREADS must be a positive integer");
  return static_cast<int>(n);
}

void write_manifest(const fs::path& dir, const std::string& command, const ordered_json& config, std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
  ordered_json m;
  m["subcommand"] = command;
  m["version"] = ILAB_VERSION;
  m["seed"] = seed;
  m["config"] = config;
  m["outputs"] = outputs;
  std::ofstream(dir / "manifest.json") << m.dump(2) << "\n";
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : c.entries()) j[k] = v;
  return j;
}

std::string row(std::initializer_list<double> values) {
  std::string s;
  for (double v : values) {
    if (!s.empty()) s += ',';
    s += format_double(v);
  }
  return s;
}

/// Curve presets shared by the operator and pressure subcommands.
struct CurveOptions {
  std::string preset = "circle";
  double radius = 1.0, a = 1.3, b = 0.8, eps = 0.1;
  int mode = 3, n_nodes = 128;

  ClosedCurve build() const {
    if (preset == "circle") return ClosedCurve::circle(radius, n_nodes);
    if (preset == "ellipse") return ClosedCurve::ellipse(a, b, n_nodes);
    if (preset == "perturbed") {
      return reparametrize_equal_arclength(ClosedCurve::perturbed_circle(radius, mode, eps, n_nodes));
    }
    throw ConfigError("unknown preset '" + preset + "' (circle, ellipse, perturbed)");
  }
  ordered_json json() const {
    return {{"preset", preset}, {"radius", radius}, {"a", a}, {"b", b}, {"mode", mode}, {"eps", eps},
            {"n_nodes", n_nodes}};
  }
};

void add_curve_options(CLI::App* app, CurveOptions& c) {
  app->add_option("--preset", c.preset, "circle | ellipse | perturbed");
  app->add_option("--radius", c.radius, "circle or perturbed-circle radius");
  app->add_option("--a", c.a, "ellipse semi-axis along x");
  app->add_option("--b", c.b, "ellipse semi-axis along y");
  app->add_option("--mode", c.mode, "perturbation mode");
  app->add_option("--eps", c.eps, "relative perturbation amplitude");
  app->add_option("--n-nodes", c.n_nodes, "collocation nodes");
}

double weighted_asymmetry(const ClosedCurve& c, const MatrixXd& a) {
  const MatrixXd wa = c.weights().asDiagonal() * a;
  return (wa - wa.transpose()).norm() / wa.norm();
}

VectorXd cos_mode(int n, int m) {
  VectorXd f(n);
  for (int j = 0; j < n; ++j) f[j] = std::cos(m * 2.0 * kPi * j / n);
  return f;
}

// ------------------------------------------------------------------ commands

int run_simulate(const std::string& config_path, const std::string& out_override, std::ostream& out) {
  RunConfig config = load_config(config_path);
  if (!out_override.empty()) config.output_dir = out_override;
  const fs::path dir(config.output_dir);
  fs::create_directories(dir / "states");
  write_manifest(dir, "simulate", config_json(config), config.seed,
                 {"energy.csv", "digest.csv", "states/", "summary.json"});

  const SheetState initial = build_initial_state(config);
  RunOptions opt;
  opt.dt = resolve_dt(config, initial);
  opt.t_end = config.t_end;
  opt.k_energy = config.k_energy;
  opt.report_every = config.report_every;
  opt.step.cfl_safety = config.cfl_safety;
  opt.c_cal = config.c_cal;

  std::ofstream energy(dir / "energy.csv");
  write_energy_header(energy);
  std::ofstream digest(dir / "digest.csv");
  digest << "index,time,area,length,max_abs_gamma,circulation,curve_hash\n";
  int index = 0;
  const StateObserver observer = [&](const SheetState& s, const EnergyReport& rep) {
    write_energy_row(energy, rep);
    const SheetKinematics k = sheet_velocity(s);
    digest << index << ',' << row({s.time, s.curve.area(), s.curve.length(), k.gamma.cwiseAbs().maxCoeff(),
                                   s.circulation})
           << ',' << s.curve.hash() << '\n';
    char name[32];
    std::snprintf(name, sizeof(name), "state_%06d.curve", index);
    std::ofstream curve_file(dir / "states" / name);
    write_curve_spec(curve_file, s.curve);
    ++index;
  };
  const RunResult result = run(initial, opt, observer);

  ordered_json summary;
  summary["status"] = result.status == RunStatus::completed ? "completed" : "energy_exceeded";
  summary["dt"] = format_double(opt.dt);
  summary["final_time"] = format_double(result.final_state.time);
  summary["e0_drift"] = format_double(result.e0_drift);
  summary["area_drift"] = format_double(result.area_drift);
  summary["reports"] = result.reports.size();
  summary["resolved"] = result.final_state.curve.resolved();
  summary["diagnostic"] = result.diagnostic;
  std::ofstream(dir / "summary.json") << summary.dump(2) << "\n";

  out << "simulate: " << summary["status"].get<std::string>() << ", t = " << result.final_state.time
      << ", E0 drift " << result.e0_drift << ", area drift " << result.area_drift << "\n";
  if (result.status == RunStatus::energy_exceeded) {
    std::ofstream(dir / "diagnostic.txt") << "energy monitor: " << result.diagnostic << "\n";
    return 3;
  }
  return 0;
}

int run_dispersion(const LinearizedSymbol& p, const ModeRange& modes, const fs::path& dir, std::ostream& out) {
  fs::create_directories(dir);
  ordered_json cfg = {{"rho_plus", p.rho_plus},
                      {"rho_minus", p.rho_minus},
                      {"slip", p.delta_u},
                      {"geometry", p.geometry == Geometry::flat ? "flat" : "circle"},
                      {"radius", p.radius},
                      {"modes", std::to_string(modes.first) + ".." + std::to_string(modes.last)}};
  write_manifest(dir, "dispersion", cfg, 0, {"dispersion.csv"});
  std::ofstream csv(dir / "dispersion.csv");
  csv << "mode,re_lambda_plus,im_lambda_plus,re_lambda_minus,im_lambda_minus,growth_rate\n";
  for (int m = modes.first; m <= modes.last; ++m) {
    const DispersionPair d = dispersion(p, m);
    csv << m << ',' << row({d.lambda_plus.real(), d.lambda_plus.imag(), d.lambda_minus.real(),
                            d.lambda_minus.imag(), d.growth_rate()})
        << '\n';
  }
  const auto threshold = stability_threshold(p);
  out << "dispersion: threshold " << (threshold ? format_double(*threshold) : std::string("none")) << "\n";
  return 0;
}

int run_operators(const CurveOptions& co, const ModeRange& modes, double rho_plus, double rho_minus, double slip,
                  const fs::path& dir, std::ostream& out) {
  fs::create_directories(dir);
  ordered_json cfg = co.json();
  cfg["rho_plus"] = rho_plus;
  cfg["rho_minus"] = rho_minus;
  cfg["slip"] = slip;
  cfg["modes"] = std::to_string(modes.first) + ".." + std::to_string(modes.last);
  write_manifest(dir, "operators", cfg, 0, {"operators.csv", "residuals.csv"});

  const ClosedCurve curve = co.build();
  const int n = curve.size();
  if (2 * modes.last + 2 > n) throw ConfigError("--modes exceeds the resolved range for --n-nodes");
  const auto ops = make_operators(curve);
  const TwoPhaseVelocity base =
      flow_from_normal_velocity(ops, VectorXd::Zero(n), -slip * curve.length(), curve.centroid());

  std::ofstream csv(dir / "operators.csv");
  csv << "mode,dtn_plus,dtn_minus,nbar,surface_tension,kelvin_helmholtz\n";
  for (int m = modes.first; m <= modes.last; ++m) {
    // Rayleigh quotients on cos(m alpha); eigenvalues on a circle
    const VectorXd f = project_mean_zero(curve, cos_mode(n, m));
    const double norm2 = inner(curve, f, f);
    const TwoPhaseVelocity w = flow_from_normal_velocity(ops, f);
    csv << m << ','
        << row({inner(curve, f, dtn(*ops, f, Side::interior)) / norm2,
                inner(curve, f, dtn(*ops, f, Side::exterior)) / norm2,
                inner(curve, f, dtn_bar(*ops, f, rho_plus, rho_minus)) / norm2, form_A_boundary(w) / norm2,
                form_R0_boundary(base, w, rho_plus, rho_minus) / norm2})
        << '\n';
  }

  std::ofstream res(dir / "residuals.csv");
  res << "quantity,value\n";
  MatrixXd nbar(n, n);
  for (int j = 0; j < n; ++j) nbar.col(j) = dtn_bar(*ops, VectorXd::Unit(n, j), rho_plus, rho_minus);
  res << "asymmetry_dtn_plus," << format_double(weighted_asymmetry(curve, ops->dtn(Side::interior))) << '\n';
  res << "asymmetry_dtn_minus," << format_double(weighted_asymmetry(curve, ops->dtn(Side::exterior))) << '\n';
  res << "asymmetry_nbar," << format_double(weighted_asymmetry(curve, nbar)) << '\n';
  res << "asymmetry_surface_laplacian," << format_double(weighted_asymmetry(curve, surface_laplacian_matrix(curve)))
      << '\n';
  res << "cn_defect_plus," << format_double(cn_defect_norm(*ops, Side::interior)) << '\n';
  res << "cn_defect_minus," << format_double(cn_defect_norm(*ops, Side::exterior)) << '\n';
  const VectorXd g = project_mean_zero(curve, cos_mode(n, 2) + 0.5 * cos_mode(n, 5));
  const VectorXd h = dtn_inverse(*ops, g, rho_plus, rho_minus);
  const VectorXd back = dtn_combined(*ops, h, rho_plus, rho_minus);
  res << "dtn_inverse_round_trip," << format_double(l2_norm(curve, back - g) / l2_norm(curve, g)) << '\n';
  out << "operators: " << modes.last - modes.first + 1 << " modes on " << co.preset << " (n = " << n << ")\n";
  return 0;
}

int run_pressure_test(const CurveOptions& co, double rho_plus, double rho_minus, const fs::path& dir,
                      std::ostream& out) {
  fs::create_directories(dir);
  ordered_json cfg = co.json();
  cfg["rho_plus"] = rho_plus;
  cfg["rho_minus"] = rho_minus;
  write_manifest(dir, "pressure-test", cfg, 0, {"pressure.csv"});

  std::ofstream csv(dir / "pressure.csv");
  csv << "check,value,threshold,pass\n";
  bool all = true;
  auto emit = [&](const std::string& name, double value, double threshold) {
    const bool pass = value < threshold;
    all = all && pass;
    csv << name << ',' << format_double(value) << ',' << format_double(threshold) << ',' << (pass ? 1 : 0) << '\n';
  };

  const int n = co.n_nodes;
  {
    const auto ops = make_operators(ClosedCurve::circle(co.radius, n));
    const auto p = pressure_field(flow_from_normal_velocity(ops, VectorXd::Zero(n)), rho_plus, rho_minus);
    const VectorXd jump = p->trace().plus - p->trace().minus;
    emit("static_jump_error", (jump.array() - 1.0 / co.radius).abs().maxCoeff(), 1e-10);
  }
  const ClosedCurve curve = co.build();
  VectorXd q(n);
  for (int j = 0; j < n; ++j) {
    const double a = 2.0 * kPi * j / n;
    q[j] = 0.5 * std::cos(2.0 * a) + 0.3 * std::sin(3.0 * a);
  }
  const SheetState s = make_state(curve, q, rho_plus, rho_minus);
  const TwoPhaseVelocity vel = sheet_velocity(s).velocity();
  const auto p = pressure_field(vel, rho_plus, rho_minus);
  emit("dynamic_jump_residual", p->jump_residual(), 1e-6);
  emit("mean_defect", p->trace().mean_defect, 1e-6);
  emit("splitting_defect", p->splitting_defect(), 1e-6);

  const Complex c = s.curve.centroid();
  const double r = std::sqrt(s.curve.area() / kPi);
  const std::vector<EulerProbe> probes = {{c + 0.3 * r, Side::interior},
                                          {c + Complex(-0.2, 0.4) * r, Side::interior},
                                          {c + Complex(1.8, 0.3) * r, Side::exterior},
                                          {c + Complex(-1.2, -1.5) * r, Side::exterior}};
  const double coarse = euler_residual(s, 0.04, probes);
  const double fine = euler_residual(s, 0.02, probes);
  csv << "euler_residual_dt_0.04," << format_double(coarse) << ",,\n";
  csv << "euler_residual_dt_0.02," << format_double(fine) << ",,\n";
  const double order = std::log2(coarse / fine);
  const bool order_ok = order > 3.5 || fine < 1e-10;
  all = all && order_ok;
  csv << "euler_order," << format_double(order) << ",3.5," << (order_ok ? 1 : 0) << '\n';
  out << "pressure-test: " << (all ? "all checks pass" : "some checks FAIL") << "\n";
  return 0;
}

int run_energy(const std::string& config_path, const std::string& out_override, std::ostream& out) {
  RunConfig config = load_config(config_path);
  if (!out_override.empty()) config.output_dir = out_override;
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  write_manifest(dir, "energy", config_json(config), config.seed, {"energy.csv"});
  const EnergyReport rep = state_energy(build_initial_state(config), config.k_energy);
  std::ofstream csv(dir / "energy.csv");
  write_energy_header(csv);
  write_energy_row(csv, rep);
  out << "energy: E0 = " << rep.e0 << ", E = " << rep.total() << "\n";
  return 0;
}

int run_convergence(const std::string& config_path, const std::string& out_override, int levels, std::ostream& out) {
  RunConfig config = load_config(config_path);
  if (!out_override.empty()) config.output_dir = out_override;
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  ordered_json cfg = config_json(config);
  cfg["levels"] = levels;
  write_manifest(dir, "convergence", cfg, config.seed, {"convergence.csv"});

  std::vector<int> sizes;
  std::vector<EnergyReport> reports;
  for (int l = 0; l < levels; ++l) {
    RunConfig c = config;
    c.n_nodes = config.n_nodes << l;
    sizes.push_back(c.n_nodes);
    reports.push_back(state_energy(build_initial_state(c), c.k_energy));
  }
  const EnergyReport& ref = reports.back();
  std::ofstream csv(dir / "convergence.csv");
  csv << "n_nodes,E0,E_A,E_kappa,kappa_norm,normal_norm,E0_error,E_A_error,E_kappa_error\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const EnergyReport& r = reports[i];
    csv << sizes[i] << ','
        << row({r.e0, r.e_a, r.e_kappa, r.kappa_norm, r.normal_norm, std::abs(r.e0 - ref.e0),
                std::abs(r.e_a - ref.e_a), std::abs(r.e_kappa - ref.e_kappa)})
        << '\n';
  }
  out << "convergence: " << levels << " levels from n = " << config.n_nodes << "\n";
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-fluid interface laboratory", "interface_lab"};
  app.require_subcommand(1);
  std::string output_dir;

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "evolve an interface from a config file");
  simulate->add_option("--config", config_path, "key = value config")->required();
  simulate->add_option("--output-dir", output_dir, "overrides output_dir from the config");

  LinearizedSymbol sym;
  std::string modes_text = "1..16", geometry = "flat";
  auto* disp = app.add_subcommand("dispersion", "mode sweep of the linearized growth rates");
  disp->add_option("--rho-plus", sym.rho_plus);
  disp->add_option("--rho-minus", sym.rho_minus);
  disp->add_option("--slip", sym.delta_u, "tangential velocity jump");
  disp->add_option("--modes", modes_text, "a..b");
  disp->add_option("--geometry", geometry, "flat | circle");
  disp->add_option("--radius", sym.radius);
  disp->add_option("--output-dir", output_dir);

  CurveOptions curve;
  double rho_plus = 1.0, rho_minus = 1.0, slip = 0.0;
  auto* ops = app.add_subcommand("operators", "operator spectra and identity residuals");
  add_curve_options(ops, curve);
  ops->add_option("--modes", modes_text, "a..b");
  ops->add_option("--rho-plus", rho_plus);
  ops->add_option("--rho-minus", rho_minus);
  ops->add_option("--slip", slip, "slip of the base flow used for the Kelvin-Helmholtz column");
  ops->add_option("--output-dir", output_dir);

  auto* pressure = app.add_subcommand("pressure-test", "pressure reconstruction residuals");
  add_curve_options(pressure, curve);
  pressure->add_option("--rho-plus", rho_plus);
  pressure->add_option("--rho-minus", rho_minus);
  pressure->add_option("--output-dir", output_dir);

  auto* energy = app.add_subcommand("energy", "energy report of the configured initial state");
  energy->add_option("--config", config_path)->required();
  energy->add_option("--output-dir", output_dir);

  int levels = 4;
  auto* conv = app.add_subcommand("convergence", "node-doubling study of the initial-state energies");
  conv->add_option("--config", config_path)->required();
  conv->add_option("--levels", levels)->check(CLI::Range(2, 6));
  conv->add_option("--output-dir", output_dir);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  const fs::path fallback_dir = output_dir.empty() ? fs::path("out") : fs::path(output_dir);
  fs::path diag_dir = fallback_dir;
  try {
    if (const int threads = thread_cap(); threads > 0) Eigen::setNbThreads(threads);
    if (*simulate || *energy || *conv) {
      RunConfig c = load_config(config_path);
      diag_dir = output_dir.empty() ? fs::path(c.output_dir) : fs::path(output_dir);
    }
    if (*simulate) return run_simulate(config_path, output_dir, out);
    if (*energy) return run_energy(config_path, output_dir, out);
    if (*conv) return run_convergence(config_path, output_dir, levels, out);
    if (*disp) {
      if (geometry == "flat") sym.geometry = Geometry::flat;
      else if (geometry == "circle") sym.geometry = Geometry::circle;
      else throw ConfigError("--geometry must be flat or circle");
      return run_dispersion(sym, parse_modes(modes_text), fallback_dir, out);
    }
    if (*ops) return run_operators(curve, parse_modes(modes_text), rho_plus, rho_minus, slip, fallback_dir, out);
    if (*pressure) return run_pressure_test(curve, rho_plus, rho_minus, fallback_dir, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ContractError& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    std::error_code ec;
    fs::create_directories(diag_dir, ec);
    std::ofstream diag(diag_dir / "diagnostic.txt");
    diag << "error: " << e.what() << "\n";
    if (const auto* cfl = dynamic_cast<const CflError*>(&e)) {
      diag << "suggested_dt: " << format_double(cfl->suggested_dt()) << "\n";
    }
    if (const auto* cond = dynamic_cast<const ConditioningError*>(&e)) {
      diag << "residual: " << format_double(cond->residual()) << "\n";
    }
    return 3;
  }
  return 2;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace ilab::cli
