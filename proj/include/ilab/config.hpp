#pragma once

// Flat key = value experiment configuration. Blank lines and '#' comments are
// ignored; unknown keys and malformed values raise ConfigError.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ilab/evolver.hpp"

namespace ilab {

struct RunConfig {
  double rho_plus = 1.0;
  double rho_minus = 1.0;
  int n_nodes = 64;
  int k_energy = 2;
  double dt = 0.0;  // 0: derive from the CFL limit
  double t_end = 1.0;
  double cfl_safety = 0.5;
  /// Preset "circle:R", "ellipse:a,b", "perturbed:R,m,eps", or a curve-spec v1 file.
  std::string initial_curve = "circle:1";
  /// "zero", "uniform:c" or "mode:m,amp" (gamma = amp cos(m alpha) per d alpha).
  std::string initial_gamma = "zero";
  int report_every = 1;
  std::string output_dir = "out";
  /// Stopping-rule constant C in E(t) <= 2 E(0) + C; negative disables the rule.
  double c_cal = -1.0;
  std::uint64_t seed = 0;

  /// Directory that relative curve-file paths are resolved against.
  std::filesystem::path base_dir;

  /// Resolved key/value pairs in a fixed order (for manifests).
  std::vector<std::pair<std::string, std::string>> entries() const;
};

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

ClosedCurve build_initial_curve(const RunConfig& config);
/// Initial state: the curve at equal arclength carrying the configured gamma,
/// circulation centered at the centroid.
SheetState build_initial_state(const RunConfig& config);
/// Step actually used: config.dt, or 0.9 of the CFL limit rounded so t_end is hit.
double resolve_dt(const RunConfig& config, const SheetState& initial);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace ilab
