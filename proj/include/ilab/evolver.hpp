#pragma once

// Irrotational two-density interface evolution.
//
// State: the curve nodes, the scalar Q = rho+ phi+ - rho- phihat- on S, and a
// conserved exterior circulation Gamma about a fixed interior point z0
// (phi- = phihat + Gamma theta / 2 pi). The sheet strength gamma is derived from
// the state on demand.
//
// Kinematics: psi = v·N+ = Nbar (Q - rho- N-^{-1} g0), g0 = d_N- (Gamma theta / 2 pi);
// phi+ = N+^{-1} psi, phihat = N-^{-1}(-psi - g0). Nodes move with X = psi N+ + T tau,
// where T keeps the parametrization at equal arclength.
// Dynamics (Bernoulli on both sides with p+ - p- = kappa+):
// dQ/dt = rho+ (X·v+ - |v+|^2/2) - rho- (X·grad phihat - |v-|^2/2) - kappa+ + c(t),
// with c(t) removing the mean.

#include <functional>
#include <string>
#include <vector>

#include "ilab/energy.hpp"
#include "ilab/velocity.hpp"

namespace ilab {

struct SheetState {
  ClosedCurve curve = ClosedCurve::circle(1.0, 16);
  VectorXd q;  // rho+ phi+ - rho- phihat- at the nodes
  double circulation = 0.0;
  Complex vortex_center = 0.0;
  double time = 0.0;
  double rho_plus = 1.0, rho_minus = 1.0;
  double initial_area = 0.0;
};

struct SheetKinematics {
  OperatorsPtr ops;
  VectorXd psi;          // normal velocity v·N+
  VectorXd phi_plus;     // interior potential trace
  VectorXd phi_hat;      // exterior single-valued potential trace
  VectorXd tangential;   // T, the reparametrization velocity
  VectorXcd v_plus, v_minus, average;  // one-sided traces and their mean W
  VectorXd gamma;        // (v-^⊤ - v+^⊤) |z_alpha|, sheet strength per d alpha
  double circulation = 0.0;
  Complex vortex_center = 0.0;

  /// Layer-potential velocity field reconstructed from the traces.
  TwoPhaseVelocity velocity() const;
};

SheetKinematics sheet_velocity(const SheetState& state);
SheetKinematics sheet_velocity(const SheetState& state, OperatorsPtr ops);

/// Principal-value Birkhoff-Rott velocity from gamma: conj(W) = -C[gamma / z_alpha].
VectorXcd birkhoff_rott(const CurveOperators& ops, const VectorXd& gamma);

/// Builds the state carrying sheet strength gamma on the curve (Gamma = int gamma d alpha).
SheetState state_from_gamma(const ClosedCurve& curve, const VectorXd& gamma, double rho_plus, double rho_minus,
                            Complex vortex_center);

struct StateRate {
  VectorXcd dz;
  VectorXd dq;
};

/// Time derivative of (nodes, Q). The 2/3 filter is applied when filter is true.
StateRate rhs(const SheetState& state, bool filter = true);

struct StepOptions {
  double cfl_safety = 0.5;
  bool filter = true;
  bool check_simple = true;
};

/// Largest admissible dt: cfl_safety sqrt(rho+ + rho-) (L/n)^{3/2}.
double max_stable_dt(const SheetState& state, double cfl_safety);

/// One classical RK4 step. Throws CflError above max_stable_dt and GeometryError on
/// self-intersection.
SheetState step(const SheetState& state, double dt, const StepOptions& options = {});

/// Initial state on an equal-arclength reparametrization of the curve.
SheetState make_state(const ClosedCurve& curve, const VectorXd& q, double rho_plus, double rho_minus,
                      double circulation = 0.0, Complex vortex_center = 0.0);

/// E0 from the state (boundary form; renormalized when Gamma != 0).
double state_energy_E0(const SheetState& state);
EnergyReport state_energy(const SheetState& state, int k);

struct RunOptions {
  double dt = 1e-3;
  double t_end = 1.0;
  int k_energy = 2;
  int report_every = 1;
  StepOptions step;
  /// Stopping rule: abort once E(t) > 2 E(0) + c_cal. Disabled when negative.
  double c_cal = -1.0;
};

enum class RunStatus { completed, energy_exceeded };

struct RunResult {
  RunStatus status = RunStatus::completed;
  SheetState final_state;
  std::vector<EnergyReport> reports;
  double area_drift = 0.0;       // relative
  double e0_drift = 0.0;         // relative, max over reports
  std::string diagnostic;
};

using StateObserver = std::function<void(const SheetState&, const EnergyReport&)>;
RunResult run(const SheetState& initial, const RunOptions& options, const StateObserver& observer = {});

struct EulerProbe {
  Complex point;
  Side side;
};

/// max |rho D_t v + grad p| over the probes, with D_t v from a five-point stencil of RK4
/// states at t ± dt, t ± 2 dt and p from the pressure solver at t. Converges like dt^4
/// until the spatial error floor.
double euler_residual(const SheetState& state, double dt, const std::vector<EulerProbe>& probes);

/// Real 4x4 linearization about a circle of radius R with exterior circulation
/// 2 pi R U, restricted to mode m: basis (eta cos, eta sin, Q cos, Q sin), where eta is
/// the normal displacement. Central differences of rhs() with step eps.
Eigen::Matrix4d mode_jacobian(double radius, double slip, double rho_plus, double rho_minus, int m, int n_nodes,
                              double eps = 1e-6);

}  // namespace ilab
