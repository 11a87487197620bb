#pragma once

// Energy diagnostics: the conserved E0 = kinetic + perimeter, the higher-order
// energy E through its boundary-form identities, and the vorticity transport
// identity on closed-form polynomial flows.

#include <array>
#include <map>
#include <ostream>

#include "ilab/velocity.hpp"

namespace ilab {

/// int rho |v|^2 / 2 dx by volume quadrature plus perimeter. Requires a field
/// with finite kinetic energy (no exterior circulation).
double energy_E0(const TwoPhaseVelocity& vel, double rho_plus, double rho_minus);

/// Same quantity from the potential traces (harmonic-gradient fields only):
/// (1/2) sum rho± int phi± d_N± phi± dS + perimeter. With exterior circulation the
/// divergent part (Gamma/2pi)^2 pi log R_far is removed, which leaves a quantity
/// conserved by the dynamics.
double energy_E0_boundary(const TwoPhaseVelocity& vel, double rho_plus, double rho_minus);

struct EnergyReport {
  double time = 0.0;
  double e0 = 0.0;
  double e_a = 0.0;
  double e_kappa = 0.0;
  double e_omega = 0.0;
  int k = 2;
  double kappa_norm = 0.0;   // |kappa - mean|_{H^{3k/2-1}(S)}
  double normal_norm = 0.0;  // |v+^⊥|_{H^{3k/2-1/2}(S)}
  double total() const { return e_a + e_kappa + e_omega; }
};

/// E_A = int v+^⊥ (-Delta_S Nbar)^{k-1} (-Delta_S) v+^⊥ dS,
/// E_kappa = int kappa Nbar (-Delta_S Nbar)^{k-1} kappa dS,
/// E_omega = |omega|^2_{H^2} on the volume grids (zero for gradient fields).
EnergyReport energy_E(const TwoPhaseVelocity& vel, double rho_plus, double rho_minus, int k = 2);

/// The operator string v -> (-Delta_S Nbar)^{k-1} (-Delta_S) v as a matrix (for symmetry checks).
MatrixXd energy_operator_A(const CurveOperators& ops, double rho_plus, double rho_minus, int k);
MatrixXd energy_operator_kappa(const CurveOperators& ops, double rho_plus, double rho_minus, int k);

void write_energy_header(std::ostream& out);
void write_energy_row(std::ostream& out, const EnergyReport& report);

/// Polynomial in (t, x, y).
class Poly3 {
 public:
  using Key = std::array<int, 3>;
  Poly3() = default;
  static Poly3 constant(double c);
  static Poly3 monomial(double c, int t, int x, int y);
  double operator()(double t, double x, double y) const;
  Poly3 derivative(int variable) const;  // 0: t, 1: x, 2: y
  Poly3 operator+(const Poly3& o) const;
  Poly3 operator-(const Poly3& o) const;
  Poly3 operator*(const Poly3& o) const;
  Poly3 operator*(double s) const;

 private:
  std::map<Key, double> terms_;
};

/// Time-dependent velocity field v = (vx, vy).
struct PolynomialFlow {
  Poly3 vx, vy;
};

/// max |D_t omega - curl(D_t v) + (Dv)^T omega + omega Dv| over probe points, with
/// Dv_ij = d_i v^j and omega = Dv - Dv^T. The curl(D_t v) term vanishes for Euler flows.
double curl_evolution_residual(const PolynomialFlow& flow, const std::vector<std::array<double, 3>>& probes);

}  // namespace ilab
