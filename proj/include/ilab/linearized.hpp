#pragma once

// Leading-order linearized operators: the surface-tension operator A and the
// Kelvin-Helmholtz operator R0, their quadratic forms, and the mode-by-mode
// dispersion relation.

#include <optional>

#include "ilab/tangent_calculus.hpp"

namespace ilab {

/// A(w) = grad f, f the lemma potential of -Delta_S w+^⊥.
TwoPhaseVelocity apply_A(OperatorsPtr ops, const TwoPhaseVelocity& w, double rho_plus, double rho_minus);
/// R0(v)w = grad f, f the lemma potential of slip d/ds N^{-1} d/ds (w+^⊥ slip).
TwoPhaseVelocity apply_R0(OperatorsPtr ops, const TwoPhaseVelocity& v, const TwoPhaseVelocity& w, double rho_plus,
                          double rho_minus);

/// <A w, w>_{rho dx} by volume quadrature, and int |d/ds w+^⊥|^2 dS.
double form_A_volume(const TwoPhaseVelocity& w, double rho_plus, double rho_minus);
double form_A_boundary(const TwoPhaseVelocity& w);
/// <-R0(v) w, w>_{rho dx}, and int |N^{-1/2} d/ds (w+^⊥ slip)|^2 dS.
double form_R0_volume(const TwoPhaseVelocity& v, const TwoPhaseVelocity& w, double rho_plus, double rho_minus);
double form_R0_boundary(const TwoPhaseVelocity& v, const TwoPhaseVelocity& w, double rho_plus, double rho_minus);

/// N^{-1/2} on dS-mean-zero fields, from the eigendecomposition of the
/// W-symmetrized matrix W^{1/2} N W^{-1/2} (W = quadrature weights).
MatrixXd dtn_inverse_sqrt(const CurveOperators& ops, double rho_plus, double rho_minus);

/// L2(dS) operator norm of (-Delta_S)^{1/2} - N_side compressed to the modes |k| <= n/4.
double cn_defect_norm(const CurveOperators& ops, Side side);

enum class Geometry { flat, circle };

/// Base state: interior at rest, exterior tangential speed delta_u at the interface
/// (circle: potential vortex). Surface tension coefficient 1.
struct LinearizedSymbol {
  double rho_plus = 1.0, rho_minus = 1.0, delta_u = 0.0;
  Geometry geometry = Geometry::circle;
  double radius = 1.0;

  /// Leading-order symbols per unit kinetic energy: a(m) ~ m^3, r(m) ~ m^2.
  double a(double m) const;
  double r(double m) const;
};

struct DispersionPair {
  Complex lambda_plus, lambda_minus;
  double growth_rate() const { return std::max(lambda_plus.real(), lambda_minus.real()); }
};

/// Exponents lambda of perturbations exp(lambda t + i m theta) (circle) or
/// exp(lambda t + i k x) (flat, m read as wavenumber k).
DispersionPair dispersion(const LinearizedSymbol& params, double m);

/// Largest mode (continuous) with nonzero growth; nullopt if every mode is stable.
std::optional<double> stability_threshold(const LinearizedSymbol& params);

}  // namespace ilab
