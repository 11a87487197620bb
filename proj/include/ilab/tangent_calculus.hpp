#pragma once

// Orthogonal decomposition onto divergence-free fields with matching normal
// traces, the normal potentials p_{w,v} of the second fundamental form, and the
// surface-area gradient.

#include <memory>

#include "ilab/velocity.hpp"

namespace ilab {

/// Two-sided potential psi = (1/rho±) H±(psi^S) + u±, where -Delta u± = source and u± = 0 on S.
class NormalPotential : public std::enable_shared_from_this<NormalPotential> {
 public:
  NormalPotential(OperatorsPtr ops, VectorXd surface_value, double rho_plus, double rho_minus,
                  std::shared_ptr<const PoissonSolution> source_plus,
                  std::shared_ptr<const PoissonSolution> source_minus);

  /// psi^S = rho+ psi+ = rho- psi- on S.
  const VectorXd& surface_value() const { return surface_; }
  VectorXd trace(Side side) const;
  double value(Complex z, Side side) const;
  Complex gradient(Complex z, Side side) const;
  /// Five-point Laplacian probe of value().
  double laplacian_probe(Complex z, Side side, double step = 1e-3) const;
  /// rho+ psi+ - rho- psi- on S from the two one-sided representations.
  double surface_mismatch() const;
  /// grad psi as a side velocity (jacobian by centered differences of the gradient).
  SideVelocityPtr gradient_field(Side side) const;

 private:
  OperatorsPtr ops_;
  VectorXd surface_;
  double rho_plus_, rho_minus_;
  std::shared_ptr<const HarmonicExtension> ext_plus_, ext_minus_;
  std::shared_ptr<const PoissonSolution> src_plus_, src_minus_;
};

struct TangentProjection {
  TwoPhaseVelocity w;  // X + grad psi
  std::shared_ptr<const NormalPotential> psi;
};

/// w = X + grad psi with -Delta psi = div X and the boundary value that makes w
/// tangent (divergence free, w+^⊥ + w-^⊥ = 0) and L2(rho dx)-orthogonal to grad psi.
TangentProjection project_to_tangent(OperatorsPtr ops, SideVelocityPtr x_plus, SideVelocityPtr x_minus,
                                     double rho_plus, double rho_minus);

/// p_{w,v}: -Delta p = tr(Dv Dw) with the boundary value expressed through grad_w v.
std::shared_ptr<const NormalPotential> second_fundamental_pressure(const TwoPhaseVelocity& v,
                                                                   const TwoPhaseVelocity& w, double rho_plus,
                                                                   double rho_minus);

/// Right side of the duality identity for int g p^S_{w,v} dS:
/// -int w+^⊥ v+^⊥ (N+ + N-) N^{-1} g dS + sum over sides of int D^2(H N^{-1} g)(v, w) dx.
double second_fundamental_duality(const TwoPhaseVelocity& v, const TwoPhaseVelocity& w, const VectorXd& g,
                                  double rho_plus, double rho_minus);

/// Gradient field grad f with f± = ±(1/rho+ rho-) H± N^{-1} N∓ f0. It is tangent and
/// <grad f, w>_{rho dx} = int f0 w+^⊥ dS for tangent w.
/// Boundary traces (f+, f-) of the lemma potential.
std::pair<VectorXd, VectorXd> lemma_potential_traces(const CurveOperators& ops, const VectorXd& f0, double rho_plus,
                                                     double rho_minus);
TwoPhaseVelocity lemma_potential(OperatorsPtr ops, const VectorXd& f0, double rho_plus, double rho_minus);

/// S' = grad p_kappa, the lemma potential of kappa+ (mean removed).
TwoPhaseVelocity sprime_pressure(OperatorsPtr ops, double rho_plus, double rho_minus);

/// int rho a·b dx over both sides by volume quadrature.
double weighted_inner(const ClosedCurve& curve, const SideVelocity& a_plus, const SideVelocity& b_plus,
                      const SideVelocity& a_minus, const SideVelocity& b_minus, double rho_plus, double rho_minus);
double weighted_inner(const TwoPhaseVelocity& a, const TwoPhaseVelocity& b, double rho_plus, double rho_minus);

/// int rho grad p_vv · grad p_ww - rho |grad p_vw|^2 dx.
double curvature_form(const TwoPhaseVelocity& v, const TwoPhaseVelocity& w, double rho_plus, double rho_minus);

}  // namespace ilab
