#pragma once

// Pressure reconstruction from the velocity: -Delta p = rho tr(Dv)^2 on each
// side, p+ - p- = kappa+ on S, and the normal-acceleration compatibility that
// fixes the common boundary value through N^{-1}.

#include <memory>

#include "ilab/velocity.hpp"

namespace ilab {

struct PressureTrace {
  VectorXd plus, minus;
  /// |int arg dS| / (sqrt(L) ||arg||) of the N^{-1} argument before projection.
  double mean_defect = 0.0;
};

/// Throws ContractError("inconsistent input velocity") if the mean defect exceeds 1e-6.
PressureTrace pressure_trace(const TwoPhaseVelocity& vel, double rho_plus, double rho_minus);

class PressureField {
 public:
  PressureField(const TwoPhaseVelocity& vel, double rho_plus, double rho_minus);

  const PressureTrace& trace() const { return trace_; }
  double value(Complex z, Side side) const;
  Complex gradient(Complex z, Side side) const;
  /// max |p+ - p- - kappa+| over the nodes, from the side evaluators.
  double jump_residual() const;

  /// Splitting components on S: p_kappa± and p_vv± traces.
  const VectorXd& p_kappa(Side side) const { return side == Side::interior ? kappa_plus_ : kappa_minus_; }
  const VectorXd& p_vv(Side side) const { return side == Side::interior ? vv_plus_ : vv_minus_; }
  /// Relative L2(S) defect of rho (p_vv + p_kappa) - p, modulo a constant per side.
  double splitting_defect() const;

 private:
  OperatorsPtr ops_;
  double rho_plus_, rho_minus_;
  PressureTrace trace_;
  std::shared_ptr<const HarmonicExtension> ext_plus_, ext_minus_;
  std::shared_ptr<const PoissonSolution> src_plus_, src_minus_;
  VectorXd kappa_plus_, kappa_minus_, vv_plus_, vv_minus_;
};

std::shared_ptr<const PressureField> pressure_field(const TwoPhaseVelocity& vel, double rho_plus, double rho_minus);

}  // namespace ilab
