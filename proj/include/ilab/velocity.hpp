#pragma once

// Velocity fields on the two sides of the interface and their boundary traces.
//
// Complex convention: a velocity is returned as v_x + i v_y, and
// jacobian(z)(i, j) = d v^i / d x^j.

#include <Eigen/Dense>
#include <functional>
#include <memory>

#include "ilab/layer_potentials.hpp"

namespace ilab {

class SideVelocity {
 public:
  virtual ~SideVelocity() = default;
  virtual Complex value(Complex z) const = 0;
  virtual Eigen::Matrix2d jacobian(Complex z) const = 0;
  /// True when the field is a gradient (symmetric jacobian).
  virtual bool irrotational() const { return false; }
  /// Values at the curve nodes (one-sided limits for layer-potential fields).
  virtual VectorXcd trace(const ClosedCurve& curve) const;
};

using SideVelocityPtr = std::shared_ptr<const SideVelocity>;

/// grad of (a harmonic extension + circulation * theta / 2 pi), theta = arg(z - z0).
class PotentialVelocity final : public SideVelocity {
 public:
  PotentialVelocity(std::shared_ptr<const HarmonicExtension> potential, double circulation = 0.0,
                    Complex vortex_center = 0.0);
  Complex value(Complex z) const override;
  Eigen::Matrix2d jacobian(Complex z) const override;
  bool irrotational() const override { return true; }
  VectorXcd trace(const ClosedCurve& curve) const override;

  const HarmonicExtension* potential() const { return potential_.get(); }
  double circulation() const { return circulation_; }
  Complex vortex_center() const { return center_; }

 private:
  /// v = conj(A), jacobian from A'.
  std::pair<Complex, Complex> analytic(Complex z) const;
  std::shared_ptr<const HarmonicExtension> potential_;
  double circulation_;
  Complex center_;
};

class ClosedFormVelocity final : public SideVelocity {
 public:
  ClosedFormVelocity(std::function<Complex(Complex)> value, std::function<Eigen::Matrix2d(Complex)> jacobian,
                     bool irrotational);
  Complex value(Complex z) const override { return value_(z); }
  Eigen::Matrix2d jacobian(Complex z) const override { return jacobian_(z); }
  bool irrotational() const override { return irrotational_; }

 private:
  std::function<Complex(Complex)> value_;
  std::function<Eigen::Matrix2d(Complex)> jacobian_;
  bool irrotational_;
};

class SumVelocity final : public SideVelocity {
 public:
  SumVelocity(SideVelocityPtr a, SideVelocityPtr b) : a_(std::move(a)), b_(std::move(b)) {}
  Complex value(Complex z) const override { return a_->value(z) + b_->value(z); }
  Eigen::Matrix2d jacobian(Complex z) const override { return a_->jacobian(z) + b_->jacobian(z); }
  bool irrotational() const override { return a_->irrotational() && b_->irrotational(); }
  VectorXcd trace(const ClosedCurve& curve) const override { return a_->trace(curve) + b_->trace(curve); }

 private:
  SideVelocityPtr a_, b_;
};

enum class Representation { harmonic_gradient, manufactured };

/// Velocity pair with traces on S. v±^⊥ = v±·N± (so matching reads v+^⊥ + v-^⊥ = 0),
/// v±^⊤ = v±·tau.
struct TwoPhaseVelocity {
  OperatorsPtr ops;
  SideVelocityPtr plus, minus;
  Representation representation = Representation::manufactured;
  VectorXcd trace_plus, trace_minus;
  VectorXd normal_plus, normal_minus, tangential_plus, tangential_minus;

  const ClosedCurve& curve() const { return ops->curve(); }
  const SideVelocity& side(Side s) const { return s == Side::interior ? *plus : *minus; }
  /// v+^⊤ - v-^⊤.
  VectorXd slip() const { return tangential_plus - tangential_minus; }
  /// max |v+^⊥ + v-^⊥|.
  double matching_defect() const;
  /// Max |div v| over probe points of both sides (jacobian trace).
  double divergence_defect(int probes_per_side = 64) const;
};

TwoPhaseVelocity make_two_phase(OperatorsPtr ops, SideVelocityPtr plus, SideVelocityPtr minus,
                                Representation representation);

/// Gradient flow from potential traces. The exterior may carry circulation about
/// vortex_center (a point inside the curve).
TwoPhaseVelocity potential_flow(OperatorsPtr ops, const VectorXd& phi_plus, const VectorXd& phi_minus,
                                double circulation = 0.0, Complex vortex_center = 0.0);

/// Gradient flow with prescribed normal velocity u = v·N+ (mean zero) and exterior circulation.
TwoPhaseVelocity flow_from_normal_velocity(OperatorsPtr ops, const VectorXd& normal_velocity,
                                           double circulation = 0.0, Complex vortex_center = 0.0);

/// Normal derivative along N- of theta / (2 pi), theta = arg(z - center).
VectorXd circulation_flux(const ClosedCurve& curve, Complex center);

/// tr(Dv Dw) at a point.
double trace_product(const SideVelocity& v, const SideVelocity& w, Complex z);

/// -Delta u = tr(Dv Dw) on one side with u = 0 on S, u bounded. Closed form when both
/// fields are gradients; otherwise a fitted source on the volume grid.
PoissonSolution solve_trace_product(OperatorsPtr ops, SideVelocityPtr v, SideVelocityPtr w, Side side);

}  // namespace ilab
