#include "ilab/velocity.hpp"

#include <cmath>

#include "ilab/errors.hpp"

namespace ilab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr Complex kI(0.0, 1.0);

Eigen::Matrix2d jacobian_of_conjugate(Complex da) {
  Eigen::Matrix2d j;
  j << da.real(), -da.imag(), -da.imag(), -da.real();
  return j;
}

double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }
}  // namespace

VectorXcd SideVelocity::trace(const ClosedCurve& curve) const {
  VectorXcd out(curve.size());
  for (int j = 0; j < curve.size(); ++j) out[j] = value(curve.nodes()[j]);
  return out;
}

PotentialVelocity::PotentialVelocity(std::shared_ptr<const HarmonicExtension> potential, double circulation,
                                     Complex vortex_center)
    : potential_(std::move(potential)), circulation_(circulation), center_(vortex_center) {}

std::pair<Complex, Complex> PotentialVelocity::analytic(Complex z) const {
  Complex a = 0.0, da = 0.0;
  if (potential_) {
    const AnalyticSample s = potential_->analytic(z);
    a = s.df;
    da = s.d2f;
  }
  if (circulation_ != 0.0) {
    const Complex dz = z - center_;
    a += -kI * circulation_ / (2.0 * kPi * dz);
    da += kI * circulation_ / (2.0 * kPi * dz * dz);
  }
  return {a, da};
}

Complex PotentialVelocity::value(Complex z) const { return std::conj(analytic(z).first); }

Eigen::Matrix2d PotentialVelocity::jacobian(Complex z) const { return jacobian_of_conjugate(analytic(z).second); }

VectorXcd PotentialVelocity::trace(const ClosedCurve& curve) const {
  VectorXcd out = potential_ ? potential_->boundary_gradient() : VectorXcd::Zero(curve.size());
  if (circulation_ != 0.0) {
    for (int j = 0; j < curve.size(); ++j) {
      out[j] += std::conj(-kI * circulation_ / (2.0 * kPi * (curve.nodes()[j] - center_)));
    }
  }
  return out;
}

ClosedFormVelocity::ClosedFormVelocity(std::function<Complex(Complex)> value,
                                       std::function<Eigen::Matrix2d(Complex)> jacobian, bool irrotational)
    : value_(std::move(value)), jacobian_(std::move(jacobian)), irrotational_(irrotational) {}

double TwoPhaseVelocity::matching_defect() const { return (normal_plus + normal_minus).cwiseAbs().maxCoeff(); }

double TwoPhaseVelocity::divergence_defect(int probes_per_side) const {
  const ClosedCurve& c = curve();
  const double offset = 0.1 * c.length() / (2.0 * kPi);
  const int stride = std::max(1, c.size() / probes_per_side);
  double worst = 0.0;
  for (int j = 0; j < c.size(); j += stride) {
    const Complex z = c.nodes()[j];
    const Complex n = c.normal()[j];
    worst = std::max(worst, std::abs(plus->jacobian(z - offset * n).trace()));
    worst = std::max(worst, std::abs(minus->jacobian(z + offset * n).trace()));
  }
  return worst;
}

TwoPhaseVelocity make_two_phase(OperatorsPtr ops, SideVelocityPtr plus, SideVelocityPtr minus,
                                Representation representation) {
  TwoPhaseVelocity v;
  v.ops = std::move(ops);
  v.plus = std::move(plus);
  v.minus = std::move(minus);
  v.representation = representation;
  const ClosedCurve& c = v.ops->curve();
  v.trace_plus = v.plus->trace(c);
  v.trace_minus = v.minus->trace(c);
  const int n = c.size();
  v.normal_plus.resize(n);
  v.normal_minus.resize(n);
  v.tangential_plus.resize(n);
  v.tangential_minus.resize(n);
  for (int j = 0; j < n; ++j) {
    v.normal_plus[j] = dot(v.trace_plus[j], c.normal()[j]);
    v.normal_minus[j] = -dot(v.trace_minus[j], c.normal()[j]);
    v.tangential_plus[j] = dot(v.trace_plus[j], c.tangent()[j]);
    v.tangential_minus[j] = dot(v.trace_minus[j], c.tangent()[j]);
  }
  return v;
}

TwoPhaseVelocity potential_flow(OperatorsPtr ops, const VectorXd& phi_plus, const VectorXd& phi_minus,
                                double circulation, Complex vortex_center) {
  auto ext_plus = std::make_shared<const HarmonicExtension>(ops, phi_plus, Side::interior);
  auto ext_minus = std::make_shared<const HarmonicExtension>(ops, phi_minus, Side::exterior);
  auto plus = std::make_shared<const PotentialVelocity>(ext_plus);
  auto minus = std::make_shared<const PotentialVelocity>(ext_minus, circulation, vortex_center);
  return make_two_phase(std::move(ops), plus, minus, Representation::harmonic_gradient);
}

VectorXd circulation_flux(const ClosedCurve& curve, Complex center) {
  VectorXd g(curve.size());
  for (int j = 0; j < curve.size(); ++j) {
    const Complex grad = kI / std::conj(curve.nodes()[j] - center) / (2.0 * kPi);
    g[j] = -dot(grad, curve.normal()[j]);
  }
  return g;
}

TwoPhaseVelocity flow_from_normal_velocity(OperatorsPtr ops, const VectorXd& normal_velocity, double circulation,
                                           Complex vortex_center) {
  const ClosedCurve& c = ops->curve();
  const double defect = std::abs(integrate(c, normal_velocity));
  if (defect > 1e-8 * std::sqrt(c.length()) * std::max(1.0, l2_norm(c, normal_velocity))) {
    throw ContractError("normal velocity must have zero flux");
  }
  const VectorXd phi_plus = dtn_inverse_side(*ops, normal_velocity, Side::interior);
  VectorXd g_minus = -normal_velocity;
  if (circulation != 0.0) g_minus -= circulation * circulation_flux(c, vortex_center);
  const VectorXd phi_minus = dtn_inverse_side(*ops, g_minus, Side::exterior);
  return potential_flow(std::move(ops), phi_plus, phi_minus, circulation, vortex_center);
}

double trace_product(const SideVelocity& v, const SideVelocity& w, Complex z) {
  return (v.jacobian(z) * w.jacobian(z)).trace();
}

PoissonSolution solve_trace_product(OperatorsPtr ops, SideVelocityPtr v, SideVelocityPtr w, Side side) {
  if (v->irrotational() && w->irrotational()) {
    // -Delta(-(v.w)/2) = tr(Dv Dw) for gradient fields.
    ParticularSolution part;
    part.value = [v, w](Complex z) { return -0.5 * dot(v->value(z), w->value(z)); };
    part.gradient = [v, w](Complex z) {
      const Complex a = v->value(z), b = w->value(z);
      const Eigen::Vector2d av(a.real(), a.imag()), bv(b.real(), b.imag());
      const Eigen::Vector2d g = -0.5 * (v->jacobian(z).transpose() * bv + w->jacobian(z).transpose() * av);
      return Complex(g[0], g[1]);
    };
    return PoissonSolution(std::move(ops), part, side);
  }
  const VolumeGrid grid = build_volume_grid(ops->curve(), side);
  const VectorXd source = grid.sample([&v, &w](Complex z) { return trace_product(*v, *w, z); });
  return poisson(std::move(ops), grid, source);
}

}  // namespace ilab
