#include "ilab/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "ilab/errors.hpp"
#include "ilab/tangent_calculus.hpp"

namespace ilab {

namespace {

struct Sources {
  std::shared_ptr<const PoissonSolution> plus, minus;
};

Sources trace_sources(const TwoPhaseVelocity& vel) {
  return {std::make_shared<const PoissonSolution>(solve_trace_product(vel.ops, vel.plus, vel.plus, Side::interior)),
          std::make_shared<const PoissonSolution>(solve_trace_product(vel.ops, vel.minus, vel.minus, Side::exterior))};
}

PressureTrace trace_from_sources(const TwoPhaseVelocity& vel, const Sources& src, double rho_plus, double rho_minus) {
  if (!(rho_plus > 0.0 && rho_minus > 0.0)) throw ContractError("densities must be positive");
  const CurveOperators& ops = *vel.ops;
  const ClosedCurve& c = ops.curve();
  const VectorXd& kappa = c.kappa();
  const VectorXd slip = vel.slip();
  const VectorXd terms[] = {
      ops.dtn(Side::exterior) * kappa / rho_minus,
      -src.plus->normal_derivative(),
      -src.minus->normal_derivative(),
      kappa.cwiseProduct(vel.tangential_plus.cwiseAbs2() - vel.tangential_minus.cwiseAbs2()),
      -2.0 * slip.cwiseProduct(surface_derivative(c, vel.normal_plus)),
  };
  VectorXd arg = VectorXd::Zero(c.size());
  // magnitude floor: N- acting on kappa scales like kappa / R
  double scale = l2_norm(c, kappa) * 2.0 * 3.14159265358979323846 / (c.length() * rho_minus);
  for (const auto& t : terms) {
    arg += t;
    scale += l2_norm(c, t);
  }
  // A static, constant-curvature state leaves only roundoff in the argument.
  if (l2_norm(c, arg) < 1e-13 * scale) arg.setZero();
  PressureTrace out;
  out.mean_defect = std::abs(integrate(c, arg)) / (std::sqrt(c.length()) * scale);
  if (out.mean_defect > 1e-6) {
    throw ContractError("inconsistent input velocity: pressure compatibility defect " +
                        std::to_string(out.mean_defect));
  }
  out.plus = dtn_inverse(ops, project_mean_zero(c, arg), rho_plus, rho_minus);
  out.minus = out.plus - kappa;
  return out;
}

double defect_mod_constant(const ClosedCurve& c, const VectorXd& a, const VectorXd& b) {
  const VectorXd d = project_mean_zero(c, a - b);
  const double scale =
      std::max({l2_norm(c, project_mean_zero(c, a)), l2_norm(c, project_mean_zero(c, b)), 1e-12});
  return l2_norm(c, d) / scale;
}

}  // namespace

PressureTrace pressure_trace(const TwoPhaseVelocity& vel, double rho_plus, double rho_minus) {
  return trace_from_sources(vel, trace_sources(vel), rho_plus, rho_minus);
}

PressureField::PressureField(const TwoPhaseVelocity& vel, double rho_plus, double rho_minus)
    : ops_(vel.ops), rho_plus_(rho_plus), rho_minus_(rho_minus) {
  const Sources src = trace_sources(vel);
  src_plus_ = src.plus;
  src_minus_ = src.minus;
  trace_ = trace_from_sources(vel, src, rho_plus, rho_minus);
  ext_plus_ = std::make_shared<const HarmonicExtension>(ops_, trace_.plus, Side::interior);
  ext_minus_ = std::make_shared<const HarmonicExtension>(ops_, trace_.minus, Side::exterior);

  const ClosedCurve& c = ops_->curve();
  std::tie(kappa_plus_, kappa_minus_) =
      lemma_potential_traces(*ops_, project_mean_zero(c, c.kappa()), rho_plus, rho_minus);
  const auto pvv = second_fundamental_pressure(vel, vel, rho_plus, rho_minus);
  vv_plus_ = pvv->trace(Side::interior);
  vv_minus_ = pvv->trace(Side::exterior);
}

double PressureField::value(Complex z, Side side) const {
  if (side == Side::interior) return ext_plus_->value(z) + rho_plus_ * src_plus_->value(z);
  return ext_minus_->value(z) + rho_minus_ * src_minus_->value(z);
}

Complex PressureField::gradient(Complex z, Side side) const {
  if (side == Side::interior) return ext_plus_->gradient(z) + rho_plus_ * src_plus_->gradient(z);
  return ext_minus_->gradient(z) + rho_minus_ * src_minus_->gradient(z);
}

double PressureField::jump_residual() const {
  const ClosedCurve& c = ops_->curve();
  double worst = 0.0;
  for (int j = 0; j < c.size(); ++j) {
    const Complex z = c.nodes()[j];
    worst = std::max(worst, std::abs(value(z, Side::interior) - value(z, Side::exterior) - c.kappa()[j]));
  }
  return worst;
}

double PressureField::splitting_defect() const {
  const ClosedCurve& c = ops_->curve();
  const double dp = defect_mod_constant(c, rho_plus_ * (vv_plus_ + kappa_plus_), trace_.plus);
  const double dm = defect_mod_constant(c, rho_minus_ * (vv_minus_ + kappa_minus_), trace_.minus);
  return std::max(dp, dm);
}

std::shared_ptr<const PressureField> pressure_field(const TwoPhaseVelocity& vel, double rho_plus, double rho_minus) {
  return std::make_shared<const PressureField>(vel, rho_plus, rho_minus);
}

}  // namespace ilab
