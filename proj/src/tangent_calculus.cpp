#include "ilab/tangent_calculus.hpp"

#include <cmath>

#include "ilab/errors.hpp"

namespace ilab {

namespace {

double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

Complex mat_vec(const Eigen::Matrix2d& j, Complex v) {
  const Eigen::Vector2d r = j * Eigen::Vector2d(v.real(), v.imag());
  return {r[0], r[1]};
}

std::shared_ptr<const PoissonSolution> divergence_poisson(const OperatorsPtr& ops, const SideVelocity& x, Side side) {
  const VolumeGrid grid = build_volume_grid(ops->curve(), side);
  const VectorXd source = grid.sample([&x](Complex z) { return x.jacobian(z).trace(); });
  if (source.cwiseAbs().maxCoeff() == 0.0) return nullptr;
  return std::make_shared<const PoissonSolution>(poisson(ops, grid, source));
}

VectorXd mean_free(const ClosedCurve& c, const VectorXd& f) { return project_mean_zero(c, f); }

}  // namespace

NormalPotential::NormalPotential(OperatorsPtr ops, VectorXd surface_value, double rho_plus, double rho_minus,
                                 std::shared_ptr<const PoissonSolution> source_plus,
                                 std::shared_ptr<const PoissonSolution> source_minus)
    : ops_(std::move(ops)),
      surface_(std::move(surface_value)),
      rho_plus_(rho_plus),
      rho_minus_(rho_minus),
      src_plus_(std::move(source_plus)),
      src_minus_(std::move(source_minus)) {
  ext_plus_ = std::make_shared<const HarmonicExtension>(ops_, surface_, Side::interior);
  ext_minus_ = std::make_shared<const HarmonicExtension>(ops_, surface_, Side::exterior);
}

VectorXd NormalPotential::trace(Side side) const {
  return surface_ / (side == Side::interior ? rho_plus_ : rho_minus_);
}

double NormalPotential::value(Complex z, Side side) const {
  const bool in = side == Side::interior;
  const auto& src = in ? src_plus_ : src_minus_;
  const double h = (in ? ext_plus_ : ext_minus_)->value(z) / (in ? rho_plus_ : rho_minus_);
  return src ? h + src->value(z) : h;
}

Complex NormalPotential::gradient(Complex z, Side side) const {
  const bool in = side == Side::interior;
  const auto& src = in ? src_plus_ : src_minus_;
  const Complex h = (in ? ext_plus_ : ext_minus_)->gradient(z) / (in ? rho_plus_ : rho_minus_);
  return src ? h + src->gradient(z) : h;
}

double NormalPotential::laplacian_probe(Complex z, Side side, double step) const {
  const double c = value(z, side);
  const double sum = value(z + step, side) + value(z - step, side) + value(z + Complex(0, step), side) +
                     value(z - Complex(0, step), side);
  return (sum - 4.0 * c) / (step * step);
}

double NormalPotential::surface_mismatch() const {
  const ClosedCurve& c = ops_->curve();
  double worst = 0.0;
  for (int j = 0; j < c.size(); ++j) {
    const Complex z = c.nodes()[j];
    worst = std::max(worst, std::abs(rho_plus_ * value(z, Side::interior) - rho_minus_ * value(z, Side::exterior)));
  }
  return worst;
}

SideVelocityPtr NormalPotential::gradient_field(Side side) const {
  auto self = shared_from_this();
  const double step = 1e-5 * ops_->curve().length() / (2.0 * 3.14159265358979323846);
  auto value = [self, side](Complex z) { return self->gradient(z, side); };
  auto jacobian = [self, side, step](Complex z) {
    const Complex dx = (self->gradient(z + step, side) - self->gradient(z - step, side)) / (2.0 * step);
    const Complex dy =
        (self->gradient(z + Complex(0, step), side) - self->gradient(z - Complex(0, step), side)) / (2.0 * step);
    Eigen::Matrix2d j;
    j << dx.real(), dy.real(), dx.imag(), dy.imag();
    return j;
  };
  return std::make_shared<const ClosedFormVelocity>(value, jacobian, true);
}

TangentProjection project_to_tangent(OperatorsPtr ops, SideVelocityPtr x_plus, SideVelocityPtr x_minus,
                                     double rho_plus, double rho_minus) {
  const ClosedCurve& c = ops->curve();
  auto src_plus = divergence_poisson(ops, *x_plus, Side::interior);
  auto src_minus = divergence_poisson(ops, *x_minus, Side::exterior);
  const VectorXcd tp = x_plus->trace(c);
  const VectorXcd tm = x_minus->trace(c);
  VectorXd z(c.size());
  for (int j = 0; j < c.size(); ++j) z[j] = dot(tp[j], c.normal()[j]) - dot(tm[j], c.normal()[j]);
  if (src_plus) z += src_plus->normal_derivative();
  if (src_minus) z += src_minus->normal_derivative();
  const VectorXd surface = -dtn_inverse(*ops, mean_free(c, z), rho_plus, rho_minus);
  auto psi = std::make_shared<const NormalPotential>(ops, surface, rho_plus, rho_minus, src_plus, src_minus);
  auto w_plus = std::make_shared<const SumVelocity>(x_plus, psi->gradient_field(Side::interior));
  auto w_minus = std::make_shared<const SumVelocity>(x_minus, psi->gradient_field(Side::exterior));
  return {make_two_phase(ops, w_plus, w_minus, Representation::manufactured), psi};
}

std::shared_ptr<const NormalPotential> second_fundamental_pressure(const TwoPhaseVelocity& v,
                                                                   const TwoPhaseVelocity& w, double rho_plus,
                                                                   double rho_minus) {
  const OperatorsPtr& ops = v.ops;
  const ClosedCurve& c = ops->curve();
  auto u_plus = std::make_shared<const PoissonSolution>(solve_trace_product(ops, v.plus, w.plus, Side::interior));
  auto u_minus =
      std::make_shared<const PoissonSolution>(solve_trace_product(ops, v.minus, w.minus, Side::exterior));
  VectorXd z(c.size());
  for (int j = 0; j < c.size(); ++j) {
    const Complex node = c.nodes()[j];
    const Complex n = c.normal()[j];
    const Complex gp = mat_vec(v.plus->jacobian(node), w.trace_plus[j]);
    const Complex gm = mat_vec(v.minus->jacobian(node), w.trace_minus[j]);
    z[j] = dot(gp, n) - dot(gm, n);
  }
  z += surface_derivative(c, VectorXd(w.normal_plus.cwiseProduct(v.slip())));
  z += u_plus->normal_derivative() + u_minus->normal_derivative();
  const VectorXd surface = -dtn_inverse(*ops, mean_free(c, z), rho_plus, rho_minus);
  return std::make_shared<const NormalPotential>(ops, surface, rho_plus, rho_minus, u_plus, u_minus);
}

double second_fundamental_duality(const TwoPhaseVelocity& v, const TwoPhaseVelocity& w, const VectorXd& g,
                                  double rho_plus, double rho_minus) {
  const OperatorsPtr& ops = v.ops;
  const ClosedCurve& c = ops->curve();
  const VectorXd f = dtn_inverse(*ops, mean_free(c, g), rho_plus, rho_minus);
  const VectorXd nf = ops->dtn(Side::interior) * f + ops->dtn(Side::exterior) * f;
  double total = -integrate(c, w.normal_plus.cwiseProduct(v.normal_plus).cwiseProduct(nf));
  for (Side side : {Side::interior, Side::exterior}) {
    const HarmonicExtension ext(ops, f, side);
    const VolumeGrid grid = build_volume_grid(c, side);
    const SideVelocity& vs = v.side(side);
    const SideVelocity& ws = w.side(side);
    total += grid.integrate(grid.sample([&](Complex z) {
      const Complex a = vs.value(z), b = ws.value(z);
      const Eigen::Vector2d av(a.real(), a.imag()), bv(b.real(), b.imag());
      return av.dot(ext.hessian(z) * bv);
    }));
  }
  return total;
}

std::pair<VectorXd, VectorXd> lemma_potential_traces(const CurveOperators& ops, const VectorXd& f0, double rho_plus,
                                                     double rho_minus) {
  const ClosedCurve& c = ops.curve();
  const double scale = 1.0 / (rho_plus * rho_minus);
  const VectorXd a = dtn_inverse(ops, mean_free(c, ops.dtn(Side::exterior) * f0), rho_plus, rho_minus);
  const VectorXd b = dtn_inverse(ops, mean_free(c, ops.dtn(Side::interior) * f0), rho_plus, rho_minus);
  return {scale * a, -scale * b};
}

TwoPhaseVelocity lemma_potential(OperatorsPtr ops, const VectorXd& f0, double rho_plus, double rho_minus) {
  auto [fp, fm] = lemma_potential_traces(*ops, f0, rho_plus, rho_minus);
  return potential_flow(std::move(ops), fp, fm);
}

TwoPhaseVelocity sprime_pressure(OperatorsPtr ops, double rho_plus, double rho_minus) {
  const VectorXd kappa = mean_free(ops->curve(), ops->curve().kappa());
  return lemma_potential(std::move(ops), kappa, rho_plus, rho_minus);
}

double weighted_inner(const ClosedCurve& curve, const SideVelocity& a_plus, const SideVelocity& b_plus,
                      const SideVelocity& a_minus, const SideVelocity& b_minus, double rho_plus, double rho_minus) {
  const VolumeGrid in = build_volume_grid(curve, Side::interior);
  const VolumeGrid out = build_volume_grid(curve, Side::exterior);
  const double ip = in.integrate(in.sample([&](Complex z) { return dot(a_plus.value(z), b_plus.value(z)); }));
  const double im = out.integrate(out.sample([&](Complex z) { return dot(a_minus.value(z), b_minus.value(z)); }));
  return rho_plus * ip + rho_minus * im;
}

double weighted_inner(const TwoPhaseVelocity& a, const TwoPhaseVelocity& b, double rho_plus, double rho_minus) {
  return weighted_inner(a.curve(), *a.plus, *b.plus, *a.minus, *b.minus, rho_plus, rho_minus);
}

double curvature_form(const TwoPhaseVelocity& v, const TwoPhaseVelocity& w, double rho_plus, double rho_minus) {
  const auto pvv = second_fundamental_pressure(v, v, rho_plus, rho_minus);
  const auto pww = second_fundamental_pressure(w, w, rho_plus, rho_minus);
  const auto pvw = second_fundamental_pressure(v, w, rho_plus, rho_minus);
  double total = 0.0;
  for (Side side : {Side::interior, Side::exterior}) {
    const VolumeGrid grid = build_volume_grid(v.curve(), side);
    const double rho = side == Side::interior ? rho_plus : rho_minus;
    total += rho * grid.integrate(grid.sample([&](Complex z) {
      const Complex gvw = pvw->gradient(z, side);
      return dot(pvv->gradient(z, side), pww->gradient(z, side)) - std::norm(gvw);
    }));
  }
  return total;
}

}  // namespace ilab
