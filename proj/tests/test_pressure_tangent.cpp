#include <cmath>
#include <random>

#include "doctest.h"
#include "ilab/errors.hpp"
#include "ilab/manufactured.hpp"
#include "ilab/pressure.hpp"
#include "ilab/tangent_calculus.hpp"

using namespace ilab;

namespace {
constexpr double kPi = 3.14159265358979323846;

VectorXd smooth_random(const ClosedCurve& c, std::mt19937_64& rng, int modes) {
  std::normal_distribution<double> g(0.0, 1.0);
  VectorXd f = VectorXd::Zero(c.size());
  for (int m = 1; m <= modes; ++m) {
    const double a = g(rng) / (m * m), b = g(rng) / (m * m);
    for (int j = 0; j < c.size(); ++j) {
      const double t = 2.0 * kPi * j / c.size();
      f[j] += a * std::cos(m * t) + b * std::sin(m * t);
    }
  }
  return project_mean_zero(c, f);
}

TwoPhaseVelocity random_tangent(const OperatorsPtr& ops, std::mt19937_64& rng, double circulation = 0.0) {
  const ClosedCurve& c = ops->curve();
  return flow_from_normal_velocity(ops, smooth_random(c, rng, 6), circulation, c.centroid());
}
}  // namespace

TEST_CASE("static circle pressure is the Laplace jump") {
  const double r = 1.3;
  const auto ops = make_operators(ClosedCurve::circle(r, 64));
  const auto vel = flow_from_normal_velocity(ops, VectorXd::Zero(64));
  const auto p = pressure_field(vel, 1.0, 2.0);
  CHECK((p->trace().plus - p->trace().minus).array().abs().maxCoeff() == doctest::Approx(1.0 / r).epsilon(1e-12));
  CHECK(p->jump_residual() < 1e-10);
  CHECK(p->p_vv(Side::interior).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(p->value(Complex(0.2, 0.3), Side::interior) - p->trace().plus[0]) < 1e-12);
}

TEST_CASE("uniform translation has the static pressure") {
  const auto c = ClosedCurve::ellipse(1.2, 0.8, 64);
  const auto ops = make_operators(c);
  const Complex u(0.7, -0.4);
  auto uniform = std::make_shared<const MonomialVelocity>(std::vector<Monomial>{{u, 0, 0}});
  const auto moving = make_two_phase(ops, uniform, uniform, Representation::manufactured);
  const auto at_rest = flow_from_normal_velocity(ops, VectorXd::Zero(64));
  const auto pm = pressure_trace(moving, 1.0, 3.0);
  const auto ps = pressure_trace(at_rest, 1.0, 3.0);
  CHECK((pm.plus - ps.plus).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dynamic pressure: compatibility, jump and splitting") {
  INFO("dyn");
  std::mt19937_64 rng(7);
  const auto ops = make_operators(ClosedCurve::perturbed_circle(1.0, 3, 0.1, 96));
  const auto vel = random_tangent(ops, rng, 1.5);
  CHECK(vel.matching_defect() < 1e-8);
  const auto p = pressure_field(vel, 1.0, 2.5);
  CHECK(p->trace().mean_defect < 1e-8);
  CHECK(p->jump_residual() < 1e-6);
  CHECK(p->splitting_defect() < 1e-6);
}

TEST_CASE("tangent projection of manufactured fields") {
  std::mt19937_64 rng(11);
  const auto c = ClosedCurve::ellipse(1.3, 0.9, 96);
  const auto ops = make_operators(c);
  auto xp = std::make_shared<const MonomialVelocity>(random_interior_terms(rng, 3, 1.0), c.centroid());
  auto xm = std::make_shared<const MonomialVelocity>(random_exterior_terms(rng, 1.0), c.centroid());
  const auto proj = project_to_tangent(ops, xp, xm, 1.0, 2.0);
  CHECK(proj.w.matching_defect() < 1e-8);
  CHECK(proj.psi->surface_mismatch() < 1e-8);
  const double ortho = weighted_inner(c, *proj.psi->gradient_field(Side::interior), *proj.w.plus,
                                      *proj.psi->gradient_field(Side::exterior), *proj.w.minus, 1.0, 2.0);
  const double wn = weighted_inner(proj.w, proj.w, 1.0, 2.0);
  const double pn = weighted_inner(c, *proj.psi->gradient_field(Side::interior),
                                   *proj.psi->gradient_field(Side::interior),
                                   *proj.psi->gradient_field(Side::exterior),
                                   *proj.psi->gradient_field(Side::exterior), 1.0, 2.0);
  CHECK(std::abs(ortho) < 1e-6 * std::sqrt(wn * pn));
  const Complex probe_in = c.centroid() + 0.3, probe_out(2.0, 1.0);
  CHECK(std::abs(xp->jacobian(probe_in).trace() + proj.psi->laplacian_probe(probe_in, Side::interior)) < 1e-5);
  CHECK(std::abs(xm->jacobian(probe_out).trace() + proj.psi->laplacian_probe(probe_out, Side::exterior)) < 1e-5);
}

TEST_CASE("lemma potential duality and surface tension form") {
  std::mt19937_64 rng(3);
  for (const auto& c : {ClosedCurve::circle(1.0, 64), ClosedCurve::ellipse(1.4, 0.8, 96)}) {
    const auto ops = make_operators(c);
    const double rp = 1.0, rm = 3.0;
    const auto w = random_tangent(ops, rng);
    const auto s = sprime_pressure(ops, rp, rm);
    CHECK(s.matching_defect() < 1e-8);
    const double lhs = weighted_inner(s, w, rp, rm);
    const double rhs = integrate(c, c.kappa().cwiseProduct(w.normal_plus));
    CHECK(std::abs(lhs - rhs) < 1e-6 * std::max(std::abs(rhs), 1e-3));

    const VectorXd f0 = -surface_laplacian(c, w.normal_plus);
    const auto a = lemma_potential(ops, f0, rp, rm);
    const double form = weighted_inner(a, w, rp, rm);
    const VectorXd ds = surface_derivative(c, w.normal_plus);
    const double grad_sq = integrate(c, ds.cwiseAbs2());
    CHECK(form == doctest::Approx(grad_sq).epsilon(1e-6));
  }
}

TEST_CASE("second fundamental form duality and symmetry") {
  std::mt19937_64 rng(5);
  const auto c = ClosedCurve::perturbed_circle(1.0, 2, 0.1, 96);
  const auto ops = make_operators(c);
  const double rp = 1.0, rm = 2.0;
  const auto v = random_tangent(ops, rng, 1.0);
  const auto w = random_tangent(ops, rng);
  const auto pwv = second_fundamental_pressure(v, w, rp, rm);
  const auto pvw = second_fundamental_pressure(w, v, rp, rm);
  const VectorXd g = smooth_random(c, rng, 5);
  const double lhs = integrate(c, g.cwiseProduct(pwv->surface_value()));
  const double rhs = second_fundamental_duality(v, w, g, rp, rm);
  CHECK(std::abs(lhs - rhs) < 1e-6 * std::abs(rhs));
  const double scale = l2_norm(c, pwv->surface_value());
  CHECK(l2_norm(c, pwv->surface_value() - pvw->surface_value()) < 1e-6 * scale);
  CHECK(std::abs(curvature_form(v, v, rp, rm)) < 1e-8 * std::max(1.0, scale * scale));
}
