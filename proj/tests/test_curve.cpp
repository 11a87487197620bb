#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ilab/curve.hpp"
#include "ilab/errors.hpp"
#include "ilab/quadrature.hpp"

using namespace ilab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("circle geometry") {
  const auto c = ClosedCurve::circle(2.0, 64);
  CHECK(c.length() == doctest::Approx(4.0 * kPi).epsilon(1e-13));
  CHECK(c.area() == doctest::Approx(4.0 * kPi).epsilon(1e-13));
  CHECK(c.kappa().cwiseAbs().minCoeff() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(c.centroid()) < 1e-13);
  CHECK(c.is_simple());
}

TEST_CASE("ellipse curvature matches closed form") {
  const double a = 2.0, b = 1.0;
  const auto c = ClosedCurve::ellipse(a, b, 128);
  double worst = 0.0;
  for (int j = 0; j < c.size(); ++j) {
    const double t = 2.0 * kPi * j / c.size();
    const double st = std::sin(t), ct = std::cos(t);
    const double exact = a * b / std::pow(a * a * st * st + b * b * ct * ct, 1.5);
    worst = std::max(worst, std::abs(c.kappa()[j] - exact));
  }
  CHECK(worst < 1e-10);
  CHECK(c.area() == doctest::Approx(kPi * a * b).epsilon(1e-13));
}

TEST_CASE("clockwise and degenerate curves are rejected") {
  VectorXcd z = ClosedCurve::circle(1.0, 32).nodes().reverse();
  CHECK_THROWS_AS(ClosedCurve{z}, GeometryError);
  CHECK_THROWS_AS(ClosedCurve{VectorXcd::Zero(32)}, GeometryError);
  CHECK_THROWS_AS(ClosedCurve{VectorXcd::Ones(4)}, GeometryError);
}

TEST_CASE("sobolev norm of cos on the unit circle") {
  const auto c = ClosedCurve::circle(1.0, 64);
  VectorXd f(64);
  for (int j = 0; j < 64; ++j) f[j] = std::cos(2.0 * kPi * j / 64);
  CHECK(sobolev_norm(c, f, 1.0) == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-12));
  CHECK(sobolev_norm(c, f, 0.0) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
}

TEST_CASE("surface laplacian of cos m theta") {
  const double r = 1.5;
  const int m = 3;
  const auto c = ClosedCurve::circle(r, 64);
  VectorXd f(64);
  for (int j = 0; j < 64; ++j) f[j] = std::cos(m * 2.0 * kPi * j / 64);
  const VectorXd lap = surface_laplacian(c, f);
  CHECK((lap + (m * m / (r * r)) * f).cwiseAbs().maxCoeff() < 1e-11);
  const MatrixXd lm = surface_laplacian_matrix(c);
  CHECK((lm * f - lap).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("simons identity holds on a perturbed circle") {
  const auto c = ClosedCurve::perturbed_circle(1.0, 3, 0.1, 128);
  CHECK(simons_identity_residual(c) < 1e-8);
}

TEST_CASE("equal arclength reparametrization") {
  const auto c = reparametrize_equal_arclength(ClosedCurve::ellipse(1.5, 1.0, 128));
  const double target = c.length() / (2.0 * kPi);
  CHECK((c.speed().array() - target).abs().maxCoeff() < 1e-8 * target);
}

TEST_CASE("curve spec round trip") {
  const auto c = ClosedCurve::perturbed_circle(1.0, 4, 0.05, 64);
  std::stringstream ss;
  write_curve_spec(ss, c);
  const auto d = read_curve_spec(ss, 64);
  CHECK((c.nodes() - d.nodes()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("volume quadrature integrates area and decaying functions") {
  const auto c = ClosedCurve::ellipse(1.3, 0.9, 96);
  const auto in = build_volume_grid(c, Side::interior);
  CHECK(in.integrate(in.sample([](Complex) { return 1.0; })) == doctest::Approx(kPi * 1.3 * 0.9).epsilon(1e-11));
  const auto unit = ClosedCurve::circle(1.0, 64);
  const auto out = build_volume_grid(unit, Side::exterior);
  // int_{r>1} r^-4 dx = pi
  const double v = out.integrate(out.sample([](Complex z) { return std::pow(std::abs(z), -4.0); }));
  CHECK(v == doctest::Approx(kPi).epsilon(1e-11));
}
