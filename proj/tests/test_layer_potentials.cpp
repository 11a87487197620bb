#include <cmath>
#include <cstdio>

#include "doctest.h"
#include "ilab/errors.hpp"
#include "ilab/layer_potentials.hpp"

using namespace ilab;

namespace {
constexpr double kPi = 3.14159265358979323846;

VectorXd sample_nodes(const ClosedCurve& c, const std::function<double(Complex)>& f) {
  VectorXd v(c.size());
  for (int j = 0; j < c.size(); ++j) v[j] = f(c.nodes()[j]);
  return v;
}
}  // namespace

TEST_CASE("cauchy operator of a constant is one half") {
  const auto ops = make_operators(ClosedCurve::ellipse(1.4, 0.8, 64));
  const VectorXcd c1 = ops->cauchy() * VectorXcd::Ones(64);
  CHECK((c1.array() - 0.5).abs().maxCoeff() < 1e-12);
}

TEST_CASE("circle DtN eigenvalues are m/R on both sides") {
  const double r = 1.7;
  const auto ops = make_operators(ClosedCurve::circle(r, 64));
  for (int m = 1; m <= 10; ++m) {
    VectorXd f(64);
    for (int j = 0; j < 64; ++j) f[j] = std::cos(m * 2.0 * kPi * j / 64);
    CHECK((dtn(*ops, f, Side::interior) - (m / r) * f).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((dtn(*ops, f, Side::exterior) - (m / r) * f).cwiseAbs().maxCoeff() < 1e-10);
    const VectorXd bar = dtn_bar(*ops, f, 1.0, 3.0);
    CHECK((bar - (m / (r * 4.0)) * f).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("ellipse DtN matches exact harmonic functions") {
  const auto c = ClosedCurve::ellipse(1.5, 0.8, 128);
  const auto ops = make_operators(c);
  // interior: u = Re(z^3), grad = conj(3 z^2)
  const VectorXd u_in = sample_nodes(c, [](Complex z) { return std::real(z * z * z); });
  VectorXd exact_in(c.size());
  // exterior: u = Re(1/(z - 0.2)) + 2, grad = conj(-1/(z-0.2)^2), N- = -n
  const VectorXd u_out = sample_nodes(c, [](Complex z) { return std::real(1.0 / (z - 0.2)) + 2.0; });
  VectorXd exact_out(c.size());
  for (int j = 0; j < c.size(); ++j) {
    const Complex z = c.nodes()[j];
    const Complex n = c.normal()[j];
    exact_in[j] = std::real(std::conj(std::conj(3.0 * z * z)) * n);
    const Complex g = std::conj(-1.0 / ((z - 0.2) * (z - 0.2)));
    exact_out[j] = -std::real(std::conj(g) * n);
  }
  CHECK((dtn(*ops, u_in, Side::interior) - exact_in).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((dtn(*ops, u_out, Side::exterior) - exact_out).cwiseAbs().maxCoeff() < 1e-9);

  const HarmonicExtension ext(ops, u_out, Side::exterior);
  CHECK(ext.far_field_constant() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("harmonic extension evaluates accurately near the curve") {
  const auto c = ClosedCurve::ellipse(1.5, 0.8, 128);
  const auto ops = make_operators(c);
  const auto f_in = [](Complex z) { return std::exp(z) * 0.5 + z * z; };
  const VectorXd trace = sample_nodes(c, [&](Complex z) { return std::real(f_in(z)); });
  const HarmonicExtension ext(ops, trace, Side::interior);
  double worst = 0.0, worst_grad = 0.0;
  for (double d : {0.3, 0.05, 0.01, 1e-3}) {
    for (int j = 0; j < c.size(); j += 7) {
      const Complex z = c.nodes()[j] - d * c.normal()[j] + 0.3 * d * c.tangent()[j];
      worst = std::max(worst, std::abs(ext.value(z) - std::real(f_in(z))));
      const Complex grad = std::conj(0.5 * std::exp(z) + 2.0 * z);
      worst_grad = std::max(worst_grad, std::abs(ext.gradient(z) - grad));
    }
  }
  CHECK(worst < 1e-9);
  CHECK(worst_grad < 1e-7);
  CHECK(ext.trace_defect(1e-9) < 1e-8);

  const auto g_out = [](Complex z) { return 1.0 / (z - 0.1) + 0.3 / ((z + 0.2) * (z + 0.2)) + 1.0; };
  const VectorXd trace_out = sample_nodes(c, [&](Complex z) { return std::real(g_out(z)); });
  const HarmonicExtension out(ops, trace_out, Side::exterior);
  double worst_out = 0.0;
  for (double d : {2.0, 0.2, 0.01}) {
    for (int j = 0; j < c.size(); j += 5) {
      const Complex z = c.nodes()[j] + d * c.normal()[j];
      worst_out = std::max(worst_out, std::abs(out.value(z) - std::real(g_out(z))));
    }
  }
  CHECK(worst_out < 1e-9);
  CHECK(std::abs(out.value(Complex(1e4, 1e4)) - std::real(g_out(Complex(1e4, 1e4)))) < 1e-10);
}

TEST_CASE("dtn_inverse round trip and contract") {
  const auto c = ClosedCurve::perturbed_circle(1.0, 3, 0.15, 128);
  const auto ops = make_operators(c);
  VectorXd g = sample_nodes(c, [](Complex z) { return std::sin(2.0 * z.real()) + z.imag() * z.imag(); });
  g = project_mean_zero(c, g);
  const VectorXd h = dtn_inverse(*ops, g, 1.0, 2.0);
  CHECK(l2_norm(c, dtn_combined(*ops, h, 1.0, 2.0) - g) < 1e-8 * l2_norm(c, g));
  CHECK(std::abs(integrate(c, h)) < 1e-12);
  VectorXd bad = g.array() + 1.0;
  CHECK_THROWS_AS(dtn_inverse(*ops, bad, 1.0, 2.0), ContractError);
}

TEST_CASE("poisson solve on an ellipse with a constant source") {
  const double a = 1.4, b = 0.9;
  const auto c = ClosedCurve::ellipse(a, b, 96);
  const auto ops = make_operators(c);
  const auto grid = build_volume_grid(c, Side::interior);
  const double s = 2.0 / (a * a) + 2.0 / (b * b);
  const auto sol = poisson(ops, grid, grid.sample([s](Complex) { return s; }));
  const auto exact = [a, b](Complex z) { return 1.0 - z.real() * z.real() / (a * a) - z.imag() * z.imag() / (b * b); };
  CHECK(std::abs(sol.value(Complex(0.3, 0.2)) - exact(Complex(0.3, 0.2))) < 1e-10);
  CHECK(sol.trace_defect() < 1e-12);
  double worst = 0.0;
  for (int j = 0; j < c.size(); ++j) {
    const Complex z = c.nodes()[j];
    const Complex grad(-2.0 * z.real() / (a * a), -2.0 * z.imag() / (b * b));
    worst = std::max(worst, std::abs(sol.normal_derivative()[j] - std::real(std::conj(grad) * c.normal()[j])));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("exterior poisson solve and decay check") {
  const auto c = ClosedCurve::circle(1.0, 64);
  const auto ops = make_operators(c);
  const auto grid = build_volume_grid(c, Side::exterior);
  // u = r^-2 - 1 solves -Delta u = -4 r^-4, u = 0 on r = 1, bounded.
  const auto sol = poisson(ops, grid, grid.sample([](Complex z) { return -4.0 * std::pow(std::abs(z), -4.0); }));
  CHECK(std::abs(sol.value(Complex(1.5, 0.7)) - (1.0 / std::norm(Complex(1.5, 0.7)) - 1.0)) < 1e-10);
  CHECK((sol.normal_derivative().array() - 2.0).abs().maxCoeff() < 1e-9);
  CHECK_THROWS_AS(poisson(ops, grid, grid.sample([](Complex z) { return 1.0 / std::norm(z); })), TruncationError);
}

TEST_CASE("operator cache round trip") {
  const auto c = ClosedCurve::circle(1.0, 32);
  const auto ops = make_operators(c);
  const std::string path = "ilab_cache_test.bin";
  save_operator_cache(path, *ops, Side::exterior);
  const auto loaded = load_operator_cache(path, c, Side::exterior);
  REQUIRE(loaded.has_value());
  CHECK((*loaded - ops->dtn(Side::exterior)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_FALSE(load_operator_cache(path, ClosedCurve::circle(1.1, 32), Side::exterior).has_value());
  std::remove(path.c_str());
}
