#include <cmath>
#include <random>

#include "doctest.h"
#include "ilab/energy.hpp"
#include "ilab/linearized.hpp"
#include "ilab/manufactured.hpp"

using namespace ilab;

namespace {
constexpr double kPi = 3.14159265358979323846;

VectorXd mode(int n, int m) {
  VectorXd f(n);
  for (int j = 0; j < n; ++j) f[j] = std::cos(m * 2.0 * kPi * j / n);
  return f;
}

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

double weighted_asymmetry(const CurveOperators& ops, const MatrixXd& a) {
  const MatrixXd wa = ops.curve().weights().asDiagonal() * a;
  return (wa - wa.transpose()).norm() / wa.norm();
}
}  // namespace

TEST_CASE("surface tension form on a circle mode") {
  const double r = 1.5;
  const int n = 64, m = 3;
  const auto ops = make_operators(ClosedCurve::circle(r, n));
  const auto w = flow_from_normal_velocity(ops, mode(n, m));
  CHECK(form_A_boundary(w) == doctest::Approx(kPi * m * m / r).epsilon(1e-10));
  CHECK(form_A_volume(w, 1.0, 2.0) == doctest::Approx(kPi * m * m / r).epsilon(1e-6));
}

TEST_CASE("Kelvin-Helmholtz form: volume and boundary agree and are nonnegative") {
  std::mt19937_64 rng(7);
  for (const ClosedCurve& c : {ClosedCurve::circle(1.0, 64), ClosedCurve::ellipse(1.3, 0.8, 64)}) {
    const auto ops = make_operators(c);
    const auto v = flow_from_normal_velocity(ops, smooth_random(c, rng, 4), 2.0, c.centroid());
    const auto w = flow_from_normal_velocity(ops, smooth_random(c, rng, 5));
    const double vol = form_R0_volume(v, w, 1.0, 3.0);
    const double bnd = form_R0_boundary(v, w, 1.0, 3.0);
    CHECK(bnd >= 0.0);
    CHECK(std::abs(vol - bnd) <= 1e-6 * std::abs(bnd));
  }
}

TEST_CASE("dispersion relation") {
  LinearizedSymbol p;
  p.rho_plus = 1.0;
  p.rho_minus = 3.0;
  p.radius = 2.0;
  SUBCASE("no slip: pure capillary oscillation") {
    for (int m = 2; m <= 8; ++m) {
      const DispersionPair d = dispersion(p, m);
      const double omega = std::sqrt(m * (m * m - 1.0) / (4.0 * 8.0));
      CHECK(std::abs(d.lambda_plus.real()) < 1e-14);
      CHECK(std::abs(std::abs(d.lambda_plus.imag()) - omega) < 1e-12);
    }
    CHECK_FALSE(stability_threshold(p).has_value());
  }
  SUBCASE("flat threshold") {
    p.geometry = Geometry::flat;
    p.delta_u = 2.0;
    const auto k = stability_threshold(p);
    REQUIRE(k.has_value());
    CHECK(*k == doctest::Approx(1.0 * 3.0 * 4.0 / 4.0).epsilon(1e-10));
    CHECK(dispersion(p, 0.9 * *k).growth_rate() > 0.0);
    CHECK(dispersion(p, 1.1 * *k).growth_rate() == doctest::Approx(0.0));
  }
  SUBCASE("symbol ratio grows linearly in the mode") {
    p.delta_u = 1.0;
    CHECK(p.a(40.0) / p.r(40.0) == doctest::Approx(2.0 * p.a(20.0) / p.r(20.0)).epsilon(1e-12));
  }
}

TEST_CASE("defect between N and the square root of the surface Laplacian") {
  for (const ClosedCurve& c : {ClosedCurve::circle(1.0, 64), ClosedCurve::perturbed_circle(1.0, 3, 0.2, 64)}) {
    const ClosedCurve fine = ClosedCurve::from_coefficients(c.coefficients(), 128);
    const double a = cn_defect_norm(CurveOperators(c), Side::interior);
    const double b = cn_defect_norm(CurveOperators(fine), Side::interior);
    CHECK(std::abs(a - b) <= 0.1 * std::max(a, b) + 1e-8);
  }
}

TEST_CASE("E0 examples") {
  const int n = 64;
  SUBCASE("static circle and ellipse: perimeter") {
    const auto circle = make_operators(ClosedCurve::circle(1.0, n));
    CHECK(energy_E0_boundary(flow_from_normal_velocity(circle, VectorXd::Zero(n)), 1.0, 1.0) ==
          doctest::Approx(2.0 * kPi).epsilon(1e-12));
    const auto ellipse = make_operators(ClosedCurve::ellipse(2.0, 1.0, n));
    CHECK(energy_E0_boundary(flow_from_normal_velocity(ellipse, VectorXd::Zero(n)), 1.0, 1.0) ==
          doctest::Approx(9.688448220547675).epsilon(1e-10));
  }
  SUBCASE("kinetic part: volume vs boundary, quadratic scaling") {
    std::mt19937_64 rng(3);
    const ClosedCurve c = ClosedCurve::ellipse(1.2, 0.9, n);
    const auto ops = make_operators(c);
    const VectorXd un = smooth_random(c, rng, 4);
    const auto v = flow_from_normal_velocity(ops, un);
    const auto v2 = flow_from_normal_velocity(ops, 2.0 * un);
    const double k1 = energy_E0_boundary(v, 1.0, 2.0) - c.length();
    const double k2 = energy_E0_boundary(v2, 1.0, 2.0) - c.length();
    CHECK(k1 > 0.0);
    CHECK(k2 == doctest::Approx(4.0 * k1).epsilon(1e-10));
    CHECK(energy_E0(v, 1.0, 2.0) - c.length() == doctest::Approx(k1).epsilon(1e-6));
  }
}

TEST_CASE("higher-order energy") {
  const int n = 64;
  SUBCASE("static circle has E = 0") {
    const auto ops = make_operators(ClosedCurve::circle(1.0, n));
    const EnergyReport r = energy_E(flow_from_normal_velocity(ops, VectorXd::Zero(n)), 1.0, 2.0, 2);
    CHECK(std::abs(r.total()) < 1e-10);
  }
  SUBCASE("E_A on a circle mode, k = 2") {
    const double r = 1.5, rp = 1.0, rm = 2.0;
    const int m = 3;
    const auto ops = make_operators(ClosedCurve::circle(r, n));
    const EnergyReport rep = energy_E(flow_from_normal_velocity(ops, mode(n, m)), rp, rm, 2);
    const double lap = m * m / (r * r);
    const double expect = lap * (m / (r * (rp + rm))) * lap * kPi * r;
    CHECK(rep.e_a == doctest::Approx(expect).epsilon(1e-9));
  }
  SUBCASE("operator strings are self-adjoint in L2(dS)") {
    const auto ops = make_operators(ClosedCurve::perturbed_circle(1.0, 3, 0.15, 96));
    for (int k : {1, 2, 3}) {
      CHECK(weighted_asymmetry(*ops, energy_operator_A(*ops, 1.0, 2.0, k)) < 1e-10);
      CHECK(weighted_asymmetry(*ops, energy_operator_kappa(*ops, 1.0, 2.0, k)) < 1e-10);
    }
  }
  SUBCASE("reparametrization invariance") {
    const ClosedCurve c = ClosedCurve::perturbed_circle(1.0, 2, 0.1, n);
    const ClosedCurve c2 = reparametrize_equal_arclength(c);
    const EnergyReport a = energy_E(flow_from_normal_velocity(make_operators(c), VectorXd::Zero(n)), 1.0, 1.0, 2);
    const EnergyReport b = energy_E(flow_from_normal_velocity(make_operators(c2), VectorXd::Zero(n)), 1.0, 1.0, 2);
    CHECK(a.e_kappa == doctest::Approx(b.e_kappa).epsilon(1e-8));
  }
}

TEST_CASE("vorticity transport identity on polynomial flows") {
  std::vector<std::array<double, 3>> probes;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 16; ++i) probes.push_back({u(rng), u(rng), u(rng)});
  SUBCASE("rigid rotation") {
    PolynomialFlow f{Poly3::monomial(-1.0, 0, 0, 1), Poly3::monomial(1.0, 0, 1, 0)};
    CHECK(curl_evolution_residual(f, probes) < 1e-12);
  }
  SUBCASE("random polynomial fields") {
    for (int trial = 0; trial < 5; ++trial) {
      PolynomialFlow f;
      for (int t = 0; t <= 1; ++t)
        for (int i = 0; i <= 2; ++i)
          for (int j = 0; i + j <= 2; ++j) {
            f.vx = f.vx + Poly3::monomial(u(rng), t, i, j);
            f.vy = f.vy + Poly3::monomial(u(rng), t, i, j);
          }
      CHECK(curl_evolution_residual(f, probes) < 1e-10);
    }
  }
}
