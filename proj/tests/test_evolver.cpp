#include <cmath>
#include <random>

#include "doctest.h"
#include "ilab/errors.hpp"
#include "ilab/evolver.hpp"
#include "ilab/linearized.hpp"

using namespace ilab;

namespace {
constexpr double kPi = 3.14159265358979323846;

VectorXd random_gamma(int n, std::mt19937_64& rng, int modes, double mean) {
  std::normal_distribution<double> g(0.0, 1.0);
  VectorXd f = VectorXd::Constant(n, mean);
  for (int m = 1; m <= modes; ++m) {
    const double a = g(rng) / (m * m), b = g(rng) / (m * m);
    for (int j = 0; j < n; ++j) f[j] += a * std::cos(m * 2.0 * kPi * j / n) + b * std::sin(m * 2.0 * kPi * j / n);
  }
  return f;
}

/// Mode-m cosine and sine coefficients of the radial displacement.
std::pair<double, double> radial_mode(const ClosedCurve& c, int m) {
  const int n = c.size();
  double a = 0.0, b = 0.0;
  // (1/pi) int r(theta) {cos, sin}(m theta) d theta, with d theta = Im(z_alpha / z) d alpha
  for (int j = 0; j < n; ++j) {
    const double r = std::abs(c.nodes()[j]);
    const double t = std::arg(c.nodes()[j]);
    const double dt = (c.z_alpha()[j] / c.nodes()[j]).imag() * c.mesh();
    a += r * std::cos(m * t) * dt;
    b += r * std::sin(m * t) * dt;
  }
  return {a / kPi, b / kPi};
}
}  // namespace

TEST_CASE("sheet velocity") {
  const int n = 64;
  SUBCASE("zero sheet strength gives zero velocity") {
    const SheetState s = state_from_gamma(ClosedCurve::ellipse(1.2, 0.8, n), VectorXd::Zero(n), 1.0, 2.0, 0.0);
    const SheetKinematics k = sheet_velocity(s);
    CHECK(k.average.cwiseAbs().maxCoeff() < 1e-13);
  }
  SUBCASE("uniform sheet on a circle: rest inside, vortex outside") {
    const double r = 1.5, c = 0.7;
    const SheetState s = state_from_gamma(ClosedCurve::circle(r, n), VectorXd::Constant(n, c), 1.0, 2.0, 0.0);
    CHECK(s.circulation == doctest::Approx(2.0 * kPi * c));
    const SheetKinematics k = sheet_velocity(s);
    const ClosedCurve& curve = s.curve;
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      worst = std::max(worst, std::abs(k.v_plus[j]));
      worst = std::max(worst, std::abs(k.v_minus[j] - (c / r) * curve.tangent()[j]));
      worst = std::max(worst, std::abs(k.average[j] - (0.5 * c / r) * curve.tangent()[j]));
    }
    CHECK(worst < 1e-12);
    CHECK((birkhoff_rott(*k.ops, k.gamma) - k.average).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("Birkhoff-Rott average and one-sided traces on a perturbed curve") {
    std::mt19937_64 rng(5);
    const int n = 128;
    const ClosedCurve c = ClosedCurve::perturbed_circle(1.0, 3, 0.15, n);
    const VectorXd gamma = random_gamma(n, rng, 5, 0.3);
    const SheetState s = state_from_gamma(c, gamma, 1.0, 2.0, c.centroid());
    const SheetKinematics k = sheet_velocity(s);
    CHECK((k.gamma - gamma).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((birkhoff_rott(*k.ops, k.gamma) - k.average).cwiseAbs().maxCoeff() < 1e-9);
    for (int j = 0; j < n; ++j) {
      const Complex half = 0.5 * gamma[j] / c.speed()[j] * c.tangent()[j];
      CHECK(std::abs(k.v_plus[j] - (k.average[j] - half)) < 1e-9);
      CHECK(std::abs(k.v_minus[j] - (k.average[j] + half)) < 1e-9);
    }
    const TwoPhaseVelocity vel = k.velocity();
    CHECK(vel.matching_defect() < 1e-9);
    CHECK((vel.trace_plus - k.v_plus).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("self-convergence under node doubling") {
    // translating-dipole-like sheet on an ellipse: gamma = -2 sin(alpha) |z_alpha| scaled
    std::vector<double> errors;
    VectorXcd reference;
    const std::vector<int> sizes = {16, 32, 64, 128};
    std::vector<VectorXcd> averages;
    for (int m : sizes) {
      const ClosedCurve c = ClosedCurve::ellipse(1.3, 0.7, m);
      VectorXd gamma(m);
      for (int j = 0; j < m; ++j) gamma[j] = std::sin(2.0 * kPi * j / m) * c.speed()[j];
      averages.push_back(sheet_velocity(state_from_gamma(c, gamma, 1.0, 1.0, 0.0)).average);
    }
    // compare at the 16 coarse nodes
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
      double e = 0.0;
      const int stride = sizes.back() / 16;
      for (int j = 0; j < 16; ++j) {
        e = std::max(e, std::abs(averages[i][j * sizes[i] / 16] - averages.back()[j * stride]));
      }
      errors.push_back(e);
    }
    CHECK(errors[0] / errors[1] >= 16.0);
    CHECK(errors[2] < 1e-10);
  }
}

TEST_CASE("static circle is a fixed point") {
  const int n = 64;
  SheetState s = make_state(ClosedCurve::circle(1.0, n), VectorXd::Zero(n), 1.0, 3.0);
  const VectorXcd z0 = s.curve.nodes();
  const double dt = 0.9 * max_stable_dt(s, 0.5);
  for (int i = 0; i < 100; ++i) s = step(s, dt);
  CHECK((s.curve.nodes() - z0).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(s.q.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("CFL refusal suggests a stable step") {
  const SheetState s = make_state(ClosedCurve::circle(1.0, 64), VectorXd::Zero(64), 1.0, 1.0);
  const double limit = max_stable_dt(s, 0.5);
  try {
    (void)step(s, 2.0 * limit);
    FAIL("expected CflError");
  } catch (const CflError& e) {
    CHECK(e.suggested_dt() == doctest::Approx(limit));
  }
}

TEST_CASE("capillary mode: frequency and linear fidelity") {
  const int n = 64, m = 3;
  const double rp = 1.0, rm = 2.0, eps = 1e-4;
  LinearizedSymbol p;
  p.rho_plus = rp;
  p.rho_minus = rm;
  const double omega = std::abs(dispersion(p, m).lambda_plus.imag());
  const double period = 2.0 * kPi / omega;

  SheetState s = make_state(ClosedCurve::perturbed_circle(1.0, m, eps, n), VectorXd::Zero(n), rp, rm);
  const int steps = static_cast<int>(std::ceil(period / (0.5 * max_stable_dt(s, 0.5))));
  const double dt = period / steps;
  std::vector<double> t{0.0}, amp{radial_mode(s.curve, m).first};
  for (int i = 0; i < steps; ++i) {
    s = step(s, dt);
    t.push_back(s.time);
    amp.push_back(radial_mode(s.curve, m).first);
  }
  std::vector<double> crossings;
  for (std::size_t i = 1; i < amp.size(); ++i) {
    if ((amp[i - 1] > 0.0) != (amp[i] > 0.0)) {
      // cubic interpolation through four samples around the crossing
      const std::size_t i0 = i - 2;
      double lo = t[i - 1], hi = t[i];
      auto interp = [&](double x) {
        double sum = 0.0;
        for (int a = 0; a < 4; ++a) {
          double w = 1.0;
          for (int b = 0; b < 4; ++b)
            if (a != b) w *= (x - t[i0 + b]) / (t[i0 + a] - t[i0 + b]);
          sum += w * amp[i0 + a];
        }
        return sum;
      };
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((interp(lo) > 0.0) == (interp(mid) > 0.0) ? lo : hi) = mid;
      }
      crossings.push_back(0.5 * (lo + hi));
    }
  }
  REQUIRE(crossings.size() == 2);
  const double measured = kPi / (crossings[1] - crossings[0]);
  CHECK(std::abs(measured - omega) / omega < 1e-3);
  // after one period the linear solution returns to eps cos(m theta)
  CHECK(std::abs(amp.front() - eps) < 1e-3 * eps);
  CHECK(std::abs(amp.back() - eps) < 0.01 * eps);
  CHECK(std::abs(radial_mode(s.curve, m).second) < 0.01 * eps);
}

TEST_CASE("brute-force linearization matches the dispersion relation") {
  LinearizedSymbol p;
  p.rho_plus = 1.0;
  p.rho_minus = 1.0;
  p.radius = 4.0;
  for (double u : {0.0, 2.0}) {
    p.delta_u = u;
    for (int m : {2, 4, 7}) {
      const Eigen::Matrix4d jac = mode_jacobian(p.radius, u, p.rho_plus, p.rho_minus, m, 64);
      const Eigen::Vector4cd eig = Eigen::EigenSolver<Eigen::Matrix4d>(jac).eigenvalues();
      const DispersionPair d = dispersion(p, m);
      for (Complex lam : {d.lambda_plus, d.lambda_minus, std::conj(d.lambda_plus), std::conj(d.lambda_minus)}) {
        double best = 1e300;
        for (int i = 0; i < 4; ++i) best = std::min(best, std::abs(eig[i] - lam));
        CHECK(best <= 1e-3 * std::max(std::abs(lam), 1e-3));
      }
    }
  }
}

TEST_CASE("unstable Kelvin-Helmholtz mode grows at the predicted rate") {
  const double r = 1.0, u = 5.0;
  const int n = 64, m = 4;
  LinearizedSymbol p;
  p.delta_u = u;
  const double rate = dispersion(p, m).growth_rate();
  REQUIRE(rate > 0.5);
  const Eigen::Matrix4d jac = mode_jacobian(r, u, 1.0, 1.0, m, n);
  Eigen::EigenSolver<Eigen::Matrix4d> es(jac);
  int k = 0;
  for (int i = 1; i < 4; ++i)
    if (es.eigenvalues()[i].real() > es.eigenvalues()[k].real()) k = i;
  // real initial data: the real part of the growing eigenvector
  Eigen::Vector4d x = es.eigenvectors().col(k).real();
  x *= 1e-7 / x.head<2>().norm();

  VectorXcd z(n);
  VectorXd q(n);
  for (int j = 0; j < n; ++j) {
    const double a = 2.0 * kPi * j / n;
    z[j] = (r + x[0] * std::cos(m * a) + x[1] * std::sin(m * a)) * std::polar(1.0, a);
    q[j] = x[2] * std::cos(m * a) + x[3] * std::sin(m * a);
  }
  SheetState s;
  s.curve = ClosedCurve(z);
  s.q = q;
  s.circulation = 2.0 * kPi * r * u;
  s.initial_area = s.curve.area();

  const double dt = 2e-3, t1 = 0.5, t2 = 1.5;
  double a1 = 0.0;
  while (s.time < t2 - 1e-12) {
    s = step(s, dt, StepOptions{0.5, true, true});
    if (std::abs(s.time - t1) < 1e-9) {
      const auto [c1, s1] = radial_mode(s.curve, m);
      a1 = std::hypot(c1, s1);
    }
  }
  const auto [c2, s2] = radial_mode(s.curve, m);
  const double measured = std::log(std::hypot(c2, s2) / a1) / (t2 - t1);
  CHECK(std::abs(measured - rate) / rate < 1e-3);
}

TEST_CASE("conservation on a capillary run") {
  const int n = 64;
  const SheetState s0 = make_state(ClosedCurve::perturbed_circle(1.0, 3, 1e-3, n), VectorXd::Zero(n), 1.0, 1.0);
  RunOptions opt;
  opt.t_end = 1.0;
  opt.report_every = 1000;
  const double dt_ref = 0.9 * max_stable_dt(s0, 0.5);
  opt.dt = 1.0 / std::ceil(1.0 / dt_ref);
  const RunResult r = run(s0, opt);
  CHECK(r.status == RunStatus::completed);
  CHECK(r.e0_drift < 1e-6);
  CHECK(r.area_drift < 1e-8);
  CHECK(r.final_state.time == doctest::Approx(1.0));
}

TEST_CASE("zero-velocity circle has a flat E0 series") {
  const SheetState s0 = make_state(ClosedCurve::circle(1.0, 32), VectorXd::Zero(32), 1.0, 1.0);
  RunOptions opt;
  opt.dt = 0.02;
  opt.t_end = 1.0;
  opt.report_every = 10;
  const RunResult r = run(s0, opt);
  CHECK(r.reports.size() == 6);
  for (const EnergyReport& e : r.reports) CHECK(e.e0 == doctest::Approx(2.0 * kPi).epsilon(1e-13));
  CHECK(r.e0_drift < 1e-13);
}

TEST_CASE("irrotational flow stays curl-free and satisfies Euler") {
  const int n = 128;
  VectorXd q(n);
  for (int j = 0; j < n; ++j) {
    const double a = 2.0 * kPi * j / n;
    q[j] = 0.5 * std::cos(2.0 * a) + 0.3 * std::sin(3.0 * a);
  }
  const SheetState s = make_state(ClosedCurve::perturbed_circle(1.0, 3, 0.1, n), q, 1.0, 2.0);
  const std::vector<EulerProbe> probes = {{0.3, Side::interior},
                                          {Complex(-0.2, 0.4), Side::interior},
                                          {Complex(1.8, 0.3), Side::exterior},
                                          {Complex(-1.2, -1.5), Side::exterior}};
  const double coarse = euler_residual(s, 0.04, probes);
  const double fine = euler_residual(s, 0.02, probes);
  CHECK(coarse / fine > 12.0);
  CHECK(fine < 1e-6);

  const TwoPhaseVelocity vel = sheet_velocity(s).velocity();
  const double h = 1e-3;
  for (const EulerProbe& pr : probes) {
    const SideVelocity& v = vel.side(pr.side);
    auto d = [&](Complex dir) {
      return (-v.value(pr.point + 2.0 * h * dir) + 8.0 * v.value(pr.point + h * dir) -
              8.0 * v.value(pr.point - h * dir) + v.value(pr.point - 2.0 * h * dir)) /
             (12.0 * h);
    };
    const double curl = d(1.0).imag() - d(Complex(0.0, 1.0)).real();
    CHECK(std::abs(curl) < 1e-8);
  }
}
