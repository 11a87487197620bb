#include "ilab/linearized.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

#include "ilab/errors.hpp"

namespace ilab {

namespace {

VectorXd slip_flux(const TwoPhaseVelocity& v, const TwoPhaseVelocity& w) {
  return surface_derivative(w.curve(), VectorXd(w.normal_plus.cwiseProduct(v.slip())));
}

}  // namespace

TwoPhaseVelocity apply_A(OperatorsPtr ops, const TwoPhaseVelocity& w, double rho_plus, double rho_minus) {
  const VectorXd f0 = -surface_laplacian(ops->curve(), w.normal_plus);
  return lemma_potential(std::move(ops), f0, rho_plus, rho_minus);
}

TwoPhaseVelocity apply_R0(OperatorsPtr ops, const TwoPhaseVelocity& v, const TwoPhaseVelocity& w, double rho_plus,
                          double rho_minus) {
  const ClosedCurve& c = ops->curve();
  const VectorXd g = dtn_inverse(*ops, project_mean_zero(c, slip_flux(v, w)), rho_plus, rho_minus);
  const VectorXd f0 = v.slip().cwiseProduct(surface_derivative(c, g));
  return lemma_potential(std::move(ops), f0, rho_plus, rho_minus);
}

double form_A_volume(const TwoPhaseVelocity& w, double rho_plus, double rho_minus) {
  return weighted_inner(apply_A(w.ops, w, rho_plus, rho_minus), w, rho_plus, rho_minus);
}

double form_A_boundary(const TwoPhaseVelocity& w) {
  return integrate(w.curve(), surface_derivative(w.curve(), w.normal_plus).cwiseAbs2());
}

double form_R0_volume(const TwoPhaseVelocity& v, const TwoPhaseVelocity& w, double rho_plus, double rho_minus) {
  return -weighted_inner(apply_R0(w.ops, v, w, rho_plus, rho_minus), w, rho_plus, rho_minus);
}

double form_R0_boundary(const TwoPhaseVelocity& v, const TwoPhaseVelocity& w, double rho_plus, double rho_minus) {
  const ClosedCurve& c = w.curve();
  const VectorXd half = dtn_inverse_sqrt(*w.ops, rho_plus, rho_minus) * project_mean_zero(c, slip_flux(v, w));
  return integrate(c, half.cwiseAbs2());
}

MatrixXd dtn_inverse_sqrt(const CurveOperators& ops, double rho_plus, double rho_minus) {
  const ClosedCurve& c = ops.curve();
  const int n = c.size();
  const VectorXd sw = c.weights().cwiseSqrt();
  const MatrixXd combined = ops.dtn(Side::interior) / rho_plus + ops.dtn(Side::exterior) / rho_minus;
  MatrixXd sym = sw.asDiagonal() * combined * sw.cwiseInverse().asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
  // Null directions: the constant (and, for even n, the alternating mode). Keep
  // eigenvalues above a relative floor.
  const double floor = 1e-10 * es.eigenvalues().cwiseAbs().maxCoeff();
  VectorXd inv = VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) {
    if (es.eigenvalues()[k] > floor) inv[k] = 1.0 / std::sqrt(es.eigenvalues()[k]);
  }
  const MatrixXd& q = es.eigenvectors();
  return sw.cwiseInverse().asDiagonal() * (q * inv.asDiagonal() * q.transpose()) * sw.asDiagonal();
}

double cn_defect_norm(const CurveOperators& ops, Side side) {
  const ClosedCurve& c = ops.curve();
  const VectorXd sw = c.weights().cwiseSqrt();
  MatrixXd lap = sw.asDiagonal() * (-surface_laplacian_matrix(c)) * sw.cwiseInverse().asDiagonal();
  lap = 0.5 * (lap + lap.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(lap);
  // the constant mode carries roundoff that the square root would amplify
  const double floor = 1e-12 * es.eigenvalues().cwiseAbs().maxCoeff();
  const VectorXd root = es.eigenvalues().unaryExpr([floor](double e) { return e > floor ? std::sqrt(e) : 0.0; });
  const MatrixXd half = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
  const MatrixXd dtn_sym = sw.asDiagonal() * ops.dtn(side) * sw.cwiseInverse().asDiagonal();
  // restrict to the trigonometric modes |k| <= n/4
  const int n = c.size();
  const int kmax = n / 4;
  MatrixXd basis(n, 2 * kmax + 1);
  for (int j = 0; j < n; ++j) {
    const double a = c.mesh() * j;
    basis(j, 0) = 1.0;
    for (int k = 1; k <= kmax; ++k) {
      basis(j, 2 * k - 1) = std::cos(k * a);
      basis(j, 2 * k) = std::sin(k * a);
    }
  }
  const MatrixXd q = Eigen::HouseholderQR<MatrixXd>(sw.asDiagonal() * basis).householderQ() *
                     MatrixXd::Identity(n, 2 * kmax + 1);
  const MatrixXd defect = q.transpose() * (half - dtn_sym) * q;
  return Eigen::JacobiSVD<MatrixXd>(defect).singularValues()[0];
}

double LinearizedSymbol::a(double m) const {
  const double rs = rho_plus + rho_minus;
  if (geometry == Geometry::flat) return m * m * m / rs;
  return m * m * m / (radius * radius * radius * rs);
}

double LinearizedSymbol::r(double m) const {
  const double rs = rho_plus + rho_minus;
  const double k = geometry == Geometry::flat ? m : m / radius;
  return k * k * delta_u * delta_u * rho_plus * rho_minus / (rs * rs);
}

DispersionPair dispersion(const LinearizedSymbol& p, double m) {
  if (!(m > 0.0)) throw ContractError("dispersion requires m >= 1");
  const double rs = p.rho_plus + p.rho_minus;
  Complex shift, disc;
  if (p.geometry == Geometry::flat) {
    // rho+ l^2 + rho- (l + i k U)^2 = -k^3
    const double k = m, u = p.delta_u;
    shift = Complex(0.0, -k * p.rho_minus * u / rs);
    disc = p.rho_plus * p.rho_minus * k * k * u * u / (rs * rs) - k * k * k / rs;
  } else {
    // rho+ l^2 + rho- (l + i Omega)^2 = -K, Omega = m U / R,
    // K = (m / R) ((m^2 - 1) / R^2 + rho- U^2 / R)
    const double r = p.radius, u = p.delta_u;
    const double omega = m * u / r;
    const double kk = (m / r) * ((m * m - 1.0) / (r * r) + p.rho_minus * u * u / r);
    shift = Complex(0.0, -omega * p.rho_minus / rs);
    disc = (p.rho_plus * p.rho_minus * omega * omega - rs * kk) / (rs * rs);
  }
  const Complex root = std::sqrt(disc);
  return {shift + root, shift - root};
}

std::optional<double> stability_threshold(const LinearizedSymbol& p) {
  const double rs = p.rho_plus + p.rho_minus;
  const double u2 = p.delta_u * p.delta_u;
  if (p.geometry == Geometry::flat) {
    if (u2 == 0.0) return std::nullopt;
    return p.rho_plus * p.rho_minus * u2 / rs;
  }
  // Discriminant sign follows -rs m^2 / R^2 + rho+ rho- U^2 m / R + rs / R^2 - rs rho- U^2 / R.
  const double r = p.radius;
  const double qa = -rs / (r * r), qb = p.rho_plus * p.rho_minus * u2 / r, qc = rs / (r * r) - rs * p.rho_minus * u2 / r;
  const double d = qb * qb - 4.0 * qa * qc;
  if (d <= 0.0) return std::nullopt;
  const double largest = (-qb - std::sqrt(d)) / (2.0 * qa);
  if (largest <= 1.0 + 1e-12) return std::nullopt;
  return largest;
}

}  // namespace ilab
