#include "ilab/curve.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "ilab/errors.hpp"
#include "ilab/spectral.hpp"

namespace ilab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegenerateSpeed = 1e-12;
}  // namespace

ClosedCurve::ClosedCurve(VectorXcd nodes) : z_(std::move(nodes)) {
  const int n = size();
  if (n < 8) throw GeometryError("curve needs at least 8 nodes");
  coeffs_ = spectral::forward(z_);
  za_ = spectral::derivative(z_);
  zaa_ = spectral::derivative(z_, 2);
  speed_ = za_.cwiseAbs();
  const double scale = speed_.maxCoeff();
  if (!(speed_.minCoeff() > kDegenerateSpeed * std::max(1.0, scale))) {
    throw GeometryError("degenerate parametrization: |z'| vanishes");
  }
  tangent_ = za_.cwiseQuotient(speed_.cast<Complex>());
  normal_ = tangent_ * Complex(0.0, -1.0);
  kappa_.resize(n);
  for (int j = 0; j < n; ++j) {
    kappa_[j] = std::imag(std::conj(za_[j]) * zaa_[j]) / std::pow(speed_[j], 3);
  }
  weights_ = speed_ * mesh();
  length_ = weights_.sum();
  double area2 = 0.0;
  Complex moment = 0.0;
  for (int j = 0; j < n; ++j) {
    const double da = std::imag(std::conj(z_[j]) * za_[j]);
    area2 += da;
    moment += z_[j] * da;
  }
  area_ = 0.5 * area2 * mesh();
  if (area_ <= 0.0) throw GeometryError("curve must be oriented counterclockwise");
  // centroid of the enclosed region: (1/3A) * (1/2) oint z Im(conj z dz)
  centroid_ = moment * mesh() / (3.0 * area_);
  resolved_ = spectral::tail_energy_fraction(VectorXcd(z_.array() - z_.mean())) < 1e-10;
}

ClosedCurve ClosedCurve::from_coefficients(const std::vector<Complex>& coeffs, int n_nodes) {
  const int m = (static_cast<int>(coeffs.size()) - 1) / 2;
  if (static_cast<int>(coeffs.size()) != 2 * m + 1) throw ContractError("need 2M+1 coefficients");
  if (n_nodes < 2 * m + 2) throw ContractError("n_nodes must be at least 2M+2");
  VectorXcd c = VectorXcd::Zero(n_nodes);
  for (int k = -m; k <= m; ++k) c[(k + n_nodes) % n_nodes] = coeffs[k + m];
  return ClosedCurve(spectral::inverse(c));
}

double ClosedCurve::mesh() const { return 2.0 * kPi / size(); }

ClosedCurve ClosedCurve::circle(double radius, int n_nodes, Complex center) {
  VectorXcd z(n_nodes);
  for (int j = 0; j < n_nodes; ++j) z[j] = center + std::polar(radius, 2.0 * kPi * j / n_nodes);
  return ClosedCurve(z);
}

ClosedCurve ClosedCurve::ellipse(double a, double b, int n_nodes, Complex center) {
  VectorXcd z(n_nodes);
  for (int j = 0; j < n_nodes; ++j) {
    const double t = 2.0 * kPi * j / n_nodes;
    z[j] = center + Complex(a * std::cos(t), b * std::sin(t));
  }
  return ClosedCurve(z);
}

ClosedCurve ClosedCurve::perturbed_circle(double radius, int mode, double eps, int n_nodes) {
  VectorXd r(n_nodes);
  for (int j = 0; j < n_nodes; ++j) r[j] = radius * (1.0 + eps * std::cos(mode * 2.0 * kPi * j / n_nodes));
  return star(r);
}

ClosedCurve ClosedCurve::star(const VectorXd& radius, Complex center) {
  const int n = static_cast<int>(radius.size());
  VectorXcd z(n);
  for (int j = 0; j < n; ++j) z[j] = center + std::polar(radius[j], 2.0 * kPi * j / n);
  return ClosedCurve(z);
}

std::vector<Complex> ClosedCurve::coefficients() const {
  const int n = size();
  const int m = n / 2 - 1;
  std::vector<Complex> out(2 * m + 1);
  for (int k = -m; k <= m; ++k) out[k + m] = coeffs_[(k + n) % n];
  return out;
}

Complex ClosedCurve::position_at(double alpha) const { return spectral::evaluate_complex(coeffs_, alpha); }

double ClosedCurve::simplicity_margin() const {
  const int n = size();
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double local = speed_[i] * mesh();
    for (int j = 0; j < n; ++j) {
      const int gap = std::abs(i - j);
      if (std::min(gap, n - gap) <= 1) continue;
      worst = std::min(worst, std::abs(z_[i] - z_[j]) / local);
    }
  }
  return worst;
}

std::uint64_t ClosedCurve::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (int j = 0; j < size(); ++j) {
    mix(z_[j].real());
    mix(z_[j].imag());
  }
  return h;
}

Frame frame(const ClosedCurve& curve) { return {curve.tangent(), curve.normal()}; }

BoundaryField curvature(const ClosedCurve& curve) {
  return {curve.kappa(), FieldParity::scalar, !curve.resolved()};
}

double integrate(const ClosedCurve& curve, const VectorXd& f) { return curve.weights().dot(f); }

double inner(const ClosedCurve& curve, const VectorXd& f, const VectorXd& g) {
  return curve.weights().dot(f.cwiseProduct(g));
}

double mean(const ClosedCurve& curve, const VectorXd& f) { return integrate(curve, f) / curve.length(); }

VectorXd project_mean_zero(const ClosedCurve& curve, const VectorXd& f) {
  return f.array() - mean(curve, f);
}

double l2_norm(const ClosedCurve& curve, const VectorXd& f) { return std::sqrt(inner(curve, f, f)); }

VectorXd surface_derivative(const ClosedCurve& curve, const VectorXd& f) {
  return spectral::derivative(f).cwiseQuotient(curve.speed());
}

VectorXd surface_laplacian(const ClosedCurve& curve, const VectorXd& f) {
  return surface_derivative(curve, surface_derivative(curve, f));
}

BoundaryField surface_laplacian(const ClosedCurve& curve, const BoundaryField& f) {
  if (f.parity != FieldParity::scalar && f.parity != FieldParity::normal_component) {
    throw ContractError("surface_laplacian expects a scalar field");
  }
  return {surface_laplacian(curve, f.values), FieldParity::scalar, !curve.resolved()};
}

BoundaryField surface_divergence(const ClosedCurve& curve, const BoundaryField& w_top) {
  if (w_top.parity != FieldParity::tangent_vector) {
    throw ContractError("surface_divergence expects a tangent-vector field");
  }
  return {surface_derivative(curve, w_top.values), FieldParity::scalar, !curve.resolved()};
}

MatrixXd surface_laplacian_matrix(const ClosedCurve& curve) {
  const MatrixXd d = spectral::derivative_matrix(curve.size());
  const VectorXd inv = curve.speed().cwiseInverse();
  const MatrixXd ds = inv.asDiagonal() * d;
  return ds * ds;
}

VectorXd equal_arclength_parameters(const ClosedCurve& curve, int m) {
  // s(alpha) = (L / 2pi) alpha + periodic part P(alpha).
  const VectorXd speed = curve.speed();
  const double slope = curve.length() / (2.0 * kPi);
  const VectorXcd p_coeffs = spectral::forward(VectorXd(spectral::antiderivative(speed.array() - slope)));
  const VectorXcd v_coeffs = spectral::forward(speed);
  const double p0 = spectral::evaluate(p_coeffs, 0.0);
  VectorXd alpha(m);
  for (int k = 0; k < m; ++k) {
    const double target = curve.length() * k / m;
    double a = 2.0 * kPi * k / m;
    for (int it = 0; it < 50; ++it) {
      const double s = slope * a + spectral::evaluate(p_coeffs, a) - p0;
      const double step = (s - target) / spectral::evaluate(v_coeffs, a);
      a -= step;
      if (std::abs(step) < 1e-15) break;
    }
    alpha[k] = a;
  }
  return alpha;
}

ClosedCurve reparametrize_equal_arclength(const ClosedCurve& curve) {
  const int n = curve.size();
  const VectorXd alpha = equal_arclength_parameters(curve, n);
  VectorXcd z(n);
  for (int k = 0; k < n; ++k) z[k] = curve.position_at(alpha[k]);
  return ClosedCurve(z);
}

VectorXd resample_arclength(const ClosedCurve& curve, const VectorXd& f) {
  const int n = curve.size();
  const VectorXd alpha = equal_arclength_parameters(curve, n);
  const VectorXcd c = spectral::forward(f);
  VectorXd out(n);
  for (int k = 0; k < n; ++k) out[k] = spectral::evaluate(c, alpha[k]);
  return out;
}

double sobolev_norm(const ClosedCurve& curve, const VectorXd& f, double s) {
  const VectorXcd c = spectral::forward(resample_arclength(curve, f));
  const int n = curve.size();
  const double length = curve.length();
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const int m = spectral::wavenumber(k, n);
    if (n % 2 == 0 && k == n / 2) continue;
    const double wave = 2.0 * kPi * m / length;
    sum += std::pow(1.0 + wave * wave, s) * std::norm(c[k]);
  }
  return std::sqrt(length * sum);
}

double simons_identity_residual(const ClosedCurve& curve) {
  const int n = curve.size();
  const VectorXd& kappa = curve.kappa();
  const VectorXd lap_kappa = surface_laplacian(curve, kappa);
  const VectorXd d2_kappa = surface_derivative(curve, surface_derivative(curve, kappa));
  double worst = 0.0, scale = 1e-300;
  for (int j = 0; j < n; ++j) {
    const Eigen::Vector2d t(curve.tangent()[j].real(), curve.tangent()[j].imag());
    const Eigen::Matrix2d tt = t * t.transpose();
    const Eigen::Matrix2d pi = kappa[j] * tt;
    const double pi_sq = (pi * pi).trace();
    // tau is parallel along a curve, so the covariant Laplacian acts on the coefficient.
    const Eigen::Matrix2d lap_pi = lap_kappa[j] * tt;
    const Eigen::Matrix2d d2k = d2_kappa[j] * tt;
    const Eigen::Matrix2d cubic = (pi_sq * tt - kappa[j] * pi) * pi;
    const Eigen::Matrix2d residual = -lap_pi + d2k - cubic;
    worst = std::max(worst, residual.cwiseAbs().maxCoeff());
    scale = std::max(scale, std::abs(d2_kappa[j]) + std::pow(std::abs(kappa[j]), 3));
  }
  return worst / scale;
}

void write_curve_spec(std::ostream& out, const ClosedCurve& curve) {
  const auto coeffs = curve.coefficients();
  const int m = (static_cast<int>(coeffs.size()) - 1) / 2;
  out << "curve-spec v1\n" << m << "\n";
  out.precision(17);
  for (const Complex& c : coeffs) out << c.real() << "\n" << c.imag() << "\n";
}

ClosedCurve read_curve_spec(std::istream& in, int n_nodes) {
  std::string header;
  std::getline(in, header);
  if (header != "curve-spec v1") throw ContractError("not a curve-spec v1 file");
  int m = -1;
  if (!(in >> m) || m < 1) throw ContractError("curve-spec: bad mode count");
  std::vector<Complex> coeffs(2 * m + 1);
  for (auto& c : coeffs) {
    double re = 0.0, im = 0.0;
    if (!(in >> re >> im)) throw ContractError("curve-spec: truncated coefficient list");
    c = Complex(re, im);
  }
  return ClosedCurve::from_coefficients(coeffs, n_nodes);
}

}  // namespace ilab
