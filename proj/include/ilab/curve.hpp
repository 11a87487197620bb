#pragma once

// Closed planar curves in Fourier collocation form and their intrinsic
// calculus. Points and planar vectors are stored as complex numbers x + iy.
// Curves are oriented counterclockwise; the interior is the compact domain
// Omega+, whose outward unit normal is N+ = -i * tangent.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace ilab {

using Complex = std::complex<double>;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

enum class FieldParity { scalar, tangent_vector, normal_component };

/// Samples on the collocation nodes of one curve. Tangent-vector fields
/// store the scalar g of g * tangent.
struct BoundaryField {
  VectorXd values;
  FieldParity parity = FieldParity::scalar;
  bool resolution_warning = false;
};

class ClosedCurve {
 public:
  /// Builds from node positions z(alpha_j), alpha_j = 2 pi j / n.
  /// Throws GeometryError for degenerate or clockwise parametrizations.
  explicit ClosedCurve(VectorXcd nodes);

  /// Builds from Fourier coefficients c_{-M..M} of z(alpha), sampled on n >= 2M + 2 nodes.
  static ClosedCurve from_coefficients(const std::vector<Complex>& coeffs, int n_nodes);

  static ClosedCurve circle(double radius, int n_nodes, Complex center = 0.0);
  static ClosedCurve ellipse(double a, double b, int n_nodes, Complex center = 0.0);
  /// r(alpha) = R (1 + eps cos(m alpha)).
  static ClosedCurve perturbed_circle(double radius, int mode, double eps, int n_nodes);
  /// Radial graph r(alpha) sampled on the nodes.
  static ClosedCurve star(const VectorXd& radius, Complex center = 0.0);

  int size() const { return static_cast<int>(z_.size()); }
  double mesh() const;  // 2 pi / n
  const VectorXcd& nodes() const { return z_; }
  const VectorXcd& z_alpha() const { return za_; }
  const VectorXcd& z_alpha_alpha() const { return zaa_; }
  /// |z'(alpha)|.
  const VectorXd& speed() const { return speed_; }
  const VectorXcd& tangent() const { return tangent_; }
  /// Outward normal of the interior domain.
  const VectorXcd& normal() const { return normal_; }
  /// kappa+ (positive 1/R on a circle).
  const VectorXd& kappa() const { return kappa_; }
  /// Quadrature weights for dS: h * |z'|.
  const VectorXd& weights() const { return weights_; }
  double length() const { return length_; }
  double area() const { return area_; }
  Complex centroid() const { return centroid_; }
  bool resolved() const { return resolved_; }

  /// Fourier coefficients c_{-M..M}, M = n/2 - 1.
  std::vector<Complex> coefficients() const;

  /// Trigonometric interpolant of the parametrization at arbitrary alpha.
  Complex position_at(double alpha) const;

  /// Smallest distance between non-adjacent nodes relative to local mesh width.
  double simplicity_margin() const;
  bool is_simple(double fraction = 0.5) const { return simplicity_margin() > fraction; }

  /// Mean-zero hash of the node coordinates, used to key operator caches.
  std::uint64_t hash() const;

 private:
  VectorXcd z_, za_, zaa_, coeffs_, tangent_, normal_;
  VectorXd speed_, kappa_, weights_;
  double length_ = 0.0, area_ = 0.0;
  Complex centroid_;
  bool resolved_ = false;
};

struct Frame {
  VectorXcd tangent;
  VectorXcd outward_normal;  // N+; N- is its negative
};

Frame frame(const ClosedCurve& curve);
BoundaryField curvature(const ClosedCurve& curve);

double integrate(const ClosedCurve& curve, const VectorXd& f);
double inner(const ClosedCurve& curve, const VectorXd& f, const VectorXd& g);
double mean(const ClosedCurve& curve, const VectorXd& f);
VectorXd project_mean_zero(const ClosedCurve& curve, const VectorXd& f);
double l2_norm(const ClosedCurve& curve, const VectorXd& f);

/// d/ds along the curve.
VectorXd surface_derivative(const ClosedCurve& curve, const VectorXd& f);
/// Laplace-Beltrami operator d^2/ds^2.
VectorXd surface_laplacian(const ClosedCurve& curve, const VectorXd& f);
BoundaryField surface_laplacian(const ClosedCurve& curve, const BoundaryField& f);
/// Divergence of the tangent field g * tangent, i.e. dg/ds. Rejects non-tangent input.
BoundaryField surface_divergence(const ClosedCurve& curve, const BoundaryField& w_top);

/// Dense matrix of Delta_S on the nodes.
MatrixXd surface_laplacian_matrix(const ClosedCurve& curve);

/// Parameter values alpha_k with s(alpha_k) = k L / m (equal arclength).
VectorXd equal_arclength_parameters(const ClosedCurve& curve, int m);
/// Same curve, reparametrized with uniform speed.
ClosedCurve reparametrize_equal_arclength(const ClosedCurve& curve);
/// f resampled at equal-arclength points.
VectorXd resample_arclength(const ClosedCurve& curve, const VectorXd& f);

/// Spectral H^s norm in the arclength Fourier basis:
///   ||f||_s^2 = L * sum_m (1 + k_m^2)^s |f_m|^2,  k_m = 2 pi m / L,
/// with f_m the normalized Fourier coefficients in arclength. For s = 0 this is
/// exactly the L^2(dS) norm; for other s it is equivalent (not equal) to the
/// norm built from powers of -Delta_S.
double sobolev_norm(const ClosedCurve& curve, const VectorXd& f, double s);

/// Residual of the Simons-type identity -Delta_S Pi + D^2 kappa - (|Pi|^2 I - kappa Pi) Pi,
/// assembled term by term with Pi = kappa tau (x) tau. Identically zero for curves.
double simons_identity_residual(const ClosedCurve& curve);

/// "curve-spec v1" text format: header, M, then Re/Im of c_{-M..M}, one per line.
void write_curve_spec(std::ostream& out, const ClosedCurve& curve);
ClosedCurve read_curve_spec(std::istream& in, int n_nodes);

}  // namespace ilab
