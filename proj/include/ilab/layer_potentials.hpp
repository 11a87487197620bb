#pragma once

// Harmonic extensions, Dirichlet-to-Neumann maps and zero-Dirichlet Poisson
// solves on both sides of a closed curve.
//
// A harmonic function is written as u = Re F with F analytic on the chosen
// side and represented by a Cauchy integral of a real density mu (the complex
// form of the double-layer potential). The principal-value Cauchy operator is
// discretized by subtracting the cotangent singularity and treating it with the
// exact periodic Hilbert transform, which keeps the Nystrom scheme spectrally
// accurate. The exterior problem adds an unknown constant (the value at
// infinity) and the constraint sum(mu) = 0, selecting the bounded solution.
//
// Off-curve evaluation uses the barycentric Cauchy formula on an upsampled copy
// of the boundary data, which stays accurate close to the curve.

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ilab/curve.hpp"
#include "ilab/quadrature.hpp"

namespace ilab {

using Eigen::MatrixXcd;

/// Assembled boundary operators of one curve. Immutable after construction.
class CurveOperators {
 public:
  explicit CurveOperators(ClosedCurve curve);

  const ClosedCurve& curve() const { return curve_; }
  int size() const { return curve_.size(); }

  /// PV Cauchy operator: (C g)(beta) = PV (1/2 pi i) int g(a) z'(a) / (z(a) - z(beta)) da.
  const MatrixXcd& cauchy() const { return cauchy_; }
  /// N+ and N- (outward normals of each domain; both nonnegative).
  const MatrixXd& dtn(Side side) const { return side == Side::interior ? dtn_plus_ : dtn_minus_; }
  const MatrixXd& derivative() const { return deriv_; }

  /// Dirichlet solve. Returns the density; for the exterior also the value at infinity.
  VectorXd interior_density(const VectorXd& f) const;
  VectorXd exterior_density(const VectorXd& f, double& far_field) const;

 private:
  ClosedCurve curve_;
  MatrixXcd cauchy_;
  MatrixXd deriv_;
  Eigen::PartialPivLU<MatrixXd> interior_lu_;
  Eigen::PartialPivLU<MatrixXd> exterior_lu_;
  MatrixXd dtn_plus_, dtn_minus_;
};

using OperatorsPtr = std::shared_ptr<const CurveOperators>;
OperatorsPtr make_operators(const ClosedCurve& curve);

/// Values of the analytic function F and its first two derivatives at a point.
struct AnalyticSample {
  Complex f, df, d2f;
};

/// Bounded harmonic extension of boundary data into one side.
class HarmonicExtension {
 public:
  HarmonicExtension(OperatorsPtr ops, const VectorXd& trace, Side side);

  Side side() const { return side_; }
  const VectorXd& density() const { return density_; }
  const VectorXd& boundary_trace() const { return trace_; }
  /// Value at infinity (exterior); zero for the interior.
  double far_field_constant() const { return far_field_; }
  /// Normal derivative along the outward normal of this side's domain.
  const VectorXd& normal_derivative() const { return normal_derivative_; }
  /// Boundary values of F, F', F'' at the nodes.
  const VectorXcd& boundary_analytic() const { return f_; }
  const VectorXcd& boundary_derivative() const { return df_; }
  const VectorXcd& boundary_second_derivative() const { return d2f_; }

  AnalyticSample analytic(Complex z) const;
  double value(Complex z) const { return analytic(z).f.real(); }
  /// Gradient as u_x + i u_y.
  Complex gradient(Complex z) const { return std::conj(analytic(z).df); }
  Eigen::Matrix2d hessian(Complex z) const;

  /// Gradient at the collocation nodes (one-sided limit).
  VectorXcd boundary_gradient() const { return df_.conjugate(); }

  /// Max |F(z_j) - trace_j| for evaluations just off each node (jump-relation check).
  double trace_defect(double offset) const;

 private:
  OperatorsPtr ops_;
  Side side_;
  VectorXd trace_, density_, normal_derivative_;
  double far_field_ = 0.0;
  VectorXcd f_, df_, d2f_;
  // upsampled copies for barycentric evaluation
  VectorXcd up_nodes_, up_weights_, up_f_, up_df_, up_d2f_;
};

HarmonicExtension harmonic_extend(OperatorsPtr ops, const VectorXd& f, Side side);

/// N+- f.
VectorXd dtn(const CurveOperators& ops, const VectorXd& f, Side side);
/// (1/rho+) N+ f + (1/rho-) N- f.
VectorXd dtn_combined(const CurveOperators& ops, const VectorXd& f, double rho_plus, double rho_minus);
/// (1/rho+) N+ N^{-1} (1/rho-) N- f.
VectorXd dtn_bar(const CurveOperators& ops, const VectorXd& f, double rho_plus, double rho_minus);
/// Mean-zero h with N h = g. Requires |int g dS| <= 1e-10 sqrt(L) ||g||.
VectorXd dtn_inverse(const CurveOperators& ops, const VectorXd& g, double rho_plus, double rho_minus);
/// Mean-zero h with N_side h = g (single-side Neumann-to-Dirichlet map).
VectorXd dtn_inverse_side(const CurveOperators& ops, const VectorXd& g, Side side);

/// Conjugate gradients for A h = g on the dS-mean-zero subspace, A self-adjoint
/// and positive there. Tolerance 1e-10 relative, at most 10 n iterations.
VectorXd solve_mean_zero(const ClosedCurve& curve, const MatrixXd& a, const VectorXd& g,
                         double tolerance = 1e-10);

/// u with -Delta u = source, given in closed form.
struct ParticularSolution {
  std::function<double(Complex)> value;
  std::function<Complex(Complex)> gradient;  // u_x + i u_y
};

/// Least-squares fit of a source by z^p conj(z)^q terms with exact particular
/// solutions. Interior: p, q >= 0. Exterior: p, q <= -2 (decay like |x|^-4).
class LaurentSource {
 public:
  static LaurentSource fit(const VolumeGrid& grid, const VectorXd& samples, int degree);
  double source(Complex z) const;
  ParticularSolution particular() const;
  double relative_residual() const { return residual_; }

 private:
  struct Term {
    int p, q;
    Complex coeff;  // source term Re(coeff z^p zbar^q)
  };
  std::vector<Term> terms_;
  Complex center_;
  double scale_ = 1.0;
  double residual_ = 0.0;
};

/// -Delta u = source on one side, u = 0 on the curve, u bounded.
class PoissonSolution {
 public:
  PoissonSolution(OperatorsPtr ops, ParticularSolution particular, Side side);

  Side side() const { return side_; }
  double value(Complex z) const;
  Complex gradient(Complex z) const;
  /// Normal derivative on the curve along the outward normal of this side.
  const VectorXd& normal_derivative() const { return normal_derivative_; }
  /// Max |u| over the collocation nodes; zero up to the particular-solution accuracy.
  double trace_defect() const;

 private:
  OperatorsPtr ops_;
  ParticularSolution particular_;
  Side side_;
  std::shared_ptr<HarmonicExtension> correction_;
  VectorXd normal_derivative_;
};

PoissonSolution poisson(OperatorsPtr ops, ParticularSolution particular, Side side);
/// Source sampled on a volume grid of the given side. Throws TruncationError if the
/// samples are not representable (insufficient decay on the exterior).
PoissonSolution poisson(OperatorsPtr ops, const VolumeGrid& grid, const VectorXd& source,
                        double fit_tolerance = 1e-8);

/// Binary cache of the DtN matrices keyed by the curve hash:
/// header {u64 hash, u32 n, u8 side}, then n*n row-major float64.
void save_operator_cache(const std::string& path, const CurveOperators& ops, Side side);
std::optional<MatrixXd> load_operator_cache(const std::string& path, const ClosedCurve& curve, Side side);

}  // namespace ilab
