#include "ilab/layer_potentials.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>

#include "ilab/errors.hpp"
#include "ilab/spectral.hpp"

namespace ilab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Complex kI(0.0, 1.0);
// Boundary data is upsampled by this factor before barycentric evaluation.
constexpr int kUpsample = 8;

// Singularity subtraction: C g(b) = (1/2 pi i) int (g(a) - g(b)) z'(a) / (z(a) - z(b)) da + g(b)/2.
// The integrand is smooth with diagonal limit g'(b), so the trapezoid rule is
// spectrally accurate; the diagonal limit enters through the spectral derivative.
MatrixXcd assemble_cauchy(const ClosedCurve& curve, const MatrixXd& deriv) {
  const int n = curve.size();
  const double h = curve.mesh();
  const VectorXcd& z = curve.nodes();
  const VectorXcd& za = curve.z_alpha();
  const Complex pre = h / (2.0 * kPi * kI);
  MatrixXcd c = pre * deriv.cast<Complex>();
  for (int i = 0; i < n; ++i) {
    Complex row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const Complex k = pre * za[j] / (z[j] - z[i]);
      c(i, j) += k;
      row += k;
    }
    c(i, i) += 0.5 - row;
  }
  return c;
}

double weighted_dot(const VectorXd& w, const VectorXd& a, const VectorXd& b) {
  return w.dot(a.cwiseProduct(b));
}

}  // namespace

CurveOperators::CurveOperators(ClosedCurve curve) : curve_(std::move(curve)) {
  const int n = curve_.size();
  deriv_ = spectral::derivative_matrix(n);
  cauchy_ = assemble_cauchy(curve_, deriv_);
  const MatrixXd re = cauchy_.real();
  const MatrixXd im = cauchy_.imag();
  const MatrixXd identity = MatrixXd::Identity(n, n);

  interior_lu_.compute(re + 0.5 * identity);
  MatrixXd bordered = MatrixXd::Zero(n + 1, n + 1);
  bordered.topLeftCorner(n, n) = re - 0.5 * identity;
  bordered.block(0, n, n, 1).setOnes();
  bordered.block(n, 0, 1, n).setOnes();
  exterior_lu_.compute(bordered);

  const MatrixXd interior_inverse = interior_lu_.solve(identity);
  MatrixXd rhs = MatrixXd::Zero(n + 1, n);
  rhs.topRows(n) = identity;
  const MatrixXd exterior_inverse = exterior_lu_.solve(rhs).topRows(n);
  const VectorXd inv_speed = curve_.speed().cwiseInverse();
  dtn_plus_ = inv_speed.asDiagonal() * (deriv_ * (im * interior_inverse));
  dtn_minus_ = -(inv_speed.asDiagonal() * (deriv_ * (im * exterior_inverse)));
}

VectorXd CurveOperators::interior_density(const VectorXd& f) const { return interior_lu_.solve(f); }

VectorXd CurveOperators::exterior_density(const VectorXd& f, double& far_field) const {
  const int n = size();
  VectorXd rhs = VectorXd::Zero(n + 1);
  rhs.head(n) = f;
  const VectorXd sol = exterior_lu_.solve(rhs);
  far_field = sol[n];
  return sol.head(n);
}

OperatorsPtr make_operators(const ClosedCurve& curve) { return std::make_shared<const CurveOperators>(curve); }

HarmonicExtension::HarmonicExtension(OperatorsPtr ops, const VectorXd& trace, Side side)
    : ops_(std::move(ops)), side_(side), trace_(trace) {
  const ClosedCurve& curve = ops_->curve();
  const int n = curve.size();
  if (trace.size() != n) throw ContractError("trace length must equal n_nodes");
  if (side == Side::interior) {
    density_ = ops_->interior_density(trace);
  } else {
    density_ = ops_->exterior_density(trace, far_field_);
  }
  const VectorXd conjugate = ops_->cauchy().imag() * density_;
  const MatrixXd& re = ops_->cauchy().real();
  const double jump = side == Side::interior ? 0.5 : -0.5;
  VectorXd residual = re * density_ + jump * density_ - trace;
  if (side == Side::exterior) residual.array() += far_field_;
  const double scale = std::max(1.0, trace.cwiseAbs().maxCoeff());
  if (!(residual.cwiseAbs().maxCoeff() < 1e-8 * scale)) {
    throw ConditioningError("Nystrom Dirichlet solve did not converge", residual.cwiseAbs().maxCoeff());
  }
  f_.resize(n);
  for (int j = 0; j < n; ++j) f_[j] = Complex(trace[j], conjugate[j]);
  df_ = spectral::derivative(f_).cwiseQuotient(curve.z_alpha());
  d2f_ = spectral::derivative(df_).cwiseQuotient(curve.z_alpha());
  const VectorXd dconj = spectral::derivative(conjugate).cwiseQuotient(curve.speed());
  normal_derivative_ = side == Side::interior ? dconj : VectorXd(-dconj);

  const int m = kUpsample * n;
  up_nodes_ = spectral::resample(curve.nodes(), m);
  up_weights_ = spectral::resample(curve.z_alpha(), m) * (2.0 * kPi / m);
  up_f_ = spectral::resample(f_, m);
  up_df_ = spectral::resample(df_, m);
  up_d2f_ = spectral::resample(d2f_, m);
}

AnalyticSample HarmonicExtension::analytic(Complex z) const {
  const Eigen::Index m = up_nodes_.size();
  Complex s0 = 0.0, s_f = 0.0, s_df = 0.0, s_d2f = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const Complex diff = up_nodes_[j] - z;
    if (std::abs(diff) < 1e-14) return {up_f_[j], up_df_[j], up_d2f_[j]};
    const Complex k = up_weights_[j] / diff;
    s0 += k;
    s_f += k * up_f_[j];
    s_df += k * up_df_[j];
    s_d2f += k * up_d2f_[j];
  }
  if (side_ == Side::interior) return {s_f / s0, s_df / s0, s_d2f / s0};
  const Complex two_pi_i = 2.0 * kPi * kI;
  const Complex denom = s0 - two_pi_i;
  return {(s_f - two_pi_i * far_field_) / denom, s_df / denom, s_d2f / denom};
}

Eigen::Matrix2d HarmonicExtension::hessian(Complex z) const {
  const Complex d2 = analytic(z).d2f;
  Eigen::Matrix2d hess;
  hess << d2.real(), -d2.imag(), -d2.imag(), -d2.real();
  return hess;
}

double HarmonicExtension::trace_defect(double offset) const {
  const ClosedCurve& curve = ops_->curve();
  const double sign = side_ == Side::interior ? -1.0 : 1.0;
  double worst = 0.0;
  for (int j = 0; j < curve.size(); ++j) {
    const Complex z = curve.nodes()[j] + sign * offset * curve.normal()[j];
    worst = std::max(worst, std::abs(value(z) - trace_[j]));
  }
  return worst;
}

HarmonicExtension harmonic_extend(OperatorsPtr ops, const VectorXd& f, Side side) {
  return HarmonicExtension(std::move(ops), f, side);
}

VectorXd dtn(const CurveOperators& ops, const VectorXd& f, Side side) { return ops.dtn(side) * f; }

VectorXd dtn_combined(const CurveOperators& ops, const VectorXd& f, double rho_plus, double rho_minus) {
  if (!(rho_plus > 0.0 && rho_minus > 0.0)) throw ContractError("densities must be positive");
  return ops.dtn(Side::interior) * f / rho_plus + ops.dtn(Side::exterior) * f / rho_minus;
}

VectorXd dtn_bar(const CurveOperators& ops, const VectorXd& f, double rho_plus, double rho_minus) {
  const VectorXd inner_arg = project_mean_zero(ops.curve(), ops.dtn(Side::exterior) * f / rho_minus);
  const MatrixXd combined = ops.dtn(Side::interior) / rho_plus + ops.dtn(Side::exterior) / rho_minus;
  // tight inner solve so the composite stays self-adjoint to roundoff
  return ops.dtn(Side::interior) * solve_mean_zero(ops.curve(), combined, inner_arg, 1e-14) / rho_plus;
}

VectorXd solve_mean_zero(const ClosedCurve& curve, const MatrixXd& a, const VectorXd& g, double tolerance) {
  const VectorXd& w = curve.weights();
  const int n = curve.size();
  auto project = [&curve](const VectorXd& v) { return project_mean_zero(curve, v); };
  // Spectral differentiation annihilates the alternating mode, leaving a near-null
  // vector close to it. Restore that unresolved mode with the eigenvalue of the
  // highest resolved cosine so the operator is definite on mean-zero fields.
  VectorXd shift;
  double shift_scale = 0.0;
  if (n % 2 == 0) {
    shift = project(VectorXd::NullaryExpr(n, [](Eigen::Index j) { return j % 2 == 0 ? 1.0 : -1.0; }));
    VectorXd top(n);
    for (int j = 0; j < n; ++j) top[j] = std::cos((n / 2 - 1) * 2.0 * kPi * j / n);
    top = project(top);
    shift_scale = weighted_dot(w, top, a * top) / weighted_dot(w, top, top) / weighted_dot(w, shift, shift);
  }
  auto apply = [&](const VectorXd& v) {
    VectorXd out = project(a * v);
    if (shift_scale != 0.0) out += (shift_scale * weighted_dot(w, shift, v)) * shift;
    return out;
  };
  // drop the alternating component W-orthogonally on input and output, which keeps
  // the solution operator self-adjoint in L2(dS)
  auto drop = [&](const VectorXd& v) -> VectorXd {
    if (shift_scale == 0.0) return v;
    return v - (weighted_dot(w, shift, v) / weighted_dot(w, shift, shift)) * shift;
  };
  VectorXd h = VectorXd::Zero(n);
  const VectorXd rhs = drop(project(g));
  VectorXd r = rhs;
  const double g_norm = std::sqrt(weighted_dot(w, g, g));
  if (g_norm == 0.0) return h;
  VectorXd p = r;
  double rs = weighted_dot(w, r, r);
  bool converged = std::sqrt(rs) <= tolerance * g_norm;
  for (int it = 0; it < 10 * n && !converged; ++it) {
    const VectorXd ap = apply(p);
    const double curvature = weighted_dot(w, p, ap);
    if (!(curvature > 0.0)) {
      throw ConditioningError("operator not positive on the mean-zero subspace", std::sqrt(rs) / g_norm);
    }
    const double step = rs / curvature;
    h += step * p;
    r -= step * ap;
    const double rs_new = weighted_dot(w, r, r);
    converged = std::sqrt(rs_new) <= tolerance * g_norm;
    p = r + (rs_new / rs) * p;
    rs = rs_new;
  }
  h = drop(project(h));
  if (!converged) {
    const VectorXd true_r = rhs - apply(h);
    const double rel = std::sqrt(weighted_dot(w, true_r, true_r)) / g_norm;
    if (rel > 100.0 * tolerance) throw ConditioningError("mean-zero CG stagnated", rel);
  }
  return h;
}

VectorXd dtn_inverse(const CurveOperators& ops, const VectorXd& g, double rho_plus, double rho_minus) {
  const ClosedCurve& curve = ops.curve();
  const double defect = std::abs(integrate(curve, g));
  if (defect > 1e-10 * std::sqrt(curve.length()) * l2_norm(curve, g) && defect > 1e-300) {
    throw ContractError("dtn_inverse requires a mean-zero argument");
  }
  const MatrixXd combined =
      ops.dtn(Side::interior) / rho_plus + ops.dtn(Side::exterior) / rho_minus;
  return solve_mean_zero(curve, combined, g);
}

VectorXd dtn_inverse_side(const CurveOperators& ops, const VectorXd& g, Side side) {
  return solve_mean_zero(ops.curve(), ops.dtn(side), g);
}

// ---------------------------------------------------------------- Poisson

LaurentSource LaurentSource::fit(const VolumeGrid& grid, const VectorXd& samples, int degree) {
  LaurentSource out;
  out.center_ = grid.center;
  const Eigen::Index npts = grid.points.size();
  if (grid.side == Side::interior) {
    double r = 0.0;
    for (Eigen::Index i = 0; i < npts; ++i) r = std::max(r, std::abs(grid.points[i] - grid.center));
    out.scale_ = r;
    for (int p = 0; p <= degree; ++p)
      for (int q = 0; q <= p && p + q <= degree; ++q) out.terms_.push_back({p, q, 0.0});
  } else {
    double r = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < npts; ++i) r = std::min(r, std::abs(grid.points[i] - grid.center));
    out.scale_ = r;
    for (int p = -2; p >= -2 - degree; --p)
      for (int q = p; q >= -2 - degree; --q)
        if (-p - q <= 4 + degree) out.terms_.push_back({p, q, 0.0});
  }
  std::vector<std::pair<int, bool>> columns;  // (term index, imaginary part)
  for (int t = 0; t < static_cast<int>(out.terms_.size()); ++t) {
    columns.push_back({t, false});
    if (out.terms_[t].p != out.terms_[t].q) columns.push_back({t, true});
  }
  MatrixXd a(npts, columns.size());
  VectorXd b(npts);
  for (Eigen::Index i = 0; i < npts; ++i) {
    const double sw = std::sqrt(grid.weights[i]);
    const Complex xi = (grid.points[i] - out.center_) / out.scale_;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto& term = out.terms_[columns[c].first];
      const Complex basis = std::pow(xi, term.p) * std::pow(std::conj(xi), term.q);
      a(i, c) = sw * (columns[c].second ? -basis.imag() : basis.real());
    }
    b[i] = sw * samples[i];
  }
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    out.terms_.clear();
    return out;
  }
  const VectorXd x = a.colPivHouseholderQr().solve(b);
  out.residual_ = (a * x - b).norm() / b_norm;
  for (auto& term : out.terms_) term.coeff = 0.0;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    auto& term = out.terms_[columns[c].first];
    term.coeff += columns[c].second ? Complex(0.0, x[c]) : Complex(x[c], 0.0);
  }
  return out;
}

double LaurentSource::source(Complex z) const {
  const Complex xi = (z - center_) / scale_;
  double s = 0.0;
  for (const auto& t : terms_) s += std::real(t.coeff * std::pow(xi, t.p) * std::pow(std::conj(xi), t.q));
  return s;
}

ParticularSolution LaurentSource::particular() const {
  // -Delta u = Re(c xi^p xibar^q) with xi = (z - center)/scale is solved by
  // u = -scale^2 Re(c xi^{p+1} xibar^{q+1}) / (4 (p+1)(q+1)).
  auto terms = terms_;
  const Complex center = center_;
  const double scale = scale_;
  ParticularSolution sol;
  sol.value = [terms, center, scale](Complex z) {
    const Complex xi = (z - center) / scale;
    double u = 0.0;
    for (const auto& t : terms) {
      const double factor = -scale * scale / (4.0 * (t.p + 1) * (t.q + 1));
      u += factor * std::real(t.coeff * std::pow(xi, t.p + 1) * std::pow(std::conj(xi), t.q + 1));
    }
    return u;
  };
  sol.gradient = [terms, center, scale](Complex z) {
    const Complex xi = (z - center) / scale;
    const Complex xib = std::conj(xi);
    double gx = 0.0, gy = 0.0;
    for (const auto& t : terms) {
      const double factor = -scale / (4.0 * (t.p + 1) * (t.q + 1));
      const int a = t.p + 1, b = t.q + 1;
      const Complex d_xi = static_cast<double>(a) * std::pow(xi, a - 1) * std::pow(xib, b);
      const Complex d_xib = static_cast<double>(b) * std::pow(xi, a) * std::pow(xib, b - 1);
      gx += factor * std::real(t.coeff * (d_xi + d_xib));
      gy += factor * std::real(t.coeff * kI * (d_xi - d_xib));
    }
    return Complex(gx, gy);
  };
  return sol;
}

PoissonSolution::PoissonSolution(OperatorsPtr ops, ParticularSolution particular, Side side)
    : ops_(std::move(ops)), particular_(std::move(particular)), side_(side) {
  const ClosedCurve& curve = ops_->curve();
  const int n = curve.size();
  VectorXd trace(n);
  VectorXd grad_normal(n);
  const double sign = side == Side::interior ? 1.0 : -1.0;
  for (int j = 0; j < n; ++j) {
    const Complex z = curve.nodes()[j];
    trace[j] = particular_.value(z);
    grad_normal[j] = sign * std::real(std::conj(particular_.gradient(z)) * curve.normal()[j]);
  }
  correction_ = std::make_shared<HarmonicExtension>(ops_, trace, side);
  normal_derivative_ = grad_normal - correction_->normal_derivative();
}

double PoissonSolution::value(Complex z) const { return particular_.value(z) - correction_->value(z); }

Complex PoissonSolution::gradient(Complex z) const {
  return particular_.gradient(z) - correction_->gradient(z);
}

double PoissonSolution::trace_defect() const {
  const ClosedCurve& curve = ops_->curve();
  double worst = 0.0;
  for (int j = 0; j < curve.size(); ++j) worst = std::max(worst, std::abs(value(curve.nodes()[j])));
  return worst;
}

PoissonSolution poisson(OperatorsPtr ops, ParticularSolution particular, Side side) {
  return PoissonSolution(std::move(ops), std::move(particular), side);
}

PoissonSolution poisson(OperatorsPtr ops, const VolumeGrid& grid, const VectorXd& source, double fit_tolerance) {
  const int degree = grid.side == Side::interior ? 12 : 8;
  const LaurentSource fit = LaurentSource::fit(grid, source, degree);
  if (fit.relative_residual() > fit_tolerance) {
    throw TruncationError(grid.side == Side::exterior
                              ? "exterior source does not decay fast enough to be represented"
                              : "interior source not representable to tolerance");
  }
  return PoissonSolution(std::move(ops), fit.particular(), grid.side);
}

// ---------------------------------------------------------------- cache

void save_operator_cache(const std::string& path, const CurveOperators& ops, Side side) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open cache file for writing: " + path);
  const std::uint64_t hash = ops.curve().hash();
  const std::uint32_t n = static_cast<std::uint32_t>(ops.size());
  const std::uint8_t tag = side == Side::interior ? 0 : 1;
  out.write(reinterpret_cast<const char*>(&hash), sizeof hash);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&tag), sizeof tag);
  const MatrixXd& m = ops.dtn(side);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      const double v = m(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
}

std::optional<MatrixXd> load_operator_cache(const std::string& path, const ClosedCurve& curve, Side side) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::uint64_t hash = 0;
  std::uint32_t n = 0;
  std::uint8_t tag = 0;
  in.read(reinterpret_cast<char*>(&hash), sizeof hash);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&tag), sizeof tag);
  if (!in || hash != curve.hash() || static_cast<int>(n) != curve.size() ||
      tag != (side == Side::interior ? 0 : 1)) {
    return std::nullopt;
  }
  MatrixXd m(n, n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) in.read(reinterpret_cast<char*>(&m(i, j)), sizeof(double));
  if (!in) return std::nullopt;
  return m;
}

}  // namespace ilab
