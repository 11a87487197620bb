#include "ilab/energy.hpp"

#include <charconv>
#include <cmath>

#include "ilab/errors.hpp"

namespace ilab {

namespace {
constexpr double kPi = 3.14159265358979323846;

const PotentialVelocity& as_potential(const SideVelocity& v) {
  const auto* p = dynamic_cast<const PotentialVelocity*>(&v);
  if (!p || !p->potential()) throw ContractError("boundary energy form needs a layer-potential velocity");
  return *p;
}

double kinetic_volume(const VolumeGrid& grid, const SideVelocity& v) {
  return 0.5 * grid.integrate(grid.sample([&v](Complex z) { return std::norm(v.value(z)); }));
}

VectorXd nbar(const CurveOperators& ops, const VectorXd& f, double rp, double rm) { return dtn_bar(ops, f, rp, rm); }

VectorXd apply_energy_A(const CurveOperators& ops, const VectorXd& v, double rp, double rm, int k) {
  const ClosedCurve& c = ops.curve();
  VectorXd x = -surface_laplacian(c, v);
  for (int i = 1; i < k; ++i) x = -surface_laplacian(c, nbar(ops, x, rp, rm));
  return x;
}

VectorXd apply_energy_kappa(const CurveOperators& ops, const VectorXd& f, double rp, double rm, int k) {
  const ClosedCurve& c = ops.curve();
  VectorXd y = f;
  for (int i = 1; i < k; ++i) y = -surface_laplacian(c, nbar(ops, y, rp, rm));
  return nbar(ops, y, rp, rm);
}

double vorticity(const SideVelocity& v, Complex z) {
  const Eigen::Matrix2d j = v.jacobian(z);
  return j(1, 0) - j(0, 1);
}

// |omega|^2 + |grad omega|^2 + |D^2 omega|^2 with centered differences.
double vorticity_h2_density(const SideVelocity& v, Complex z, double h) {
  const Complex ex(h, 0.0), ey(0.0, h);
  const double w0 = vorticity(v, z);
  const double wxp = vorticity(v, z + ex), wxm = vorticity(v, z - ex);
  const double wyp = vorticity(v, z + ey), wym = vorticity(v, z - ey);
  const double wx = (wxp - wxm) / (2.0 * h), wy = (wyp - wym) / (2.0 * h);
  const double wxx = (wxp - 2.0 * w0 + wxm) / (h * h), wyy = (wyp - 2.0 * w0 + wym) / (h * h);
  const double wxy = (vorticity(v, z + ex + ey) - vorticity(v, z + ex - ey) - vorticity(v, z - ex + ey) +
                      vorticity(v, z - ex - ey)) /
                     (4.0 * h * h);
  return w0 * w0 + wx * wx + wy * wy + wxx * wxx + 2.0 * wxy * wxy + wyy * wyy;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

double energy_E0(const TwoPhaseVelocity& vel, double rho_plus, double rho_minus) {
  const ClosedCurve& c = vel.curve();
  if (const auto* p = dynamic_cast<const PotentialVelocity*>(vel.minus.get()); p && p->circulation() != 0.0) {
    throw TruncationError("exterior kinetic energy diverges with nonzero circulation");
  }
  const VolumeGrid in = build_volume_grid(c, Side::interior);
  const VolumeGrid out = build_volume_grid(c, Side::exterior);
  return rho_plus * kinetic_volume(in, *vel.plus) + rho_minus * kinetic_volume(out, *vel.minus) + c.length();
}

double energy_E0_boundary(const TwoPhaseVelocity& vel, double rho_plus, double rho_minus) {
  const ClosedCurve& c = vel.curve();
  const PotentialVelocity& vp = as_potential(*vel.plus);
  const PotentialVelocity& vm = as_potential(*vel.minus);
  const HarmonicExtension& a = *vp.potential();
  const HarmonicExtension& b = *vm.potential();
  double kinetic = rho_plus * integrate(c, a.boundary_trace().cwiseProduct(a.normal_derivative()));
  double outer = integrate(c, b.boundary_trace().cwiseProduct(b.normal_derivative()));
  const double gamma = vm.circulation();
  if (gamma != 0.0) {
    const Complex z0 = vm.vortex_center();
    const VectorXd flux = circulation_flux(c, z0);  // d_N- theta / 2 pi
    outer += 2.0 * gamma * integrate(c, b.boundary_trace().cwiseProduct(flux));
    // renormalized int |grad theta|^2 = -int log|z - z0| d theta
    double self = 0.0;
    for (int j = 0; j < c.size(); ++j) {
      const Complex dz = c.nodes()[j] - z0;
      self -= std::log(std::abs(dz)) * std::imag(c.z_alpha()[j] / dz);
    }
    self *= c.mesh();
    outer += gamma * gamma / (4.0 * kPi * kPi) * self;
  }
  kinetic += rho_minus * outer;
  return 0.5 * kinetic + c.length();
}

MatrixXd energy_operator_A(const CurveOperators& ops, double rho_plus, double rho_minus, int k) {
  const int n = ops.size();
  MatrixXd m(n, n);
  for (int j = 0; j < n; ++j) m.col(j) = apply_energy_A(ops, VectorXd::Unit(n, j), rho_plus, rho_minus, k);
  return m;
}

MatrixXd energy_operator_kappa(const CurveOperators& ops, double rho_plus, double rho_minus, int k) {
  const int n = ops.size();
  MatrixXd m(n, n);
  for (int j = 0; j < n; ++j) m.col(j) = apply_energy_kappa(ops, VectorXd::Unit(n, j), rho_plus, rho_minus, k);
  return m;
}

EnergyReport energy_E(const TwoPhaseVelocity& vel, double rho_plus, double rho_minus, int k) {
  if (k < 2) throw ContractError("energy order k must be an integer >= 2");
  const CurveOperators& ops = *vel.ops;
  const ClosedCurve& c = ops.curve();
  EnergyReport r;
  r.k = k;
  r.e_a = integrate(c, vel.normal_plus.cwiseProduct(apply_energy_A(ops, vel.normal_plus, rho_plus, rho_minus, k)));
  const VectorXd kappa = project_mean_zero(c, c.kappa());
  r.e_kappa = integrate(c, kappa.cwiseProduct(apply_energy_kappa(ops, kappa, rho_plus, rho_minus, k)));
  if (!(vel.plus->irrotational() && vel.minus->irrotational())) {
    const double h = 1e-3 * c.length() / (2.0 * kPi);
    for (Side side : {Side::interior, Side::exterior}) {
      const VolumeGrid grid = build_volume_grid(c, side);
      const SideVelocity& v = vel.side(side);
      r.e_omega += grid.integrate(grid.sample([&](Complex z) { return vorticity_h2_density(v, z, h); }));
    }
  }
  r.kappa_norm = sobolev_norm(c, kappa, 1.5 * k - 1.0);
  r.normal_norm = sobolev_norm(c, vel.normal_plus, 1.5 * k - 0.5);
  return r;
}

void write_energy_header(std::ostream& out) {
  out << "time,E0,E_A,E_kappa,E_omega,E_total,k,kappa_norm,normal_norm\n";
}

void write_energy_row(std::ostream& out, const EnergyReport& r) {
  out << format_double(r.time) << ',' << format_double(r.e0) << ',' << format_double(r.e_a) << ','
      << format_double(r.e_kappa) << ',' << format_double(r.e_omega) << ',' << format_double(r.total()) << ','
      << r.k << ',' << format_double(r.kappa_norm) << ',' << format_double(r.normal_norm) << '\n';
}

// ---------------------------------------------------------------- Poly3

Poly3 Poly3::constant(double c) { return monomial(c, 0, 0, 0); }

Poly3 Poly3::monomial(double c, int t, int x, int y) {
  Poly3 p;
  if (c != 0.0) p.terms_[{t, x, y}] = c;
  return p;
}

double Poly3::operator()(double t, double x, double y) const {
  double s = 0.0;
  for (const auto& [k, c] : terms_) s += c * std::pow(t, k[0]) * std::pow(x, k[1]) * std::pow(y, k[2]);
  return s;
}

Poly3 Poly3::derivative(int variable) const {
  Poly3 p;
  for (const auto& [k, c] : terms_) {
    if (k[variable] == 0) continue;
    Key d = k;
    d[variable] -= 1;
    p.terms_[d] += c * k[variable];
  }
  return p;
}

Poly3 Poly3::operator+(const Poly3& o) const {
  Poly3 p = *this;
  for (const auto& [k, c] : o.terms_) p.terms_[k] += c;
  return p;
}

Poly3 Poly3::operator-(const Poly3& o) const { return *this + o * -1.0; }

Poly3 Poly3::operator*(const Poly3& o) const {
  Poly3 p;
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : o.terms_) p.terms_[{a[0] + b[0], a[1] + b[1], a[2] + b[2]}] += ca * cb;
  return p;
}

Poly3 Poly3::operator*(double s) const {
  Poly3 p = *this;
  for (auto& [k, c] : p.terms_) c *= s;
  return p;
}

double curl_evolution_residual(const PolynomialFlow& flow, const std::vector<std::array<double, 3>>& probes) {
  const Poly3* v[2] = {&flow.vx, &flow.vy};
  // g[i][j] = d_i v^j
  Poly3 g[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g[i][j] = v[j]->derivative(1 + i);
  auto material = [&](const Poly3& f) {
    return f.derivative(0) + flow.vx * f.derivative(1) + flow.vy * f.derivative(2);
  };
  const Poly3 accel[2] = {material(flow.vx), material(flow.vy)};
  const Poly3 omega01 = g[0][1] - g[1][0];  // omega = g - g^T, antisymmetric
  const Poly3 dt_omega01 = material(omega01);
  const Poly3 curl_a01 = accel[1].derivative(1) - accel[0].derivative(2);
  double worst = 0.0;
  for (const auto& pt : probes) {
    const double t = pt[0], x = pt[1], y = pt[2];
    Eigen::Matrix2d gm, om;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) gm(i, j) = g[i][j](t, x, y);
    const double w = omega01(t, x, y);
    om << 0.0, w, -w, 0.0;
    const Eigen::Matrix2d rhs = gm.transpose() * om + om * gm;
    const double residual = dt_omega01(t, x, y) - curl_a01(t, x, y) + rhs(0, 1);
    const double scale = 1.0 + std::abs(dt_omega01(t, x, y)) + std::abs(curl_a01(t, x, y)) + rhs.cwiseAbs().maxCoeff();
    worst = std::max(worst, std::abs(residual) / scale);
    // the (0,0) and (1,1) entries vanish identically for antisymmetric transport
    worst = std::max(worst, std::max(std::abs(rhs(0, 0)), std::abs(rhs(1, 1))) / scale);
  }
  return worst;
}

}  // namespace ilab
