#include "ilab/evolver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ilab/errors.hpp"
#include "ilab/pressure.hpp"
#include "ilab/spectral.hpp"

namespace ilab {
namespace {

constexpr double kPi = 3.14159265358979323846;

double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

VectorXd theta_alpha(const ClosedCurve& c, Complex center) {
  VectorXd t(c.size());
  for (int j = 0; j < c.size(); ++j) t[j] = (c.z_alpha()[j] / (c.nodes()[j] - center)).imag();
  return t;
}

/// Continuous arg(z - center) - alpha (periodic when center is enclosed).
VectorXd theta_minus_alpha(const ClosedCurve& c, Complex center) {
  const int n = c.size();
  VectorXd out(n);
  double prev = std::arg(c.nodes()[0] - center);
  double acc = prev;
  out[0] = acc;
  for (int j = 1; j < n; ++j) {
    const double a = std::arg(c.nodes()[j] - center);
    double d = a - prev;
    d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
    acc += d;
    prev = a;
    out[j] = acc;
  }
  for (int j = 0; j < n; ++j) out[j] -= c.mesh() * j;
  return out;
}

}  // namespace

TwoPhaseVelocity SheetKinematics::velocity() const {
  return potential_flow(ops, phi_plus, phi_hat, circulation, vortex_center);
}

SheetKinematics sheet_velocity(const SheetState& state) { return sheet_velocity(state, make_operators(state.curve)); }

SheetKinematics sheet_velocity(const SheetState& state, OperatorsPtr ops) {
  const ClosedCurve& c = ops->curve();
  const int n = c.size();
  const double rp = state.rho_plus, rm = state.rho_minus;
  const double gam = state.circulation;

  SheetKinematics k;
  k.ops = ops;
  k.circulation = gam;
  k.vortex_center = state.vortex_center;

  VectorXd g0 = VectorXd::Zero(n);
  if (gam != 0.0) g0 = gam * circulation_flux(c, state.vortex_center);
  VectorXd drive = state.q;
  if (gam != 0.0) drive -= rm * dtn_inverse_side(*ops, g0, Side::exterior);
  k.psi = dtn_bar(*ops, drive, rp, rm);
  k.phi_plus = dtn_inverse_side(*ops, k.psi, Side::interior);
  k.phi_hat = dtn_inverse_side(*ops, -k.psi - g0, Side::exterior);

  const VectorXd& speed = c.speed();
  const VectorXd da = spectral::derivative(k.phi_plus);
  const VectorXd db = spectral::derivative(k.phi_hat);
  const VectorXd th = theta_alpha(c, state.vortex_center);

  k.v_plus.resize(n);
  k.v_minus.resize(n);
  k.gamma.resize(n);
  for (int j = 0; j < n; ++j) {
    const Complex tau = c.tangent()[j], nor = c.normal()[j];
    k.v_plus[j] = k.psi[j] * nor + (da[j] / speed[j]) * tau;
    k.v_minus[j] = k.psi[j] * nor + ((db[j] + gam * th[j] / (2.0 * kPi)) / speed[j]) * tau;
    k.gamma[j] = db[j] - da[j] + gam * th[j] / (2.0 * kPi);
  }
  k.average = 0.5 * (k.v_plus + k.v_minus);

  VectorXd stretch(n);
  for (int j = 0; j < n; ++j) stretch[j] = c.kappa()[j] * k.psi[j] * speed[j];
  k.tangential = -spectral::antiderivative(stretch);
  return k;
}

VectorXcd birkhoff_rott(const CurveOperators& ops, const VectorXd& gamma) {
  const ClosedCurve& c = ops.curve();
  VectorXcd g(c.size());
  for (int j = 0; j < c.size(); ++j) g[j] = gamma[j] / c.z_alpha()[j];
  return (-(ops.cauchy() * g)).conjugate();
}

SheetState state_from_gamma(const ClosedCurve& curve, const VectorXd& gamma, double rho_plus, double rho_minus,
                            Complex vortex_center) {
  SheetState s;
  s.curve = curve;
  s.rho_plus = rho_plus;
  s.rho_minus = rho_minus;
  s.vortex_center = vortex_center;
  s.initial_area = curve.area();
  const int n = curve.size();
  const double gam = gamma.sum() * curve.mesh();
  s.circulation = gam;

  auto ops = make_operators(curve);
  VectorXd jump = spectral::antiderivative(gamma) - (gam / (2.0 * kPi)) * theta_minus_alpha(curve, vortex_center);
  VectorXd g0 = VectorXd::Zero(n);
  if (gam != 0.0) g0 = gam * circulation_flux(curve, vortex_center);
  const MatrixXd sum = ops->dtn(Side::interior) + ops->dtn(Side::exterior);
  const VectorXd rhs = -ops->dtn(Side::exterior) * jump - g0;
  const VectorXd a = solve_mean_zero(curve, sum, rhs);
  const VectorXd b = a + jump;
  s.q = rho_plus * a - rho_minus * b;
  return s;
}

StateRate rhs(const SheetState& state, bool filter) {
  const ClosedCurve& c = state.curve;
  const int n = c.size();
  const SheetKinematics k = sheet_velocity(state);
  const double rp = state.rho_plus, rm = state.rho_minus;
  const double gam = state.circulation;

  StateRate r;
  r.dz.resize(n);
  r.dq.resize(n);
  for (int j = 0; j < n; ++j) {
    const Complex x = k.psi[j] * c.normal()[j] + k.tangential[j] * c.tangent()[j];
    r.dz[j] = x;
    Complex grad_hat = k.v_minus[j];
    if (gam != 0.0) grad_hat -= gam * Complex(0.0, 1.0) / std::conj(c.nodes()[j] - state.vortex_center) / (2.0 * kPi);
    r.dq[j] = rp * (dot(x, k.v_plus[j]) - 0.5 * std::norm(k.v_plus[j])) -
              rm * (dot(x, grad_hat) - 0.5 * std::norm(k.v_minus[j])) - c.kappa()[j];
  }
  r.dq.array() -= r.dq.mean();
  if (filter) {
    r.dz = spectral::filter_two_thirds(r.dz);
    r.dq = spectral::filter_two_thirds(r.dq);
  }
  return r;
}

double max_stable_dt(const SheetState& state, double cfl_safety) {
  const double h = state.curve.length() / state.curve.size();
  return cfl_safety * std::sqrt(state.rho_plus + state.rho_minus) * std::pow(h, 1.5);
}

namespace {

SheetState advance(const SheetState& s, const StateRate& r, double dt) {
  SheetState out = s;
  out.curve = ClosedCurve(s.curve.nodes() + dt * r.dz);
  out.q = s.q + dt * r.dq;
  out.time = s.time + dt;
  return out;
}

}  // namespace

SheetState step(const SheetState& state, double dt, const StepOptions& options) {
  const double limit = max_stable_dt(state, options.cfl_safety);
  if (dt > limit) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds the surface-tension limit " << limit;
    throw CflError(msg.str(), limit);
  }
  const StateRate k1 = rhs(state, options.filter);
  const StateRate k2 = rhs(advance(state, k1, 0.5 * dt), options.filter);
  const StateRate k3 = rhs(advance(state, k2, 0.5 * dt), options.filter);
  const StateRate k4 = rhs(advance(state, k3, dt), options.filter);
  StateRate sum;
  sum.dz = (k1.dz + 2.0 * k2.dz + 2.0 * k3.dz + k4.dz) / 6.0;
  sum.dq = (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq) / 6.0;
  SheetState out = advance(state, sum, dt);
  if (options.check_simple && !out.curve.is_simple()) {
    std::ostringstream msg;
    msg << "interface self-intersects at t = " << out.time;
    throw GeometryError(msg.str());
  }
  return out;
}

SheetState make_state(const ClosedCurve& curve, const VectorXd& q, double rho_plus, double rho_minus,
                      double circulation, Complex vortex_center) {
  SheetState s;
  s.curve = reparametrize_equal_arclength(curve);
  s.q = resample_arclength(curve, q);
  s.circulation = circulation;
  s.vortex_center = vortex_center;
  s.rho_plus = rho_plus;
  s.rho_minus = rho_minus;
  s.initial_area = s.curve.area();
  return s;
}

double state_energy_E0(const SheetState& state) {
  const SheetKinematics k = sheet_velocity(state);
  return energy_E0_boundary(k.velocity(), state.rho_plus, state.rho_minus);
}

EnergyReport state_energy(const SheetState& state, int k_order) {
  const SheetKinematics k = sheet_velocity(state);
  const TwoPhaseVelocity vel = k.velocity();
  EnergyReport r = energy_E(vel, state.rho_plus, state.rho_minus, k_order);
  r.e0 = energy_E0_boundary(vel, state.rho_plus, state.rho_minus);
  r.time = state.time;
  return r;
}

RunResult run(const SheetState& initial, const RunOptions& options, const StateObserver& observer) {
  RunResult result;
  SheetState s = initial;
  EnergyReport first = state_energy(s, options.k_energy);
  result.reports.push_back(first);
  if (observer) observer(s, first);
  const double e_start = first.total();
  const double e0_start = first.e0;

  const int steps = static_cast<int>(std::ceil(options.t_end / options.dt - 1e-9));
  for (int i = 1; i <= steps; ++i) {
    const double dt = std::min(options.dt, options.t_end - s.time);
    if (dt <= 0.0) break;
    s = step(s, dt, options.step);
    const bool last = i == steps;
    if (i % std::max(1, options.report_every) == 0 || last) {
      EnergyReport rep = state_energy(s, options.k_energy);
      result.reports.push_back(rep);
      result.e0_drift = std::max(result.e0_drift, std::abs(rep.e0 - e0_start) / std::abs(e0_start));
      if (observer) observer(s, rep);
      if (options.c_cal >= 0.0 && rep.total() > 2.0 * e_start + options.c_cal) {
        std::ostringstream msg;
        msg << "energy E = " << rep.total() << " exceeded 2 E(0) + C = " << 2.0 * e_start + options.c_cal
            << " at t = " << s.time;
        result.status = RunStatus::energy_exceeded;
        result.diagnostic = msg.str();
        break;
      }
    }
  }
  result.area_drift = std::abs(s.curve.area() - initial.initial_area) / initial.initial_area;
  result.final_state = s;
  return result;
}

double euler_residual(const SheetState& state, double dt, const std::vector<EulerProbe>& probes) {
  StepOptions free;
  free.cfl_safety = std::numeric_limits<double>::infinity();
  free.check_simple = false;
  const SheetState f1 = step(state, dt, free), f2 = step(f1, dt, free);
  const SheetState b1 = step(state, -dt, free), b2 = step(b1, -dt, free);
  const TwoPhaseVelocity v0 = sheet_velocity(state).velocity();
  const TwoPhaseVelocity vf1 = sheet_velocity(f1).velocity(), vf2 = sheet_velocity(f2).velocity();
  const TwoPhaseVelocity vb1 = sheet_velocity(b1).velocity(), vb2 = sheet_velocity(b2).velocity();
  const auto p = pressure_field(v0, state.rho_plus, state.rho_minus);

  double worst = 0.0;
  for (const EulerProbe& probe : probes) {
    const Complex z = probe.point;
    const Side side = probe.side;
    const Complex vt = (-vf2.side(side).value(z) + 8.0 * vf1.side(side).value(z) - 8.0 * vb1.side(side).value(z) +
                        vb2.side(side).value(z)) /
                       (12.0 * dt);
    const Complex v = v0.side(side).value(z);
    const Eigen::Matrix2d jac = v0.side(side).jacobian(z);
    const Complex advect(jac(0, 0) * v.real() + jac(0, 1) * v.imag(), jac(1, 0) * v.real() + jac(1, 1) * v.imag());
    const double rho = side == Side::interior ? state.rho_plus : state.rho_minus;
    worst = std::max(worst, std::abs(rho * (vt + advect) + p->gradient(z, side)));
  }
  return worst;
}

Eigen::Matrix4d mode_jacobian(double radius, double slip, double rho_plus, double rho_minus, int m, int n_nodes,
                              double eps) {
  const double h = 2.0 * kPi / n_nodes;
  VectorXd cs(n_nodes), sn(n_nodes);
  VectorXcd radial(n_nodes);
  for (int j = 0; j < n_nodes; ++j) {
    cs[j] = std::cos(m * h * j);
    sn[j] = std::sin(m * h * j);
    radial[j] = std::polar(1.0, h * j);
  }
  const double gam = 2.0 * kPi * radius * slip;

  auto evaluate = [&](const Eigen::Vector4d& x) {
    VectorXcd z(n_nodes);
    for (int j = 0; j < n_nodes; ++j) z[j] = (radius + x[0] * cs[j] + x[1] * sn[j]) * radial[j];
    SheetState s;
    s.curve = ClosedCurve(z);
    s.q = x[2] * cs + x[3] * sn;
    s.rho_plus = rho_plus;
    s.rho_minus = rho_minus;
    s.circulation = gam;
    s.initial_area = s.curve.area();
    const StateRate r = rhs(s, false);
    VectorXd eta_dot(n_nodes);
    for (int j = 0; j < n_nodes; ++j) eta_dot[j] = dot(r.dz[j], radial[j]);
    Eigen::Vector4d out;
    out[0] = 2.0 * eta_dot.dot(cs) / n_nodes;
    out[1] = 2.0 * eta_dot.dot(sn) / n_nodes;
    out[2] = 2.0 * r.dq.dot(cs) / n_nodes;
    out[3] = 2.0 * r.dq.dot(sn) / n_nodes;
    return out;
  };

  Eigen::Matrix4d jac;
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4d e = Eigen::Vector4d::Zero();
    e[i] = eps;
    jac.col(i) = (evaluate(e) - evaluate(-e)) / (2.0 * eps);
  }
  return jac;
}

}  // namespace ilab
