#include "ilab/quadrature.hpp"

#include <cmath>

#include "ilab/errors.hpp"

namespace ilab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

VectorXd VolumeGrid::sample(const std::function<double(Complex)>& f) const {
  VectorXd out(points.size());
  for (Eigen::Index i = 0; i < points.size(); ++i) out[i] = f(points[i]);
  return out;
}

void gauss_legendre_unit(int n, VectorXd& nodes, VectorXd& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = 0.5 * (1.0 - x);
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);  // 2/((1-x^2)p'^2) scaled by 1/2
  }
}

VolumeGrid build_volume_grid(const ClosedCurve& curve, Side side, int n_radial) {
  const int n = curve.size();
  VolumeGrid grid;
  grid.side = side;
  grid.center = curve.centroid();
  grid.n_radial = n_radial;
  grid.n_angular = n;
  VectorXd cross(n);
  for (int j = 0; j < n; ++j) {
    cross[j] = std::imag(std::conj(curve.nodes()[j] - grid.center) * curve.z_alpha()[j]);
    if (cross[j] <= 1e-12 * std::norm(curve.nodes()[j] - grid.center)) {
      throw GeometryError("curve is not star-shaped about its centroid");
    }
  }
  VectorXd wr;
  gauss_legendre_unit(n_radial, grid.radial, wr);
  grid.points.resize(n_radial * n);
  grid.weights.resize(n_radial * n);
  const double h = curve.mesh();
  for (int i = 0; i < n_radial; ++i) {
    const double t = grid.radial[i];
    for (int j = 0; j < n; ++j) {
      const Complex offset = curve.nodes()[j] - grid.center;
      const int idx = i * n + j;
      if (side == Side::interior) {
        grid.points[idx] = grid.center + t * offset;
        grid.weights[idx] = wr[i] * t * cross[j] * h;
      } else {
        grid.points[idx] = grid.center + offset / t;
        grid.weights[idx] = wr[i] * cross[j] * h / (t * t * t);
      }
    }
  }
  // smallest r (interior center) or smallest s (exterior far field)
  int far = 0;
  for (int i = 1; i < n_radial; ++i) {
    if (grid.radial[i] < grid.radial[far]) far = i;
  }
  grid.far_ring = far;
  return grid;
}

}  // namespace ilab
