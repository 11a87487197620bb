#pragma once

// Volume quadrature on either side of a star-shaped closed curve.
//
// Interior: x = c + r (z(alpha) - c), r in (0, 1), Gauss-Legendre in r and the
// trapezoidal rule in alpha. Exterior: x = c + (z(alpha) - c) / s, s in (0, 1),
// which maps the unbounded region onto a finite box; integrands decaying like
// |x|^-3 or faster stay bounded in s.

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "ilab/curve.hpp"

namespace ilab {

enum class Side { interior, exterior };

inline const char* to_string(Side side) { return side == Side::interior ? "interior" : "exterior"; }

struct VolumeGrid {
  Side side = Side::interior;
  Complex center;
  int n_radial = 0;
  int n_angular = 0;
  VectorXcd points;   // index = radial * n_angular + angular
  VectorXd weights;
  VectorXd radial;    // r (interior) or s (exterior) Gauss nodes
  /// Index range of the ring farthest from the curve (the center ring for the
  /// interior, the far-field ring for the exterior).
  int far_ring = 0;

  double integrate(const VectorXd& samples) const { return weights.dot(samples); }
  VectorXd sample(const std::function<double(Complex)>& f) const;
};

/// Gauss-Legendre nodes and weights on (0, 1).
void gauss_legendre_unit(int n, VectorXd& nodes, VectorXd& weights);

/// Throws GeometryError when the curve is not star-shaped about its centroid.
VolumeGrid build_volume_grid(const ClosedCurve& curve, Side side, int n_radial = 48);

}  // namespace ilab
