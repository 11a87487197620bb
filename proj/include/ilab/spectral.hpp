#pragma once

// Fourier collocation on the equispaced periodic grid alpha_j = 2*pi*j/n.
// Nyquist modes are dropped by every differential operator so that the
// differentiation matrix is exactly antisymmetric.

#include <Eigen/Dense>
#include <complex>

namespace ilab::spectral {

using Complex = std::complex<double>;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Signed wavenumber of FFT slot k on an n-point grid.
inline int wavenumber(int k, int n) { return k <= n / 2 ? k : k - n; }

VectorXcd forward(const VectorXcd& values);  // c_k = (1/n) sum_j f_j e^{-i k alpha_j}
VectorXcd inverse(const VectorXcd& coeffs);
VectorXcd forward(const VectorXd& values);

VectorXd derivative(const VectorXd& f, int order = 1);
VectorXcd derivative(const VectorXcd& f, int order = 1);

/// Periodic Hilbert transform, symbol -i sgn(k).
VectorXd hilbert(const VectorXd& f);
VectorXcd hilbert(const VectorXcd& f);

/// Mean-zero antiderivative of the mean-zero part of f.
VectorXd antiderivative(const VectorXd& f);

/// Trigonometric interpolant resampled on m equispaced points.
VectorXd resample(const VectorXd& f, int m);
VectorXcd resample(const VectorXcd& f, int m);

/// Trigonometric interpolant evaluated at arbitrary alpha.
double evaluate(const VectorXcd& coeffs, double alpha);
Complex evaluate_complex(const VectorXcd& coeffs, double alpha);

/// Sharp 2/3-rule filter: zeroes |k| > n/3.
VectorXd filter_two_thirds(const VectorXd& f);
VectorXcd filter_two_thirds(const VectorXcd& f);

/// Fraction of spectral energy held by the top third of the resolved modes.
double tail_energy_fraction(const VectorXcd& f);

MatrixXd derivative_matrix(int n);
MatrixXd hilbert_matrix(int n);

}  // namespace ilab::spectral
