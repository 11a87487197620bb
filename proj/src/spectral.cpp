#include "ilab/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

namespace ilab::spectral {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <typename Multiplier>
VectorXcd apply_symbol(const VectorXcd& f, Multiplier symbol) {
  VectorXcd c = forward(f);
  const int n = static_cast<int>(f.size());
  for (int k = 0; k < n; ++k) {
    const int m = wavenumber(k, n);
    c[k] *= (n % 2 == 0 && k == n / 2) ? Complex(0.0) : symbol(m);
  }
  return inverse(c);
}

}  // namespace

VectorXcd forward(const VectorXcd& values) {
  Eigen::FFT<double> fft;
  VectorXcd out(values.size());
  fft.fwd(out, values);
  return out / static_cast<double>(values.size());
}

VectorXcd inverse(const VectorXcd& coeffs) {
  Eigen::FFT<double> fft;
  VectorXcd out(coeffs.size());
  fft.inv(out, coeffs);
  return out * static_cast<double>(coeffs.size());
}

VectorXcd forward(const VectorXd& values) { return forward(VectorXcd(values.cast<Complex>())); }

VectorXcd derivative(const VectorXcd& f, int order) {
  return apply_symbol(f, [order](int m) { return std::pow(Complex(0.0, m), order); });
}

VectorXd derivative(const VectorXd& f, int order) {
  return derivative(VectorXcd(f.cast<Complex>()), order).real();
}

VectorXcd hilbert(const VectorXcd& f) {
  return apply_symbol(f, [](int m) { return Complex(0.0, m > 0 ? -1.0 : (m < 0 ? 1.0 : 0.0)); });
}

VectorXd hilbert(const VectorXd& f) { return hilbert(VectorXcd(f.cast<Complex>())).real(); }

VectorXd antiderivative(const VectorXd& f) {
  return apply_symbol(VectorXcd(f.cast<Complex>()), [](int m) {
           return m == 0 ? Complex(0.0) : 1.0 / Complex(0.0, m);
         })
      .real();
}

VectorXcd resample(const VectorXcd& f, int m) {
  const int n = static_cast<int>(f.size());
  if (m == n) return f;
  const VectorXcd c = forward(f);
  VectorXcd d = VectorXcd::Zero(m);
  const int kmax = (std::min(n, m) - 1) / 2;  // drop any Nyquist mode
  for (int k = -kmax; k <= kmax; ++k) d[(k + m) % m] = c[(k + n) % n];
  return inverse(d);
}

VectorXd resample(const VectorXd& f, int m) { return resample(VectorXcd(f.cast<Complex>()), m).real(); }

Complex evaluate_complex(const VectorXcd& coeffs, double alpha) {
  const int n = static_cast<int>(coeffs.size());
  Complex sum = coeffs[0];
  const int kmax = (n - 1) / 2;
  for (int k = 1; k <= kmax; ++k) {
    sum += coeffs[k] * std::polar(1.0, k * alpha) + coeffs[n - k] * std::polar(1.0, -k * alpha);
  }
  if (n % 2 == 0) sum += coeffs[n / 2] * std::cos(n / 2 * alpha);
  return sum;
}

double evaluate(const VectorXcd& coeffs, double alpha) { return evaluate_complex(coeffs, alpha).real(); }

VectorXcd filter_two_thirds(const VectorXcd& f) {
  const int n = static_cast<int>(f.size());
  return apply_symbol(f, [n](int m) { return 3 * std::abs(m) > n ? Complex(0.0) : Complex(1.0); });
}

VectorXd filter_two_thirds(const VectorXd& f) {
  return filter_two_thirds(VectorXcd(f.cast<Complex>())).real();
}

double tail_energy_fraction(const VectorXcd& f) {
  const VectorXcd c = forward(f);
  const int n = static_cast<int>(f.size());
  const int kmax = n / 2;
  double total = 0.0, tail = 0.0;
  for (int k = 0; k < n; ++k) {
    const int m = std::abs(wavenumber(k, n));
    const double e = std::norm(c[k]);
    total += e;
    if (3 * m > 2 * kmax) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

MatrixXd derivative_matrix(int n) {
  MatrixXd d(n, n);
  const double h = 2.0 * kPi / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        d(i, j) = 0.0;
        continue;
      }
      const double x = (i - j) * h / 2.0;
      const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = n % 2 == 0 ? 0.5 * sign / std::tan(x) : 0.5 * sign / std::sin(x);
    }
  }
  return d;
}

MatrixXd hilbert_matrix(int n) {
  MatrixXd hm(n, n);
  for (int j = 0; j < n; ++j) hm.col(j) = hilbert(VectorXd(VectorXd::Unit(n, j)));
  return hm;
}

}  // namespace ilab::spectral
