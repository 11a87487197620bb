#include "ilab/manufactured.hpp"

#include <algorithm>
#include <cmath>

namespace ilab {

namespace {
constexpr Complex kI(0.0, 1.0);

Complex power(Complex z, int k) { return k == 0 ? Complex(1.0) : std::pow(z, k); }
}  // namespace

MonomialVelocity::MonomialVelocity(std::vector<Monomial> terms, Complex center)
    : terms_(std::move(terms)), center_(center) {
  irrotational_ = std::all_of(terms_.begin(), terms_.end(), [](const Monomial& m) { return m.p == 0; });
}

Complex MonomialVelocity::value(Complex z) const {
  const Complex d = z - center_, db = std::conj(d);
  Complex v = 0.0;
  for (const auto& t : terms_) v += t.coeff * power(d, t.p) * power(db, t.q);
  return v;
}

Eigen::Matrix2d MonomialVelocity::jacobian(Complex z) const {
  const Complex d = z - center_, db = std::conj(d);
  Complex vx = 0.0, vy = 0.0;
  for (const auto& t : terms_) {
    const Complex dz = t.p == 0 ? Complex(0.0) : static_cast<double>(t.p) * power(d, t.p - 1) * power(db, t.q);
    const Complex dzb = t.q == 0 ? Complex(0.0) : static_cast<double>(t.q) * power(d, t.p) * power(db, t.q - 1);
    vx += t.coeff * (dz + dzb);
    vy += t.coeff * kI * (dz - dzb);
  }
  Eigen::Matrix2d j;
  j << vx.real(), vy.real(), vx.imag(), vy.imag();
  return j;
}

std::vector<Monomial> random_interior_terms(std::mt19937_64& rng, int degree, double amplitude) {
  std::normal_distribution<double> g(0.0, amplitude);
  std::vector<Monomial> terms;
  for (int p = 0; p <= degree; ++p)
    for (int q = 0; p + q <= degree; ++q) {
      const double damp = 1.0 / (1.0 + p + q);
      terms.push_back({Complex(g(rng), g(rng)) * damp, p, q});
    }
  return terms;
}

std::vector<Monomial> random_exterior_terms(std::mt19937_64& rng, double amplitude) {
  std::normal_distribution<double> g(0.0, amplitude);
  std::vector<Monomial> terms;
  // conj-analytic multipoles (gradients), then rotational terms with fast-decaying divergence
  for (int k = 2; k <= 4; ++k) terms.push_back({Complex(g(rng), g(rng)), 0, -k});
  terms.push_back({Complex(g(rng), g(rng)), -1, -2});
  terms.push_back({Complex(g(rng), g(rng)), -2, -2});
  terms.push_back({Complex(g(rng), g(rng)), -1, -3});
  return terms;
}

}  // namespace ilab
