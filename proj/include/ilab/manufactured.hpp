#pragma once

// Closed-form velocity fields built from monomials c (z - z0)^p conj(z - z0)^q.
// Used as manufactured inputs for the projection and pressure checks.

#include <random>
#include <vector>

#include "ilab/velocity.hpp"

namespace ilab {

struct Monomial {
  Complex coeff;
  int p, q;
};

class MonomialVelocity final : public SideVelocity {
 public:
  MonomialVelocity(std::vector<Monomial> terms, Complex center = 0.0);
  Complex value(Complex z) const override;
  Eigen::Matrix2d jacobian(Complex z) const override;
  /// Sums of conj(analytic) terms (p == 0) are gradients.
  bool irrotational() const override { return irrotational_; }
  const std::vector<Monomial>& terms() const { return terms_; }

 private:
  std::vector<Monomial> terms_;
  Complex center_;
  bool irrotational_;
};

/// Random interior polynomial field of total degree <= degree.
std::vector<Monomial> random_interior_terms(std::mt19937_64& rng, int degree, double amplitude);
/// Random exterior field decaying like |x|^-2 or faster whose divergence decays like |x|^-4.
std::vector<Monomial> random_exterior_terms(std::mt19937_64& rng, double amplitude);

}  // namespace ilab
