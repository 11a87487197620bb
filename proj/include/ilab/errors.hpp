#pragma once

#include <stdexcept>
#include <string>

namespace ilab {

// Base of every error thrown by the library. The CLI maps ContractError and
// ConfigError to exit code 2 and everything else to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Degenerate or non-simple curve, or a domain the quadrature cannot handle.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a precondition (wrong field parity, non-mean-zero input).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Linear solve failed to converge or stagnated.
class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// A source or integrand could not be represented to tolerance (exterior decay, fit residual).
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Time step above the surface-tension stability limit.
class CflError : public Error {
 public:
  CflError(const std::string& what, double suggested_dt)
      : Error(what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const { return suggested_dt_; }

 private:
  double suggested_dt_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ilab
