#pragma once

#include <stdexcept>
#include <string>

namespace expfun {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Stable machine-readable tag, used by the CLI error JSON.
  virtual const char* kind() const noexcept { return "error"; }
};

// Argument outside the region where a formula is defined.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

class RangeError : public DomainError {
 public:
  using DomainError::DomainError;
  const char* kind() const noexcept override { return "range"; }
};

class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
  const char* kind() const noexcept override { return "pole"; }
};

class GridError : public DomainError {
 public:
  using DomainError::DomainError;
  const char* kind() const noexcept override { return "grid"; }
};

class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
  const char* kind() const noexcept override { return "singularity"; }
};

// An iterative procedure did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "convergence"; }
};

class QuadratureError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
  const char* kind() const noexcept override { return "quadrature"; }
};

class RootError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
  const char* kind() const noexcept override { return "root"; }
};

/// A series coefficient whose modulus does not fit in a double. The value is
/// kept in log form so callers can still use it.
class OverflowGuard : public Error {
 public:
  OverflowGuard(double log_modulus, double argument)
      : Error("series term log-modulus " + std::to_string(log_modulus) +
              " exceeds the overflow cap"),
        log_modulus_(log_modulus),
        argument_(argument) {}
  const char* kind() const noexcept override { return "overflow"; }
  double log_modulus() const noexcept { return log_modulus_; }
  double argument() const noexcept { return argument_; }

 private:
  double log_modulus_;
  double argument_;
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io"; }
};

}  // namespace expfun
