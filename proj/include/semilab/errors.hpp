#pragma once

#include <stdexcept>
#include <string>

namespace semilab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two values were built over different mode bases, or a mode index is out of range.
class BasisMismatch : public Error {
 public:
  using Error::Error;
};

/// A precondition on a physical parameter or event failed.
class DomainError : public Error {
 public:
  using Error::Error;
};

class ZeroNormError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature did not reach its tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double estimate)
      : Error(what + " (estimated error " + std::to_string(estimate) + ")"), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// Scenario configuration rejected; `field()` names the offending key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace semilab
