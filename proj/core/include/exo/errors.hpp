#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace exo {

/// Raised when an argument violates a documented precondition (bad index,
/// mismatched dimensions, malformed probability vector).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by exhaustive planners when the policy space is larger than the
/// configured cap.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, double required_cap)
      : std::runtime_error(what), required_cap_(required_cap) {}

  /// Size of the policy space that was refused (may exceed 2^64, hence double).
  double required_cap() const noexcept { return required_cap_; }

 private:
  double required_cap_;
};

/// Raised when an anchor design matrix is rank deficient.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, double lambda_min)
      : std::runtime_error(what), lambda_min_(lambda_min) {}

  double lambda_min() const noexcept { return lambda_min_; }

 private:
  double lambda_min_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::string path)
      : std::runtime_error(what + ": " + path), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace exo
