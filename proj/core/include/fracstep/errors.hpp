#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracstep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not certify its accuracy target.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

/// Result not representable in double precision.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Invalid problem, operator, solver or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Collocation system is numerically singular.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// The adaptive controller cannot make progress in time.
class LockingError : public Error {
 public:
  using Error::Error;
};

/// Failure of one component of a split or shifted solve.
class SubproblemError : public Error {
 public:
  SubproblemError(std::size_t index, const std::string& what, bool locking = false)
      : Error("subproblem " + std::to_string(index) + ": " + what),
        index_(index),
        locking_(locking) {}

  [[nodiscard]] std::size_t index() const noexcept { return index_; }
  /// True when the component failed with a LockingError.
  [[nodiscard]] bool locking() const noexcept { return locking_; }

 private:
  std::size_t index_;
  bool locking_;
};

}  // namespace fracstep
