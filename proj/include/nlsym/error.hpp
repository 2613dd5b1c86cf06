#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlsym {

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The grid box cannot hold the requested ball or convolution support.
class DomainTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A kernel support is not resolved by the grid (fewer than 2 cells of radius).
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A linear solve broke down or missed its residual target.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-point iteration exhausted its budget.
class ConvergenceFailure : public std::runtime_error {
 public:
  ConvergenceFailure(const std::string& what, double last_residual, std::size_t iterations)
      : std::runtime_error(what), last_residual_(last_residual), iterations_(iterations) {}

  double last_residual() const noexcept { return last_residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  std::size_t iterations_;
};

}  // namespace nlsym
