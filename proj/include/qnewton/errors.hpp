#pragma once

#include <stdexcept>
#include <string>

namespace qn {

// Thrown when an iterative kernel fails to meet its numeric guarantee
// (eigensolver non-convergence, backtracking cap, no usable shift, near-zero
// divisor). Carries the residual that tripped the guard when one exists.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

// Thrown by convergence-order estimation when the iterate tail is too short
// or too degenerate to fit a slope.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qn
