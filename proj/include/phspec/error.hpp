// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace phspec {

enum class ErrorKind {
  resonant_epsilon,
  singular_point,
  divergence,
  degenerate_profile,
  zero_on_contour,
  budget_exhausted,
  non_convergence,
  numerically_multiple,
  branch_collision,
  lost_bracket,
  quadrature,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::resonant_epsilon: return "resonant epsilon";
    case ErrorKind::singular_point: return "singular point";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::degenerate_profile: return "degenerate profile";
    case ErrorKind::zero_on_contour: return "zero on contour";
    case ErrorKind::budget_exhausted: return "budget exhausted";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::numerically_multiple: return "numerically multiple";
    case ErrorKind::branch_collision: return "branch collision";
    case ErrorKind::lost_bracket: return "lost bracket";
    case ErrorKind::quadrature: return "quadrature";
  }
  return "unknown";
}

/// Numerical failure raised by the solvers. Precondition violations use
/// std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
  NumericalError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Integration blew up; carries the angle where it happened.
class DivergenceError : public NumericalError {
public:
  DivergenceError(double theta, const std::string& what)
      : NumericalError(ErrorKind::divergence, what + " at theta=" + std::to_string(theta)),
        theta_(theta) {}

  double theta() const noexcept { return theta_; }

private:
  double theta_;
};

}  // namespace phspec
