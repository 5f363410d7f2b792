// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace phspec {

using complex = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Parameter of the operator L = -d/dtheta - eps d/dtheta(sin(theta) d/dtheta).
class ProblemParams {
public:
  static constexpr double resonance_tolerance = 1e-12;
  static constexpr double max_resonant_index = 1e6;

  explicit ProblemParams(double epsilon) : epsilon_(epsilon) {
    if (!(std::abs(epsilon) > 0.0 && std::abs(epsilon) < 2.0)) {
      std::ostringstream msg;
      msg << "epsilon must satisfy 0 < |epsilon| < 2, got " << epsilon;
      throw std::invalid_argument(msg.str());
    }
    const double inv = 1.0 / std::abs(epsilon);
    const double m = std::round(inv);
    if (m >= 1.0 && m <= max_resonant_index && std::abs(std::abs(epsilon) - 1.0 / m) <= resonance_tolerance) {
      resonant_index_ = static_cast<int>(m);
    }
  }

  double epsilon() const noexcept { return epsilon_; }

  /// m such that |eps| = 1/m, when it exists. The two Frobenius indices at a
  /// singular point then differ by an integer.
  std::optional<int> resonant_index() const noexcept { return resonant_index_; }

private:
  double epsilon_;
  std::optional<int> resonant_index_;
};

/// Numerical parameters of the shooting method.
struct ShootingConfig {
  double theta0 = 1e-8;     ///< offset from the singular points 0 and pi
  int series_terms = 100;   ///< Frobenius truncation
  double step = 1e-4;       ///< fixed RK4 step
  /// Distance from pi at which f_+ is read out. Defaults to theta0. Setting it
  /// to `step` stops the integration one RK4 step short of pi.
  std::optional<double> end_offset;
  double divergence_bound = 1e100;

  double readout_offset() const noexcept { return end_offset.value_or(theta0); }

  void validate() const {
    if (!(theta0 > 0.0 && theta0 < 1e-3)) throw std::invalid_argument("theta0 must lie in (0, 1e-3)");
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
    if (series_terms < 10) throw std::invalid_argument("series_terms must be >= 10");
    if (end_offset && !(*end_offset >= theta0 && *end_offset < 0.1)) {
      throw std::invalid_argument("end_offset must lie in [theta0, 0.1)");
    }
    if (!(divergence_bound > 1.0)) throw std::invalid_argument("divergence_bound must exceed 1");
  }
};

/// One point (theta, f, f') of an ODE solution.
struct StateSample {
  double theta = 0.0;
  complex f{1.0, 0.0};
  complex fprime{0.0, 0.0};
};

using Trajectory = std::vector<StateSample>;

enum class Method { shooting, spectral, wkb };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::shooting: return "shooting";
    case Method::spectral: return "spectral";
    case Method::wkb: return "wkb";
  }
  return "unknown";
}

struct EigenvalueRecord {
  complex lambda{0.0, 0.0};
  double residual = 0.0;
  Method method = Method::shooting;
  double epsilon = 0.0;
  int index = 0;
};

}  // namespace phspec
