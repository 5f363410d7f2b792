// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "phspec/error.hpp"
#include "phspec/problem.hpp"

namespace phspec {

/// Regular power series f = 1 + sum_{n>=1} c_n theta^n of the eigenvalue ODE
/// at the singular point theta = 0 (index 0 of the indicial equation).
struct FrobeniusSeries {
  double epsilon = 0.0;
  complex lambda{};
  std::vector<complex> coeffs;  // c_0 .. c_N

  int truncation() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
};

namespace detail {

inline std::vector<double> inverse_factorials(int n_max) {
  std::vector<double> inv(static_cast<std::size_t>(n_max) + 1, 1.0);
  for (int k = 1; k <= n_max; ++k) inv[k] = inv[k - 1] / static_cast<double>(k);
  return inv;
}

}  // namespace detail

/// Coefficients from the recursion
///   c_n = -(lambda c_{n-1} + eps n sum_{m} (-1)^{(n-m)/2} m c_m / (n-m+1)!) / (n (1 + eps n)),
/// with m running over [1, n-2] and n - m even.
///
/// The denominator 1 + eps n vanishes only for eps = -1/n. For eps > 0 the
/// index 0 is the larger root of the indicial equation, so this series needs
/// no logarithmic correction for any eps > 0.
inline FrobeniusSeries frobenius_coefficients(const ProblemParams& params, complex lambda,
                                              int n_terms) {
  if (n_terms < 1) throw std::invalid_argument("frobenius_coefficients: n_terms must be >= 1");
  const double eps = params.epsilon();
  FrobeniusSeries series{eps, lambda, std::vector<complex>(static_cast<std::size_t>(n_terms) + 1)};
  auto& c = series.coeffs;
  c[0] = 1.0;
  const auto inv_fact = detail::inverse_factorials(n_terms + 1);
  for (int n = 1; n <= n_terms; ++n) {
    const double denom = n * (1.0 + eps * n);
    if (std::abs(1.0 + eps * n) < ProblemParams::resonance_tolerance) {
      throw NumericalError(ErrorKind::resonant_epsilon,
                           "1 + eps*n vanishes at n=" + std::to_string(n) +
                               "; the regular series needs a logarithmic term");
    }
    complex sum{0.0, 0.0};
    for (int m = n - 2; m >= 1; m -= 2) {
      const int half = (n - m) / 2;
      const double sign = (half % 2 == 0) ? 1.0 : -1.0;
      sum += sign * m * inv_fact[n - m + 1] * c[m];
    }
    c[n] = -(lambda * c[n - 1] + eps * n * sum) / denom;
  }
  return series;
}

/// Horner evaluation of f and f' at theta.
inline StateSample series_eval(const FrobeniusSeries& series, double theta) {
  const auto& c = series.coeffs;
  complex f{0.0, 0.0};
  complex fp{0.0, 0.0};
  for (std::size_t n = c.size(); n-- > 0;) {
    f = f * theta + c[n];
    if (n >= 1) fp = fp * theta + static_cast<double>(n) * c[n];
  }
  return {theta, f, fp};
}

}  // namespace phspec
