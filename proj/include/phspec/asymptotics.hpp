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

/// Quadrature and refinement settings for the WKB counting function.
struct WkbQuery {
  double half_width = 40.0;  ///< integrate over [-T, T]; sech(40) < 1e-17
  int points = 4096;         ///< Simpson intervals (even)
  bool refine_riccati = false;
  int riccati_iterations = 3;

  void validate() const {
    if (!(1.0 / std::cosh(half_width) < 1e-17)) {
      throw std::invalid_argument("WkbQuery: half_width too small, sech(T) must be < 1e-17");
    }
    if (points < 8 || points % 2 != 0) throw std::invalid_argument("WkbQuery: points must be even and >= 8");
    if (riccati_iterations < 0) throw std::invalid_argument("WkbQuery: negative riccati_iterations");
  }

  double spacing() const noexcept { return 2.0 * half_width / points; }
  double node(int j) const noexcept { return -half_width + j * spacing(); }
};

namespace detail {

inline double simpson_weight(int j, int points) {
  if (j == 0 || j == points) return 1.0 / 3.0;
  return (j % 2 == 1) ? 4.0 / 3.0 : 2.0 / 3.0;
}

template <class F>
auto simpson(double a, double b, int points, F&& f) {
  const double h = (b - a) / points;
  decltype(f(a)) acc{};
  for (int j = 0; j <= points; ++j) acc += simpson_weight(j, points) * f(a + j * h);
  return acc * h;
}

inline void require_positive_epsilon(const ProblemParams& params, const char* who) {
  if (!(params.epsilon() > 0.0)) {
    throw std::invalid_argument(std::string(who) + ": needs epsilon > 0 (spectrum is even in epsilon)");
  }
}

inline double sech(double t) { return 1.0 / std::cosh(t); }

}  // namespace detail

/// Integral of dt / sqrt(cosh t) over the real line. The integrand decays like
/// exp(-|t|/2), so the window is four times the WKB window.
inline double inverse_sqrt_cosh_integral(const WkbQuery& query = {}) {
  query.validate();
  const double T = 4.0 * query.half_width;
  return detail::simpson(-T, T, 4 * query.points, [](double t) { return 1.0 / std::sqrt(std::cosh(t)); });
}

/// Leading coefficient C of omega_n = C n^2 + o(n^2).
inline double asymptotic_constant(const ProblemParams& params, const WkbQuery& query = {}) {
  detail::require_positive_epsilon(params, "asymptotic_constant");
  const double I = inverse_sqrt_cosh_integral(query);
  return 2.0 * params.epsilon() * pi * pi / (I * I);
}

/// G(omega) + n, the WKB counting function with the Riccati corrections set
/// to zero:
///   (1 / 4 pi i eps) * int [sqrt(1 + 4 i eps omega sech t) - sqrt(1 - 4 i eps omega sech t)] dt.
inline double wkb_counting(const ProblemParams& params, double omega, const WkbQuery& query = {}) {
  detail::require_positive_epsilon(params, "wkb_counting");
  query.validate();
  if (omega < 0.0) throw std::invalid_argument("wkb_counting: omega must be >= 0");
  const double eps = params.epsilon();
  const complex a{0.0, 4.0 * eps * omega};
  const complex integral = detail::simpson(-query.half_width, query.half_width, query.points, [&](double t) {
    const double s = detail::sech(t);
    return std::sqrt(1.0 + a * s) - std::sqrt(1.0 - a * s);
  });
  const complex value = integral / complex{0.0, 4.0 * pi * eps};
  if (std::abs(value.imag()) > 1e-9 * std::max(1.0, std::abs(value.real()))) {
    throw NumericalError(ErrorKind::quadrature,
                         "counting function has imaginary part " + std::to_string(value.imag()));
  }
  return value.real();
}

/// Result of the Riccati fixed-point refinement on the t-grid.
struct RiccatiResult {
  std::vector<double> t;
  std::vector<complex> s_plus;
  std::vector<complex> s_minus;
  std::vector<complex> r_plus;   ///< derivative used in the last sweep
  std::vector<complex> r_minus;
  std::vector<double> change;    ///< max |S^(k) - S^(k-1)| per sweep, k >= 1
  std::vector<double> counting;  ///< counting integral after each sweep, starting at R = 0
};

namespace detail {

inline std::vector<complex> central_difference(const std::vector<complex>& y, double h) {
  const std::size_t n = y.size();
  std::vector<complex> d(n);
  for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (y[j + 1] - y[j - 1]) / (2.0 * h);
  d[0] = (y[1] - y[0]) / h;
  d[n - 1] = (y[n - 1] - y[n - 2]) / h;
  return d;
}

}  // namespace detail

/// Fixed-point reading of the chain fraction
///   S_pm = (1 - sqrt(1 -+ 4 eps lambda sech t - 4 eps^2 R_pm)) / (2 eps),  R_pm = S_pm'.
/// Starts from R = 0; each sweep differentiates the previous S by central
/// differences. Convergence is reported, not enforced.
inline RiccatiResult riccati_refine(const ProblemParams& params, complex lambda, const WkbQuery& query = {}) {
  detail::require_positive_epsilon(params, "riccati_refine");
  query.validate();
  const double eps = params.epsilon();
  const int n = query.points + 1;
  const double h = query.spacing();
  RiccatiResult out;
  out.t.resize(n);
  for (int j = 0; j < n; ++j) out.t[j] = query.node(j);
  std::vector<complex> r_plus(n), r_minus(n);
  std::vector<complex> sp(n), sm(n);

  const complex norm = complex{0.0, 4.0 * pi * eps};
  auto sweep = [&]() {
    complex integral{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
      const double s = detail::sech(out.t[j]);
      const complex dp = 1.0 - 4.0 * eps * lambda * s - 4.0 * eps * eps * r_plus[j];
      const complex dm = 1.0 + 4.0 * eps * lambda * s - 4.0 * eps * eps * r_minus[j];
      if (std::abs(dp) <= 1e-6 || std::abs(dm) <= 1e-6) {
        throw NumericalError(ErrorKind::branch_collision,
                             "discriminant vanishes near t=" + std::to_string(out.t[j]));
      }
      const complex qp = std::sqrt(dp);
      const complex qm = std::sqrt(dm);
      sp[j] = (1.0 - qp) / (2.0 * eps);
      sm[j] = (1.0 - qm) / (2.0 * eps);
      integral += detail::simpson_weight(j, query.points) * (qm - qp);
    }
    out.counting.push_back((integral * h / norm).real());
  };

  sweep();
  for (int it = 0; it < query.riccati_iterations; ++it) {
    const auto prev_p = sp;
    const auto prev_m = sm;
    r_plus = detail::central_difference(prev_p, h);
    r_minus = detail::central_difference(prev_m, h);
    sweep();
    double delta = 0.0;
    for (int j = 0; j < n; ++j) {
      delta = std::max({delta, std::abs(sp[j] - prev_p[j]), std::abs(sm[j] - prev_m[j])});
    }
    out.change.push_back(delta);
  }
  out.s_plus = std::move(sp);
  out.s_minus = std::move(sm);
  out.r_plus = std::move(r_plus);
  out.r_minus = std::move(r_minus);
  return out;
}

/// Counting function including `query.riccati_iterations` Riccati sweeps.
inline double refined_counting(const ProblemParams& params, double omega, const WkbQuery& query = {}) {
  return riccati_refine(params, complex{0.0, omega}, query).counting.back();
}

/// Root of counting(omega) = n: doubling bracket from [0, 1], then bisection
/// to 1e-9.
inline double wkb_eigenvalue(const ProblemParams& params, int n, const WkbQuery& query = {}) {
  if (n < 1) throw std::invalid_argument("wkb_eigenvalue: n must be >= 1");
  auto counting = [&](double omega) {
    return query.refine_riccati ? refined_counting(params, omega, query) : wkb_counting(params, omega, query);
  };
  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (counting(hi) - n <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 200) throw NumericalError(ErrorKind::budget_exhausted, "wkb_eigenvalue bracket");
  }
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    if (counting(mid) - n > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace phspec
