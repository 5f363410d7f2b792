// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "phspec/asymptotics.hpp"
#include "phspec/error.hpp"
#include "phspec/ode.hpp"
#include "phspec/parallel.hpp"
#include "phspec/problem.hpp"

namespace phspec {

/// Bracketing grid for roots of g(omega) = Im f_+(pi - d; i omega).
struct ScanOptions {
  double step = 0.05;         ///< grid spacing below dense_until
  double dense_until = 15.0;  ///< beyond this the spacing follows the n^2 law
  double tolerance = 1e-9;    ///< bisection stops when the bracket is shorter
  double omega_cap = 1e5;     ///< hard limit for count-driven scans
};

struct ScanFailure {
  double omega_lo = 0.0;
  double omega_hi = 0.0;
  std::string what;
};

struct ImaginarySpectrum {
  std::vector<EigenvalueRecord> records;  ///< lambda = 0 first, then i omega_n ascending
  std::vector<ScanFailure> failures;
};

/// R = |(f, L f) / (f, f) - lambda| from a profile sampled on (0, theta_max].
/// The full-period integrals use f(-theta) = conj f(theta): the eps sin|f'|^2
/// term cancels and (f, L f) = -2i Im int_0^pi conj(f) f'.
inline double residual(const ProblemParams& params, const EigenvalueRecord& record, const Trajectory& profile,
                       double theta_max = pi) {
  (void)params;
  complex cross{0.0, 0.0};
  double mass = 0.0;
  const StateSample* prev = nullptr;
  for (const auto& s : profile) {
    if (s.theta <= 0.0) continue;
    if (s.theta > theta_max) break;
    if (prev) {
      const double dt = s.theta - prev->theta;
      cross += 0.5 * dt * (std::conj(prev->f) * prev->fprime + std::conj(s.f) * s.fprime);
      mass += 0.5 * dt * (std::norm(prev->f) + std::norm(s.f));
    }
    prev = &s;
  }
  if (mass < 1e-30) throw NumericalError(ErrorKind::degenerate_profile, "(f, f) vanishes");
  const complex quotient{0.0, -cross.imag() / mass};
  return std::abs(quotient - record.lambda);
}

/// eps (f', sin f') / (f, f) over a profile covering both half-periods. For an
/// eigenfunction this equals Re lambda.
inline double real_part_identity(const ProblemParams& params, const Trajectory& profile) {
  double num = 0.0;
  double mass = 0.0;
  for (std::size_t j = 1; j < profile.size(); ++j) {
    const auto& a = profile[j - 1];
    const auto& b = profile[j];
    const double dt = b.theta - a.theta;
    num += 0.5 * dt * (std::sin(a.theta) * std::norm(a.fprime) + std::sin(b.theta) * std::norm(b.fprime));
    mass += 0.5 * dt * (std::norm(a.f) + std::norm(b.f));
  }
  if (mass < 1e-30) throw NumericalError(ErrorKind::degenerate_profile, "(f, f) vanishes");
  return params.epsilon() * num / mass;
}

/// Eigenfunction for lambda = i omega on [-pi + d, pi - d]: integrated on the
/// positive half and mirrored by f(-theta) = conj f(theta). f(0) = 1 through
/// the series. About `grid_size` samples per half.
inline Trajectory eigenfunction_profile(const ProblemParams& params, double omega, long grid_size,
                                        const ShootingConfig& config = {}) {
  if (grid_size < 2) throw std::invalid_argument("eigenfunction_profile: grid_size must be >= 2");
  const BoundaryShooter shooter(config);
  const double span = pi - config.readout_offset() - config.theta0;
  const long steps = static_cast<long>(std::ceil(span / config.step));
  const long stride = std::max<long>(1, steps / grid_size);
  const Trajectory half = shooter.trajectory(params, complex{0.0, omega}, stride);
  Trajectory full;
  full.reserve(2 * half.size());
  for (auto it = half.rbegin(); it != half.rend(); ++it) {
    full.push_back({-it->theta, std::conj(it->f), -std::conj(it->fprime)});
  }
  full.insert(full.end(), half.begin(), half.end());
  return full;
}

/// Number of sign changes in `values`, ignoring entries with |v| <= deadband.
inline int count_sign_changes(const std::vector<double>& values, double deadband = 1e-10) {
  int changes = 0;
  int last = 0;
  for (double v : values) {
    if (std::abs(v) <= deadband) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

namespace detail {

/// Walks the positive imaginary axis, brackets sign changes of
/// g(omega) = Im f_+ and bisects each bracket.
class AxisScanner {
public:
  AxisScanner(const ProblemParams& params, const ShootingConfig& config, const ScanOptions& scan)
      : params_(params), config_(config), shooter_(config), scan_(scan), c_(asymptotic_constant(params)) {
    if (!(scan.step > 0.0) || !(scan.tolerance > 0.0)) throw std::invalid_argument("ScanOptions: bad step");
  }

  double g(double omega) const { return shooter_.boundary_value(params_, complex{0.0, omega}).imag(); }

  double step_at(double omega) const {
    if (omega < scan_.dense_until) return scan_.step;
    const double n = std::sqrt(omega / c_);
    return std::max(scan_.step, c_ * (2.0 * n + 1.0) / 20.0);
  }

  /// Scans (0, omega_max] or until `count` roots are found (count < 0: no limit).
  ImaginarySpectrum run(double omega_max, int count) const {
    ImaginarySpectrum out;
    out.records.push_back({complex{0.0, 0.0}, 0.0, Method::shooting, params_.epsilon(), 0});
    constexpr std::size_t block = 32;
    double w_prev = scan_.step;
    double g_prev = safe_g(w_prev);
    std::vector<double> ws(block), gs(block);
    while (w_prev < omega_max && (count < 0 || static_cast<int>(out.records.size()) - 1 < count)) {
      double w = w_prev;
      for (std::size_t i = 0; i < block; ++i) {
        w += step_at(w);
        ws[i] = std::min(w, omega_max);
      }
      parallel_for(block, [&](std::size_t i) { gs[i] = safe_g(ws[i]); });
      for (std::size_t i = 0; i < block; ++i) {
        if (count >= 0 && static_cast<int>(out.records.size()) - 1 >= count) break;
        if (ws[i] <= w_prev) continue;
        if (std::isfinite(g_prev) && std::isfinite(gs[i]) && ((g_prev > 0.0) != (gs[i] > 0.0)) &&
            g_prev != 0.0) {
          bisect(w_prev, g_prev, ws[i], out);
        } else if (!std::isfinite(gs[i])) {
          out.failures.push_back({w_prev, ws[i], "g(omega) not finite"});
        }
        w_prev = ws[i];
        g_prev = gs[i];
      }
    }
    return out;
  }

  const BoundaryShooter& shooter() const noexcept { return shooter_; }

private:
  double safe_g(double omega) const {
    try {
      return g(omega);
    } catch (const NumericalError&) {
      return std::nan("");
    }
  }

  void bisect(double a, double ga, double b, ImaginarySpectrum& out) const {
    const double lo0 = a;
    const double hi0 = b;
    while (b - a > scan_.tolerance) {
      const double m = 0.5 * (a + b);
      const double gm = safe_g(m);
      if (!std::isfinite(gm)) {
        out.failures.push_back({lo0, hi0, "bracket lost: g(omega) not finite at " + std::to_string(m)});
        return;
      }
      if (gm == 0.0) {
        a = b = m;
        break;
      }
      if ((gm > 0.0) == (ga > 0.0)) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
    const double omega = 0.5 * (a + b);
    EigenvalueRecord rec{complex{0.0, omega}, 0.0, Method::shooting, params_.epsilon(),
                         static_cast<int>(out.records.size())};
    try {
      // The sub-step tail next to pi is under-resolved by the fixed step.
      const double theta_max = pi - std::max(config_.step, config_.readout_offset()) * (1.0 - 1e-9);
      rec.residual = residual(params_, rec, shooter_.trajectory(params_, rec.lambda, 1), theta_max);
    } catch (const NumericalError& e) {
      out.failures.push_back({lo0, hi0, std::string("residual: ") + e.what()});
      rec.residual = std::nan("");
    }
    out.records.push_back(rec);
  }

  ProblemParams params_;
  ShootingConfig config_;
  BoundaryShooter shooter_;
  ScanOptions scan_;
  double c_;
};

}  // namespace detail

/// Purely imaginary eigenvalues i omega with 0 < omega <= omega_max, located
/// as sign changes of Im f_+(pi - d; i omega) and bisected. Starts with the
/// exact lambda = 0 record.
inline ImaginarySpectrum imaginary_spectrum(const ProblemParams& params, double omega_max,
                                            const ShootingConfig& config = {}, const ScanOptions& scan = {}) {
  if (!(omega_max > 0.0)) throw std::invalid_argument("imaginary_spectrum: omega_max must be positive");
  return detail::AxisScanner(params, config, scan).run(omega_max, -1);
}

/// The first `count` nonzero imaginary eigenvalues (plus the zero record).
inline ImaginarySpectrum first_imaginary_eigenvalues(const ProblemParams& params, int count,
                                                     const ShootingConfig& config = {},
                                                     const ScanOptions& scan = {}) {
  if (count < 1) throw std::invalid_argument("first_imaginary_eigenvalues: count must be >= 1");
  auto out = detail::AxisScanner(params, config, scan).run(scan.omega_cap, count);
  if (static_cast<int>(out.records.size()) - 1 < count) {
    throw NumericalError(ErrorKind::budget_exhausted,
                         "found only " + std::to_string(out.records.size() - 1) + " eigenvalues below omega_cap");
  }
  return out;
}

}  // namespace phspec
