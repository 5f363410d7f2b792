// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "phspec/error.hpp"
#include "phspec/frobenius.hpp"
#include "phspec/problem.hpp"

namespace phspec {

/// Right-hand side of the first-order system for (f, f'):
///   f'' = -[(1 + eps cos theta) f' + lambda f] / (eps sin theta).
inline std::pair<complex, complex> ode_rhs(const ProblemParams& params, complex lambda,
                                           const StateSample& state) {
  const double s = std::sin(state.theta);
  if (std::abs(s) < 1e-14) {
    throw NumericalError(ErrorKind::singular_point,
                         "sin(theta) vanishes at theta=" + std::to_string(state.theta));
  }
  const double eps = params.epsilon();
  const double c = std::cos(state.theta);
  return {state.fprime, -((1.0 + eps * c) * state.fprime + lambda * state.f) / (eps * s)};
}

namespace detail {

/// Fixed-step node layout on [from, to]: full steps of length h and one
/// shortened final step landing exactly on `to`.
struct StepPlan {
  double from = 0.0;
  double to = 0.0;
  double h = 0.0;          // signed full step
  long full_steps = 0;
  double last = 0.0;       // signed final step, 0 if none

  StepPlan(double from_, double to_, double step) : from(from_), to(to_) {
    const double length = std::abs(to - from);
    const double dir = (to >= from) ? 1.0 : -1.0;
    h = dir * step;
    full_steps = static_cast<long>(std::floor(length / step));
    double rem = length - static_cast<double>(full_steps) * step;
    if (rem <= 1e-9 * step) {
      // Absorb roundoff-sized remainders into a last step that lands on `to`.
      if (full_steps > 0) {
        --full_steps;
        rem += step;
      } else {
        rem = 0.0;
      }
    }
    last = (to - (from + static_cast<double>(full_steps) * h));
    if (rem == 0.0) last = 0.0;
  }

  long total_steps() const noexcept { return full_steps + (last != 0.0 ? 1 : 0); }
  double node(long j) const noexcept { return from + static_cast<double>(j) * h; }
  double length(long j) const noexcept { return j < full_steps ? h : last; }
};

struct Trig {
  double s;
  double c;
};

/// Sines and cosines at the start, midpoint and end of every step.
struct TrigTable {
  std::vector<Trig> start, mid, end;

  explicit TrigTable(const StepPlan& plan) {
    const long n = plan.total_steps();
    start.reserve(n);
    mid.reserve(n);
    end.reserve(n);
    for (long j = 0; j < n; ++j) {
      const double t = plan.node(j);
      const double dt = plan.length(j);
      const double te = (j + 1 == n) ? plan.to : t + dt;
      start.push_back({std::sin(t), std::cos(t)});
      mid.push_back({std::sin(t + 0.5 * dt), std::cos(t + 0.5 * dt)});
      end.push_back({std::sin(te), std::cos(te)});
    }
  }
};

struct Rk4Kernel {
  double eps;
  complex lambda;

  complex accel(const Trig& tr, complex f, complex p) const {
    return -((1.0 + eps * tr.c) * p + lambda * f) / (eps * tr.s);
  }

  void step(double dt, const Trig& a, const Trig& m, const Trig& b, complex& f, complex& p) const {
    const complex k1f = p;
    const complex k1p = accel(a, f, p);
    const complex k2f = p + 0.5 * dt * k1p;
    const complex k2p = accel(m, f + 0.5 * dt * k1f, k2f);
    const complex k3f = p + 0.5 * dt * k2p;
    const complex k3p = accel(m, f + 0.5 * dt * k2f, k3f);
    const complex k4f = p + dt * k3p;
    const complex k4p = accel(b, f + dt * k3f, k4f);
    f += dt / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
    p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
  }
};

inline bool diverged(complex f, complex p, double bound) {
  return !(std::isfinite(f.real()) && std::isfinite(f.imag()) && std::isfinite(p.real()) &&
           std::isfinite(p.imag())) ||
         std::abs(f) > bound;
}

inline void check_half_interval(double a, double b) {
  const bool positive = a > 0.0 && a < pi && b > 0.0 && b < pi;
  const bool negative = a < 0.0 && a > -pi && b < 0.0 && b > -pi;
  if (!positive && !negative) {
    throw std::invalid_argument("integration interval must lie inside (0, pi) or (-pi, 0)");
  }
}

}  // namespace detail

/// Classical fixed-step RK4 from theta_from to theta_to. The final step is
/// shortened so the last sample sits exactly on theta_to. Every
/// `sample_every`-th node is stored (0 keeps only the end points).
inline Trajectory integrate(const ProblemParams& params, complex lambda, double theta_from,
                            double theta_to, const ShootingConfig& config,
                            const StateSample& initial, long sample_every = 0) {
  config.validate();
  detail::check_half_interval(theta_from, theta_to);
  const detail::StepPlan plan(theta_from, theta_to, config.step);
  const detail::Rk4Kernel kernel{params.epsilon(), lambda};
  complex f = initial.f;
  complex p = initial.fprime;
  Trajectory out;
  if (sample_every > 0) out.reserve(static_cast<std::size_t>(plan.total_steps() / sample_every) + 2);
  out.push_back({theta_from, f, p});
  const long n = plan.total_steps();
  for (long j = 0; j < n; ++j) {
    const double t = plan.node(j);
    const double dt = plan.length(j);
    const double te = (j + 1 == n) ? theta_to : t + dt;
    const detail::Trig a{std::sin(t), std::cos(t)};
    const detail::Trig m{std::sin(t + 0.5 * dt), std::cos(t + 0.5 * dt)};
    const detail::Trig b{std::sin(te), std::cos(te)};
    kernel.step(dt, a, m, b, f, p);
    if (detail::diverged(f, p, config.divergence_bound)) throw DivergenceError(te, "RK4 integration");
    if (j + 1 == n || (sample_every > 0 && (j + 1) % sample_every == 0)) out.push_back({te, f, p});
  }
  return out;
}

/// Evaluates f_+(pi - theta0) for many lambda on a fixed grid. Holds the
/// precomputed trigonometric tables, so one instance serves a whole scan.
class BoundaryShooter {
public:
  explicit BoundaryShooter(ShootingConfig config = {})
      : config_((config.validate(), config)),
        plan_(config_.theta0, pi - config_.readout_offset(), config_.step),
        trig_(plan_) {}

  const ShootingConfig& config() const noexcept { return config_; }

  /// Launch state at theta0 from the truncated Frobenius series.
  StateSample launch(const ProblemParams& params, complex lambda) const {
    return series_eval(frobenius_coefficients(params, lambda, config_.series_terms), config_.theta0);
  }

  /// f_+ at pi - readout_offset() for the solution regular at theta = 0 with
  /// f(0) = 1.
  complex boundary_value(const ProblemParams& params, complex lambda) const {
    require_positive(params);
    const StateSample s0 = launch(params, lambda);
    const detail::Rk4Kernel kernel{params.epsilon(), lambda};
    complex f = s0.f;
    complex p = s0.fprime;
    const long n = plan_.total_steps();
    for (long j = 0; j < n; ++j) {
      kernel.step(plan_.length(j), trig_.start[j], trig_.mid[j], trig_.end[j], f, p);
      if (detail::diverged(f, p, config_.divergence_bound)) {
        throw DivergenceError(plan_.node(j) + plan_.length(j), "boundary shooting");
      }
    }
    return f;
  }

  /// F(lambda) = f_+(pi - d) - f_-(pi - d) with d the readout offset; f_- solves the
  /// problem for -lambda. On the imaginary axis (|Re lambda| <= 1e-14) it
  /// reduces to 2i Im f_+(pi - d).
  complex f_hat(const ProblemParams& params, complex lambda) const {
    if (std::abs(lambda.real()) <= 1e-14) {
      return {0.0, 2.0 * boundary_value(params, lambda).imag()};
    }
    return boundary_value(params, lambda) - boundary_value(params, -lambda);
  }

  /// Stored trajectory on [theta0, pi - readout_offset()].
  Trajectory trajectory(const ProblemParams& params, complex lambda, long sample_every) const {
    require_positive(params);
    return integrate(params, lambda, config_.theta0, pi - config_.readout_offset(), config_,
                     launch(params, lambda), sample_every);
  }

private:
  static void require_positive(const ProblemParams& params) {
    if (!(params.epsilon() > 0.0)) {
      throw std::invalid_argument(
          "shooting needs 0 < epsilon < 2 (the spectrum for -epsilon is identical)");
    }
  }

  ShootingConfig config_;
  detail::StepPlan plan_;
  detail::TrigTable trig_;
};

inline complex f_hat(const ProblemParams& params, complex lambda, const ShootingConfig& config = {}) {
  return BoundaryShooter(config).f_hat(params, lambda);
}

}  // namespace phspec
