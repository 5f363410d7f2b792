// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "phspec/error.hpp"
#include "phspec/ode.hpp"
#include "phspec/parallel.hpp"
#include "phspec/problem.hpp"

namespace phspec {

/// Straight segment or circular arc in the lambda-plane, parametrised by s in [0, 1].
struct ContourPiece {
  enum class Kind { segment, arc } kind = Kind::segment;
  complex from{};
  complex to{};
  double radius = 0.0;
  double phi_from = 0.0;
  double phi_to = 0.0;

  complex point(double s) const {
    if (kind == Kind::segment) return from + s * (to - from);
    return std::polar(radius, phi_from + s * (phi_to - phi_from));
  }
};

struct ContourSample {
  double s = 0.0;  ///< global parameter: piece index + local parameter
  complex lambda{};
  complex value{};
};

/// Closed, positively oriented path. The quadrant contour is
///   Lambda1: x + i r, x in [r, R];  Lambda2: arc through R + i r and r + i R;
///   Lambda3: r + i y, y from R down to r.
/// The arc has radius |R + i r| and spans [phi0, pi/2 - phi0], phi0 = atan(r/R),
/// so the three pieces join exactly.
class Contour {
public:
  static Contour quadrant(double r, double R) {
    if (!(r > 0.0 && r < R)) throw std::invalid_argument("Contour::quadrant needs 0 < r < R");
    Contour c;
    c.r_ = r;
    c.R_ = R;
    const double phi0 = std::atan(r / R);
    const double rho = std::hypot(R, r);
    c.pieces_.push_back({ContourPiece::Kind::segment, complex{r, r}, complex{R, r}});
    c.pieces_.push_back({ContourPiece::Kind::arc, {}, {}, rho, phi0, pi / 2 - phi0});
    c.pieces_.push_back({ContourPiece::Kind::segment, complex{r, R}, complex{r, r}});
    return c;
  }

  static Contour square(complex center, double half_width) {
    if (!(half_width > 0.0)) throw std::invalid_argument("Contour::square needs a positive half width");
    Contour c;
    const double h = half_width;
    const complex corners[4] = {center + complex{-h, -h}, center + complex{h, -h}, center + complex{h, h},
                                center + complex{-h, h}};
    for (int k = 0; k < 4; ++k) c.pieces_.push_back({ContourPiece::Kind::segment, corners[k], corners[(k + 1) % 4]});
    return c;
  }

  const std::vector<ContourPiece>& pieces() const noexcept { return pieces_; }
  double r() const noexcept { return r_; }
  double R() const noexcept { return R_; }
  bool degenerate() const noexcept { return R_ > 0.0 && R_ - r_ < 1e-12; }

  complex point(double s) const {
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(s), pieces_.size() - 1);
    return pieces_[k].point(s - static_cast<double>(k));
  }

  double parameter_end() const noexcept { return static_cast<double>(pieces_.size()); }

private:
  Contour() = default;
  std::vector<ContourPiece> pieces_;
  double r_ = 0.0;
  double R_ = 0.0;
};

struct WindingResult {
  int winding = 0;
  double total_argument = 0.0;  ///< accumulated arg change
  double max_increment = 0.0;   ///< largest |delta arg| between neighbours
  std::vector<ContourSample> samples;
};

struct WindingOptions {
  int initial_per_piece = 64;
  double max_increment = pi / 2;
  std::size_t sample_budget = 1000000;
};

/// Argument principle for F(lambda) along `contour`: samples are bisected
/// until consecutive argument increments are below max_increment.
inline WindingResult winding_number(const ProblemParams& params, const Contour& contour,
                                    const ShootingConfig& config = {}, const WindingOptions& options = {}) {
  WindingResult out;
  if (contour.degenerate()) return out;
  const BoundaryShooter shooter(config);
  auto eval = [&](double s) {
    const complex lambda = contour.point(s);
    const complex v = shooter.f_hat(params, lambda);
    if (std::abs(v) < 1e-12) {
      throw NumericalError(ErrorKind::zero_on_contour,
                           "|F| < 1e-12 at lambda=(" + std::to_string(lambda.real()) + ", " +
                               std::to_string(lambda.imag()) + ")");
    }
    return ContourSample{s, lambda, v};
  };

  const std::size_t n0 = contour.pieces().size() * static_cast<std::size_t>(options.initial_per_piece);
  std::vector<ContourSample> samples(n0 + 1);
  parallel_for(n0 + 1, [&](std::size_t i) {
    samples[i] = eval(contour.parameter_end() * static_cast<double>(i) / static_cast<double>(n0));
  });

  auto increment = [](const ContourSample& a, const ContourSample& b) { return std::arg(b.value / a.value); };

  bool refined = true;
  while (refined) {
    refined = false;
    std::vector<double> mids;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
      if (std::abs(increment(samples[i], samples[i + 1])) >= options.max_increment) {
        mids.push_back(0.5 * (samples[i].s + samples[i + 1].s));
      }
    }
    if (mids.empty()) break;
    if (samples.size() + mids.size() > options.sample_budget) {
      throw NumericalError(ErrorKind::budget_exhausted, "winding refinement exceeded the sample budget");
    }
    std::vector<ContourSample> extra(mids.size());
    parallel_for(mids.size(), [&](std::size_t i) { extra[i] = eval(mids[i]); });
    std::vector<ContourSample> merged;
    merged.reserve(samples.size() + extra.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      merged.push_back(samples[i]);
      if (k < extra.size() && i + 1 < samples.size() && extra[k].s > samples[i].s && extra[k].s < samples[i + 1].s) {
        merged.push_back(extra[k++]);
      }
    }
    samples = std::move(merged);
    refined = true;
  }

  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const double d = increment(samples[i], samples[i + 1]);
    out.total_argument += d;
    out.max_increment = std::max(out.max_increment, std::abs(d));
  }
  out.winding = static_cast<int>(std::lround(out.total_argument / (2.0 * pi)));
  out.samples = std::move(samples);
  return out;
}

}  // namespace phspec
