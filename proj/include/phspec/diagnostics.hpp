// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "phspec/eigensolver.hpp"
#include "phspec/error.hpp"
#include "phspec/fourier.hpp"
#include "phspec/ode.hpp"
#include "phspec/parallel.hpp"
#include "phspec/shooting.hpp"

namespace phspec {

/// |<a, b>| / (|a| |b|) in the plain inner product, or in the (1 + n^2)
/// weighted one when `weighted` is set.
inline double angle_cos(const FourierVector& a, const FourierVector& b, bool weighted) {
  if (a.size() != b.size()) throw std::invalid_argument("angle_cos: size mismatch");
  complex inner{0.0, 0.0};
  double na = 0.0, nb = 0.0;
  for (int n = 1; n <= a.size(); ++n) {
    const double w = weighted ? 1.0 + double(n) * n : 1.0;
    inner += w * std::conj(a(n)) * b(n);
    na += w * std::norm(a(n));
    nb += w * std::norm(b(n));
  }
  if (!(na > 0.0) || !(nb > 0.0)) throw std::invalid_argument("angle_cos: zero vector");
  return std::min(1.0, std::abs(inner) / std::sqrt(na * nb));
}

struct AngleEntry {
  int n = 0;  ///< pair (n, n + 1)
  double cos_plain = 0.0;
  double cos_weighted = 0.0;
};

struct AngleReport {
  double epsilon = 0.0;
  int N = 0;
  std::vector<AngleEntry> entries;
};

/// Cosines between consecutive eigenvectors of an ascending eigenpair list.
inline AngleReport angle_report(const TruncatedOperator& op, const std::vector<Eigenpair>& pairs) {
  AngleReport report{op.epsilon, op.N, {}};
  for (std::size_t j = 0; j + 1 < pairs.size(); ++j) {
    report.entries.push_back({static_cast<int>(j + 1), angle_cos(pairs[j].v, pairs[j + 1].v, false),
                              angle_cos(pairs[j].v, pairs[j + 1].v, true)});
  }
  return report;
}

/// ||v|| ||w|| / |w^T v| with w = J0 v, i.e. ||v||^2 / |sum (-1)^n v_n^2|.
inline double condition_number(const FourierVector& v) {
  complex pairing{0.0, 0.0};
  double mass = 0.0;
  for (int n = 1; n <= v.size(); ++n) {
    const complex c = v(n);
    pairing += (n % 2 == 0 ? 1.0 : -1.0) * c * c;
    mass += std::norm(c);
  }
  if (!(mass > 0.0)) throw std::invalid_argument("condition_number: zero vector");
  if (std::abs(pairing) < 1e-14 * mass) {
    throw NumericalError(ErrorKind::numerically_multiple, "left/right pairing vanishes");
  }
  return mass / std::abs(pairing);
}

/// True when a_1 < b_1 < a_2 < b_2 < ... (or the mirror order) holds over the
/// common prefix.
inline bool strictly_alternate(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t m = std::min(a.size(), b.size());
  if (m == 0) return false;
  auto check = [&](const std::vector<double>& lo, const std::vector<double>& hi) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(lo[j] < hi[j])) return false;
      if (j + 1 < m && !(hi[j] < lo[j + 1])) return false;
    }
    return true;
  };
  return check(a, b) || check(b, a);
}

struct InterlaceReport {
  double eps0 = 0.0;
  double eps1 = 0.0;
  std::vector<double> omega0;
  std::vector<double> omega1;
  std::vector<double> residuals0;
  std::vector<double> residuals1;
  bool alternates = false;
  bool identical = false;  ///< eps0 == eps1, alternation is meaningless
  std::vector<std::string> warnings;
};

inline InterlaceReport interlace_check(const ProblemParams& params0, const ProblemParams& params1, int m,
                                       const ShootingConfig& config = {}, const ScanOptions& scan = {}) {
  if (m < 2) throw std::invalid_argument("interlace_check: m must be >= 2");
  InterlaceReport report;
  report.eps0 = params0.epsilon();
  report.eps1 = params1.epsilon();
  if (std::abs(report.eps0 - report.eps1) > 0.1) {
    report.warnings.push_back("|eps0 - eps1| > 0.1: interlacing is only expected for nearby parameters");
  }
  auto fill = [&](const ProblemParams& p, std::vector<double>& omega, std::vector<double>& res) {
    const auto spectrum = first_imaginary_eigenvalues(p, m, config, scan);
    for (int j = 1; j <= m; ++j) {
      omega.push_back(spectrum.records[j].lambda.imag());
      res.push_back(spectrum.records[j].residual);
    }
  };
  fill(params0, report.omega0, report.residuals0);
  if (report.eps0 == report.eps1) {
    report.omega1 = report.omega0;
    report.residuals1 = report.residuals0;
    report.identical = true;
    report.alternates = false;
    return report;
  }
  fill(params1, report.omega1, report.residuals1);
  report.alternates = strictly_alternate(report.omega0, report.omega1);
  return report;
}

/// Uniform rectangle of sample points in the lambda plane, both ends included.
struct SampleGrid {
  double re_min = 0.1;
  double re_max = 20.0;
  double im_min = 0.1;
  double im_max = 20.0;
  double step = 0.5;

  std::vector<complex> points() const {
    if (!(step > 0.0) || re_max < re_min || im_max < im_min) throw std::invalid_argument("SampleGrid: bad bounds");
    std::vector<complex> out;
    const long nx = static_cast<long>(std::floor((re_max - re_min) / step + 1e-9)) + 1;
    const long ny = static_cast<long>(std::floor((im_max - im_min) / step + 1e-9)) + 1;
    for (long j = 0; j < ny; ++j)
      for (long i = 0; i < nx; ++i) out.emplace_back(re_min + i * step, im_min + j * step);
    return out;
  }
};

struct GHatSample {
  complex lambda;
  complex value;
  bool sign_agrees = false;  ///< sign Im G == sign Im lambda
};

struct GHatReport {
  std::vector<GHatSample> samples;
  std::vector<complex> skipped;  ///< |F_eps1| <= 1e-10 or numerical failure
};

inline int sign_of(double x, double zero_band) {
  if (std::abs(x) <= zero_band) return 0;
  return x > 0.0 ? 1 : -1;
}

/// G(lambda) = F_eps0(lambda) / F_eps1(lambda) on the given points.
inline GHatReport g_hat_sample(const ProblemParams& params0, const ProblemParams& params1,
                               const std::vector<complex>& points, const ShootingConfig& config = {}) {
  const BoundaryShooter shooter(config);
  std::vector<GHatSample> raw(points.size());
  std::vector<char> ok(points.size(), 0);
  parallel_for(points.size(), [&](std::size_t i) {
    const complex lambda = points[i];
    try {
      const complex f1 = shooter.f_hat(params1, lambda);
      if (!(std::abs(f1) > 1e-10)) return;
      const complex g = shooter.f_hat(params0, lambda) / f1;
      const int sg = sign_of(g.imag(), 1e-12 * std::max(1.0, std::abs(g)));
      const int sl = sign_of(lambda.imag(), 0.0);
      raw[i] = {lambda, g, sg == sl};
      ok[i] = 1;
    } catch (const NumericalError&) {
    }
  });
  GHatReport report;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (ok[i]) {
      report.samples.push_back(raw[i]);
    } else {
      report.skipped.push_back(points[i]);
    }
  }
  return report;
}

inline GHatReport g_hat_sample(const ProblemParams& params0, const ProblemParams& params1, const SampleGrid& grid,
                               const ShootingConfig& config = {}) {
  return g_hat_sample(params0, params1, grid.points(), config);
}

}  // namespace phspec
