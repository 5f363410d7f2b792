// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phspec/error.hpp"
#include "phspec/fourier.hpp"

namespace phspec {

/// LU factorization of a tridiagonal matrix with partial pivoting (one extra
/// superdiagonal of fill-in). T is double or complex.
template <class T>
class TridiagonalLU {
  using Real = decltype(std::abs(T{}));

public:
  TridiagonalLU(const TruncatedOperator& op, T shift) : n_(op.N) {
    std::vector<T> d(n_), u(n_, T{}), l(n_, T{});
    for (int i = 0; i < n_; ++i) d[i] = T(op.diag[i]) - shift;
    for (int i = 0; i + 1 < n_; ++i) {
      u[i] = op.upper_as<Real>(i);
      l[i] = op.lower_as<Real>(i);
    }
    // Row i holds (main_[i], sup1_[i], sup2_[i]) after elimination.
    main_.assign(n_, T{});
    sup1_.assign(n_, T{});
    sup2_.assign(n_, T{});
    mult_.assign(n_, T{});
    swap_.assign(n_, false);
    T a = d[0];
    T b = n_ > 1 ? u[0] : T{};
    T c{};
    for (int i = 0; i < n_; ++i) {
      if (i + 1 < n_) {
        // Candidate rows: (a, b, c) at i and (l[i], d[i+1], u[i+1]) at i+1.
        const T bl = l[i];
        const T bd = d[i + 1];
        const T bu = i + 2 < n_ ? u[i + 1] : T{};
        if (std::abs(bl) > std::abs(a)) {
          swap_[i] = true;
          main_[i] = bl;
          sup1_[i] = bd;
          sup2_[i] = bu;
          const T m = a / bl;
          mult_[i] = m;
          a = b - m * bd;
          b = c - m * bu;
        } else {
          main_[i] = a;
          sup1_[i] = b;
          sup2_[i] = c;
          const T m = a == T{} ? T{} : bl / a;
          mult_[i] = m;
          a = bd - m * b;
          b = bu - m * c;
        }
        c = T{};
      } else {
        main_[i] = a;
        sup1_[i] = T{};
        sup2_[i] = T{};
      }
    }
    Real scale = 1;
    for (const auto& x : main_) scale = std::max(scale, Real(std::abs(x)));
    pivot_floor_ = scale * Real(1e-300);
  }

  /// Solves (A - shift) x = b in place.
  template <class V>
  void solve(std::vector<V>& b) const {
    for (int i = 0; i + 1 < n_; ++i) {
      if (swap_[i]) std::swap(b[i], b[i + 1]);
      b[i + 1] -= mult_[i] * b[i];
    }
    for (int i = n_ - 1; i >= 0; --i) {
      V acc = b[i];
      if (i + 1 < n_) acc -= sup1_[i] * b[i + 1];
      if (i + 2 < n_) acc -= sup2_[i] * b[i + 2];
      T p = main_[i];
      if (std::abs(p) < pivot_floor_) p = T(pivot_floor_);
      b[i] = acc / p;
    }
  }

private:
  int n_;
  std::vector<T> main_, sup1_, sup2_, mult_;
  std::vector<bool> swap_;
  Real pivot_floor_ = 0;
};

struct Eigenpair {
  complex mu;
  FourierVector v;
  double backward_error = 0.0;  ///< ||A v - mu v|| / ||A||_F with ||v|| = 1

  complex lambda() const { return lambda_from_mu(mu); }
  bool on_axis() const { return on_imaginary_axis(mu); }
};

enum class SolverKind { automatic, dense, shift_invert };

struct EigenOptions {
  SolverKind solver = SolverKind::automatic;
  int dense_limit = 256;
  double tolerance = 1e-10;  ///< backward error bound relative to ||A||_F
  int max_iterations = 2000;
  int inverse_steps = 3;
};

namespace detail {

inline void normalize_phase(FourierVector& v) {
  const double nrm = v.norm();
  if (!(nrm > 0.0)) return;
  const double floor = 1e-14 * nrm;
  complex phase{1.0, 0.0};
  for (const auto& c : v.coeffs) {
    if (std::abs(c) > floor) {
      phase = std::conj(c) / std::abs(c);
      break;
    }
  }
  for (auto& c : v.coeffs) c *= phase / nrm;
}

inline double residual_norm(const TruncatedOperator& op, complex mu, const FourierVector& v) {
  const auto av = op.apply(v.coeffs);
  double s = 0.0;
  for (int i = 0; i < op.N; ++i) s += std::norm(av[i] - mu * v.coeffs[i]);
  return std::sqrt(s);
}

using xreal = long double;
using xcomplex = std::complex<xreal>;

/// Newton iteration on det(A - mu) through the ratio form of the three-term
/// recurrence p_n = (d_n - mu) p_{n-1} - u_{n-1} l_{n-1} p_{n-2}. Each step
/// perturbs the matrix entries only componentwise, and extended precision
/// keeps ill-conditioned eigenvalues resolvable.
struct NewtonResult {
  bool converged = false;
  double noise = 0.0;  ///< size of the last accepted correction
};

inline NewtonResult newton_refine(const TruncatedOperator& op, complex& mu_io, int max_steps = 80) {
  xcomplex mu(mu_io.real(), mu_io.imag());
  const xcomplex tiny(1e-300L, 0.0L);
  xreal last = std::numeric_limits<xreal>::infinity();
  NewtonResult result;
  for (int it = 0; it < max_steps; ++it) {
    xcomplex r = xreal(op.diag[0]) - mu;
    xcomplex dr(-1.0L, 0.0L);
    if (r == xcomplex{}) r = tiny;
    xcomplex sum = dr / r;
    for (int i = 1; i < op.N; ++i) {
      const xreal c = -op.upper_as<xreal>(i - 1) * op.lower_as<xreal>(i - 1);
      xcomplex rn = xreal(op.diag[i]) - mu + c / r;
      const xcomplex drn = xreal(-1.0L) - c * dr / (r * r);
      if (rn == xcomplex{}) rn = tiny;
      r = rn;
      dr = drn;
      sum += dr / r;
    }
    if (!std::isfinite(std::abs(sum)) || sum == xcomplex{}) break;
    const xcomplex delta = xreal(1.0L) / sum;
    const xreal size = std::abs(delta);
    const xreal scale = std::max(xreal(1.0L), std::abs(mu));
    // Past the rounding floor the corrections stop shrinking.
    if (it >= 3 && size > 0.5L * last && size <= 1e-5L * scale) {
      result = {true, double(std::max(size, last))};
      break;
    }
    mu -= delta;
    if (size <= 1e-16L * scale) {
      result = {true, double(size)};
      break;
    }
    last = size;
  }
  mu_io = complex(double(mu.real()), double(mu.imag()));
  return result;
}

/// Inverse iteration in extended precision at a fixed shift, nudged off the
/// eigenvalue so the factorization stays regular.
inline FourierVector inverse_iteration(const TruncatedOperator& op, complex mu, int steps) {
  const xreal nudge = std::max(xreal(1.0L), xreal(std::abs(mu))) * 1e-17L;
  TridiagonalLU<xcomplex> lu(op, xcomplex(mu.real(), mu.imag()) + xcomplex(nudge, nudge));
  std::vector<xcomplex> x(op.N, xcomplex(1.0L / std::sqrt(xreal(op.N)), 0.0L));
  for (int s = 0; s < steps; ++s) {
    lu.solve(x);
    xreal nrm = 0.0L;
    for (const auto& c : x) nrm += std::norm(c);
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0L) || !std::isfinite(nrm)) break;
    for (auto& c : x) c /= nrm;
  }
  FourierVector v;
  v.coeffs.reserve(x.size());
  for (const auto& c : x) v.coeffs.emplace_back(double(c.real()), double(c.imag()));
  normalize_phase(v);
  return v;
}

inline void sort_by_modulus(std::vector<complex>& mus) {
  std::sort(mus.begin(), mus.end(), [](complex a, complex b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    return a.imag() < b.imag();
  });
}

/// Newton-refines every estimate in place and re-sorts. Fails when two
/// estimates collapse onto one root.
inline bool refine_all(const TruncatedOperator& op, std::vector<complex>& mus, std::vector<double>* noise = nullptr) {
  std::vector<std::pair<complex, double>> refined;
  for (auto mu : mus) {
    const NewtonResult r = newton_refine(op, mu);
    if (!r.converged) return false;
    refined.emplace_back(mu, r.noise);
  }
  std::sort(refined.begin(), refined.end(), [](const auto& a, const auto& b) {
    const double ma = std::abs(a.first), mb = std::abs(b.first);
    if (ma != mb) return ma < mb;
    return a.first.imag() < b.first.imag();
  });
  for (std::size_t j = 0; j < mus.size(); ++j) mus[j] = refined[j].first;
  if (noise) {
    noise->clear();
    for (const auto& r : refined) noise->push_back(r.second);
  }
  for (std::size_t j = 1; j < mus.size(); ++j) {
    if (std::abs(mus[j] - mus[j - 1]) <= 1e-10 * std::abs(mus[j])) return false;
  }
  return true;
}

inline std::vector<complex> dense_eigenvalues(const TruncatedOperator& op) {
  // A tridiagonal matrix is already upper Hessenberg.
  const Eigen::MatrixXd h = op.dense();
  const Eigen::MatrixXd q = Eigen::MatrixXd::Identity(op.N, op.N);
  Eigen::RealSchur<Eigen::MatrixXd> schur(op.N);
  schur.setMaxIterations(static_cast<Eigen::Index>(40) * op.N);
  schur.computeFromHessenberg(h, q, false);
  if (schur.info() != Eigen::Success) {
    throw NumericalError(ErrorKind::non_convergence, "dense Schur iteration did not converge");
  }
  const Eigen::MatrixXd& t = schur.matrixT();
  std::vector<complex> mus;
  mus.reserve(op.N);
  for (int i = 0; i < op.N;) {
    if (i + 1 < op.N && t(i + 1, i) != 0.0) {
      const double a = t(i, i), b = t(i, i + 1), c = t(i + 1, i), d = t(i + 1, i + 1);
      const double tr = 0.5 * (a + d);
      const complex disc = std::sqrt(complex{0.25 * (a - d) * (a - d) + b * c, 0.0});
      mus.push_back(tr + disc);
      mus.push_back(tr - disc);
      i += 2;
    } else {
      mus.emplace_back(t(i, i), 0.0);
      ++i;
    }
  }
  sort_by_modulus(mus);
  return mus;
}

/// Real block iteration with A^{-1} and Rayleigh-Ritz extraction. Converges
/// to the eigenvalues of smallest modulus; complex pairs are carried by the
/// real subspace.
inline std::vector<complex> subspace_eigenvalues(const TruncatedOperator& op, int k, const EigenOptions& opts) {
  const int p = std::min(op.N, 2 * k + 16);
  TridiagonalLU<double> lu(op, 0.0);
  Eigen::MatrixXd q(op.N, p);
  // Deterministic start: low modes plus a slowly varying fill.
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < op.N; ++i) q(i, j) = (i == j ? 1.0 : 0.0) + 1e-3 * std::cos(0.37 * (i + 1) * (j + 1));
  {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
    q = qr.householderQ() * Eigen::MatrixXd::Identity(op.N, p);
  }
  std::vector<complex> prev;
  std::vector<double> col(op.N);
  for (int it = 0; it < opts.max_iterations; ++it) {
    for (int j = 0; j < p; ++j) {
      for (int i = 0; i < op.N; ++i) col[i] = q(i, j);
      lu.solve(col);
      for (int i = 0; i < op.N; ++i) q(i, j) = col[i];
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(q);
    q = qr.householderQ() * Eigen::MatrixXd::Identity(op.N, p);
    if (it % 5 != 4) continue;
    Eigen::MatrixXd aq(op.N, p);
    for (int j = 0; j < p; ++j) {
      for (int i = 0; i < op.N; ++i) col[i] = q(i, j);
      const auto ac = op.apply(col);
      for (int i = 0; i < op.N; ++i) aq(i, j) = ac[i];
    }
    const Eigen::MatrixXd h = q.transpose() * aq;
    Eigen::EigenSolver<Eigen::MatrixXd> es(h, true);
    if (es.info() != Eigen::Success) continue;
    std::vector<std::pair<complex, Eigen::VectorXcd>> ritz;
    for (int j = 0; j < p; ++j) ritz.emplace_back(es.eigenvalues()(j), es.eigenvectors().col(j));
    std::sort(ritz.begin(), ritz.end(),
              [](const auto& a, const auto& b) { return std::abs(a.first) < std::abs(b.first); });
    std::vector<complex> mus;
    for (int j = 0; j < k; ++j) mus.push_back(ritz[j].first);
    std::vector<double> noise;
    if (!refine_all(op, mus, &noise)) continue;
    bool converged = prev.size() == mus.size();
    for (std::size_t j = 0; converged && j < mus.size(); ++j) {
      const double allowed = std::max(1e-12 * std::abs(mus[j]), 8.0 * noise[j]);
      if (std::abs(mus[j] - prev[j]) > allowed) converged = false;
    }
    if (converged) return mus;
    prev = std::move(mus);
  }
  throw NumericalError(ErrorKind::non_convergence, "shift-invert subspace iteration did not converge");
}

}  // namespace detail

/// All N eigenvalues of A_N, ascending in modulus (dense path only).
inline std::vector<complex> all_eigenvalues(const TruncatedOperator& op) { return detail::dense_eigenvalues(op); }

/// The k eigenpairs of smallest |mu|, with ||v|| = 1 and the first nonzero
/// component positive real.
inline std::vector<Eigenpair> eigendecompose(const TruncatedOperator& op, int k, const EigenOptions& opts = {}) {
  if (k < 1 || k > op.N) throw std::invalid_argument("eigendecompose: need 1 <= k <= N");
  bool dense = opts.solver == SolverKind::dense ||
               (opts.solver == SolverKind::automatic && op.N <= opts.dense_limit);
  if (opts.solver == SolverKind::shift_invert && 2 * k + 16 > op.N) dense = true;
  std::vector<complex> mus;
  if (dense) {
    mus = detail::dense_eigenvalues(op);
    mus.resize(k);
    if (!detail::refine_all(op, mus)) {
      throw NumericalError(ErrorKind::non_convergence, "eigenvalue refinement failed on the dense estimates");
    }
  } else {
    mus = detail::subspace_eigenvalues(op, k, opts);
  }

  const double anorm = op.frobenius_norm();
  std::vector<Eigenpair> out;
  out.reserve(k);
  for (int j = 0; j < k; ++j) {
    FourierVector v = detail::inverse_iteration(op, mus[j], opts.inverse_steps);
    const double err = detail::residual_norm(op, mus[j], v) / anorm;
    if (!(err <= opts.tolerance)) {
      throw NumericalError(ErrorKind::non_convergence,
                           "eigenpair " + std::to_string(j + 1) + " failed the backward error bound");
    }
    out.push_back({mus[j], std::move(v), err});
  }
  return out;
}

}  // namespace phspec
