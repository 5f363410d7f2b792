// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "phspec/problem.hpp"

namespace phspec {

/// Coefficients v_1..v_N of the positive-index block (stored 0-based).
struct FourierVector {
  std::vector<complex> coeffs;

  int size() const noexcept { return static_cast<int>(coeffs.size()); }
  /// v_n for n in [1, N].
  complex operator()(int n) const { return coeffs[static_cast<std::size_t>(n - 1)]; }

  double norm() const {
    double s = 0.0;
    for (const auto& c : coeffs) s += std::norm(c);
    return std::sqrt(s);
  }

  /// sqrt(sum (1 + n^2) |v_n|^2), the discrete H^1 norm.
  double weighted_norm() const {
    double s = 0.0;
    for (int n = 1; n <= size(); ++n) s += (1.0 + double(n) * n) * std::norm((*this)(n));
    return std::sqrt(s);
  }
};

/// Finite section A_N of the tridiagonal matrix
///   A_{n,n} = n,  A_{n,n+1} = eps n (n+1) / 2,  A_{n,n-1} = -eps n (n-1) / 2,
/// so A = D - iS with D = diag(1..N) and S = i (A - D) Hermitian.
struct TruncatedOperator {
  double epsilon = 0.0;
  int N = 0;
  std::vector<double> diag;   // d_n, n = 1..N
  std::vector<double> upper;  // u_n = A_{n,n+1}, n = 1..N-1
  std::vector<double> lower;  // l_n = A_{n+1,n}, n = 1..N-1

  /// Band entries recomputed in the arithmetic of R, so extended-precision
  /// consumers do not inherit the rounding of the stored doubles. Row i is
  /// 0-based (n = i + 1).
  template <class R>
  R upper_as(int i) const {
    const R n = R(i + 1);
    return R(epsilon) * n * (n + 1) / 2;
  }
  template <class R>
  R lower_as(int i) const {
    const R n = R(i + 1);
    return -R(epsilon) * (n + 1) * n / 2;
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < N; ++i) m(i, i) = diag[i];
    for (int i = 0; i + 1 < N; ++i) {
      m(i, i + 1) = upper[i];
      m(i + 1, i) = lower[i];
    }
    return m;
  }

  template <class T>
  std::vector<T> apply(const std::vector<T>& v) const {
    std::vector<T> out(v.size());
    for (int i = 0; i < N; ++i) {
      T acc = diag[i] * v[i];
      if (i + 1 < N) acc += upper[i] * v[i + 1];
      if (i > 0) acc += lower[i - 1] * v[i - 1];
      out[i] = acc;
    }
    return out;
  }

  template <class T>
  std::vector<T> apply_transpose(const std::vector<T>& v) const {
    std::vector<T> out(v.size());
    for (int i = 0; i < N; ++i) {
      T acc = diag[i] * v[i];
      if (i + 1 < N) acc += lower[i] * v[i + 1];
      if (i > 0) acc += upper[i - 1] * v[i - 1];
      out[i] = acc;
    }
    return out;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double d : diag) s += d * d;
    for (double u : upper) s += u * u;
    for (double l : lower) s += l * l;
    return std::sqrt(s);
  }
};

inline TruncatedOperator build_A(const ProblemParams& params, int N) {
  if (N < 2) throw std::invalid_argument("build_A: N must be >= 2");
  TruncatedOperator op;
  op.epsilon = params.epsilon();
  op.N = N;
  op.diag.resize(N);
  op.upper.resize(N - 1);
  op.lower.resize(N - 1);
  const double eps = params.epsilon();
  for (int n = 1; n <= N; ++n) op.diag[n - 1] = n;
  for (int n = 1; n < N; ++n) {
    op.upper[n - 1] = eps * n * (n + 1) / 2.0;
    op.lower[n - 1] = -eps * (n + 1) * n / 2.0;  // row n+1
  }
  return op;
}

/// Overload for the eps = 0 reference operator diag(1..N), which has no
/// admissible ProblemParams.
inline TruncatedOperator build_A(double epsilon, int N) {
  if (epsilon == 0.0) {
    if (N < 2) throw std::invalid_argument("build_A: N must be >= 2");
    TruncatedOperator op;
    op.N = N;
    op.diag.resize(N);
    for (int n = 1; n <= N; ++n) op.diag[n - 1] = n;
    op.upper.assign(N - 1, 0.0);
    op.lower.assign(N - 1, 0.0);
    return op;
  }
  return build_A(ProblemParams(epsilon), N);
}

/// A f_+ = -i lambda f_+, hence lambda = i mu.
inline complex lambda_from_mu(complex mu) { return complex{0.0, 1.0} * mu; }

/// True when lambda = i mu lies on the imaginary axis: |Im mu| <= 1e-8 |mu|.
inline bool on_imaginary_axis(complex mu) { return std::abs(mu.imag()) <= 1e-8 * std::abs(mu); }

struct DiscreteForms {
  double im_lambda = 0.0;  ///< (v, D v) / (v, v)
  double re_lambda = 0.0;  ///< (v, S v) / (v, v)
};

inline DiscreteForms discrete_forms(const TruncatedOperator& op, const FourierVector& v) {
  if (v.size() != op.N) throw std::invalid_argument("discrete_forms: size mismatch");
  double mass = 0.0;
  double d_form = 0.0;
  complex k_form{0.0, 0.0};  // v^H K v with K = A - D real antisymmetric
  for (int i = 0; i < op.N; ++i) {
    const complex vi = v.coeffs[i];
    mass += std::norm(vi);
    d_form += op.diag[i] * std::norm(vi);
    complex kv{0.0, 0.0};
    if (i + 1 < op.N) kv += op.upper[i] * v.coeffs[i + 1];
    if (i > 0) kv += op.lower[i - 1] * v.coeffs[i - 1];
    k_form += std::conj(vi) * kv;
  }
  if (!(mass > 0.0)) throw std::invalid_argument("discrete_forms: zero vector");
  // (v, S v) = i v^H K v, real because v^H K v is imaginary.
  const complex s_form = complex{0.0, 1.0} * k_form;
  return {d_form / mass, s_form.real() / mass};
}

/// w_n = (-1)^n v_n. Since J0 A J0 = A^T, A v = mu v implies A^T w = mu w.
inline FourierVector adjoint_vector(const FourierVector& v) {
  FourierVector w = v;
  for (int n = 1; n <= w.size(); n += 2) w.coeffs[n - 1] = -w.coeffs[n - 1];
  return w;
}

/// Fourier coefficients of the operator's eigenfunction under
/// f = sum f_n exp(-i n theta). The literal matrix carries the eps/2 term
/// with the opposite sign of that convention; A(-eps) = J0 A(eps) J0 maps one
/// onto the other, so the coefficients are J0 v.
inline FourierVector eigenfunction_coefficients(const FourierVector& v) { return adjoint_vector(v); }

/// f(theta) = sum_n v_n exp(-i n theta), rotated so that f(0) is positive real.
inline std::vector<complex> reconstruct_function(const FourierVector& v, const std::vector<double>& grid) {
  complex at_zero{0.0, 0.0};
  for (const auto& c : v.coeffs) at_zero += c;
  const double mag = std::abs(at_zero);
  const complex phase = mag > 0.0 ? std::conj(at_zero) / mag : complex{1.0, 0.0};
  std::vector<complex> out;
  out.reserve(grid.size());
  for (double theta : grid) {
    const complex step = std::polar(1.0, -theta);
    complex e = step;
    complex acc{0.0, 0.0};
    for (const auto& c : v.coeffs) {
      acc += c * e;
      e *= step;
    }
    out.push_back(acc * phase);
  }
  return out;
}

/// Zero-mean trigonometric polynomial sum_{0 < |n| <= N} f_n exp(-i n theta).
struct TrigPolynomial {
  int N = 0;
  std::vector<complex> coeffs;  // index n + N, n in [-N, N]; coeffs[N] must be 0

  complex& at(int n) { return coeffs[static_cast<std::size_t>(n + N)]; }
  complex at(int n) const { return coeffs[static_cast<std::size_t>(n + N)]; }
};

struct GapResult {
  double lhs = 0.0;  ///< ||(L - lambda0) f||
  double rhs = 0.0;  ///< (1 - |eps|/2) ||f'||
  bool holds() const noexcept { return lhs >= rhs; }
};

/// Both sides of ||(L - lambda0) f|| >= (1 - |eps|/2) ||f'|| for real lambda0.
/// (L f)_m = i [m f_m - (eps/2) m (m+1) f_{m+1} + (eps/2) m (m-1) f_{m-1}] is
/// applied exactly, so the image lives on [-N-1, N+1]. Norms are L^2 on
/// [-pi, pi], i.e. 2 pi times the coefficient sums.
inline GapResult regular_point_gap(const ProblemParams& params, double lambda0, const TrigPolynomial& f) {
  const int N = f.N;
  if (static_cast<int>(f.coeffs.size()) != 2 * N + 1) throw std::invalid_argument("regular_point_gap: bad size");
  if (f.at(0) != complex{0.0, 0.0}) throw std::invalid_argument("regular_point_gap: f must have zero mean");
  const double eps = params.epsilon();
  auto coef = [&](int n) { return (n < -N || n > N) ? complex{0.0, 0.0} : f.at(n); };
  double image = 0.0;
  for (int m = -N - 1; m <= N + 1; ++m) {
    const double md = m;
    const complex lf = complex{0.0, 1.0} * (md * coef(m) - 0.5 * eps * md * (md + 1.0) * coef(m + 1) +
                                            0.5 * eps * md * (md - 1.0) * coef(m - 1));
    image += std::norm(lf - lambda0 * coef(m));
  }
  double deriv = 0.0;
  for (int n = -N; n <= N; ++n) deriv += double(n) * n * std::norm(coef(n));
  const double scale = 2.0 * pi;
  return {std::sqrt(scale * image), (1.0 - std::abs(eps) / 2.0) * std::sqrt(scale * deriv)};
}

}  // namespace phspec
