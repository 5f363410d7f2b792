// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "phspec/eigensolver.hpp"

using namespace phspec;

TEST(Eigensolver, ZeroEpsilonGivesIntegers) {
  const auto pairs = eigendecompose(build_A(0.0, 10), 10);
  ASSERT_EQ(pairs.size(), 10u);
  for (int n = 1; n <= 10; ++n) {
    EXPECT_NEAR(pairs[n - 1].mu.real(), n, 1e-13);
    EXPECT_NEAR(pairs[n - 1].mu.imag(), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(pairs[n - 1].v(n)), 1.0, 1e-12);
    EXPECT_TRUE(pairs[n - 1].on_axis());
  }
}

TEST(Eigensolver, LambdaIsIMu) {
  Eigenpair p{complex{2.0, 0.5}, {}, 0.0};
  EXPECT_EQ(p.lambda(), complex(-0.5, 2.0));
  EXPECT_FALSE(p.on_axis());
}

TEST(Eigensolver, TridiagonalSolveMatchesDense) {
  const auto op = build_A(ProblemParams(0.6), 40);
  const complex shift{3.3, 0.2};
  TridiagonalLU<complex> lu(op, shift);
  std::vector<complex> b(40);
  Eigen::VectorXcd eb(40);
  for (int i = 0; i < 40; ++i) eb[i] = b[i] = {std::sin(i + 1.0), std::cos(2.0 * i)};
  lu.solve(b);
  const Eigen::MatrixXcd m =
      op.dense().cast<complex>() - shift * Eigen::MatrixXcd::Identity(40, 40);
  const Eigen::VectorXcd x = m.fullPivLu().solve(eb);
  for (int i = 0; i < 40; ++i) EXPECT_LT(std::abs(b[i] - x[i]), 1e-10 * x.norm());
}

// Re mu = (v, D v) / (v, v) >= 1 for every eigenpair of the section.
TEST(Eigensolver, RealPartBoundedBelow) {
  for (double eps : {0.1, 0.5, 1.2}) {
    for (const auto& mu : all_eigenvalues(build_A(ProblemParams(eps), 128))) EXPECT_GE(mu.real(), 0.99) << eps;
  }
}

TEST(Eigensolver, DenseAndShiftInvertAgree) {
  const auto op = build_A(ProblemParams(0.3), 200);
  EigenOptions dense;
  dense.solver = SolverKind::dense;
  EigenOptions si;
  si.solver = SolverKind::shift_invert;
  const auto a = eigendecompose(op, 10, dense);
  const auto b = eigendecompose(op, 10, si);
  for (int j = 0; j < 10; ++j) {
    EXPECT_LT(std::abs(a[j].mu - b[j].mu), 1e-9 * std::abs(a[j].mu)) << j;
    EXPECT_LT(a[j].backward_error, 1e-10);
    EXPECT_LT(b[j].backward_error, 1e-10);
  }
}

TEST(Eigensolver, EigenvectorsSolveTheSection) {
  const auto op = build_A(ProblemParams(0.2), 600);
  const auto pairs = eigendecompose(op, 8);
  for (const auto& p : pairs) {
    const auto av = op.apply(p.v.coeffs);
    double err = 0.0;
    for (int i = 0; i < op.N; ++i) err = std::max(err, std::abs(av[i] - p.mu * p.v.coeffs[i]));
    EXPECT_LT(err, 1e-9 * op.frobenius_norm());
    EXPECT_NEAR(p.v.norm(), 1.0, 1e-12);
  }
}

TEST(Eigensolver, SortedByModulus) {
  const auto pairs = eigendecompose(build_A(ProblemParams(0.4), 512), 12);
  for (std::size_t j = 1; j < pairs.size(); ++j) {
    EXPECT_LE(std::abs(pairs[j - 1].mu), std::abs(pairs[j].mu) * (1.0 + 1e-14));
  }
}

TEST(Eigensolver, StableUnderTruncation) {
  const auto a = eigendecompose(build_A(ProblemParams(0.1), 512), 10);
  const auto b = eigendecompose(build_A(ProblemParams(0.1), 1024), 10);
  for (int j = 0; j < 10; ++j) EXPECT_LT(std::abs(a[j].mu - b[j].mu), 1e-6) << j;
}

// More leading eigenvalues stay real as the section grows.
TEST(Eigensolver, LeadingEigenvaluesStayOnAxis) {
  auto leading_real = [](int N) {
    const auto pairs = eigendecompose(build_A(ProblemParams(0.3), N), 10);
    int run = 0;
    while (run < 10 && pairs[run].on_axis()) ++run;
    return run;
  };
  EXPECT_LT(leading_real(128), 10);
  EXPECT_EQ(leading_real(1024), 10);
}

TEST(Eigensolver, ThreeByThreeAgainstCharacteristicPolynomial) {
  const auto op = build_A(ProblemParams(0.2), 3);
  const auto pairs = eigendecompose(op, 3);
  const Eigen::MatrixXcd m = op.dense().cast<complex>();
  for (const auto& p : pairs) {
    const complex det = (m - p.mu * Eigen::MatrixXcd::Identity(3, 3)).determinant();
    EXPECT_LT(std::abs(det), 1e-12);
  }
}

TEST(Eigensolver, Preconditions) {
  const auto op = build_A(ProblemParams(0.3), 8);
  EXPECT_THROW(eigendecompose(op, 0), std::invalid_argument);
  EXPECT_THROW(eigendecompose(op, 9), std::invalid_argument);
}
