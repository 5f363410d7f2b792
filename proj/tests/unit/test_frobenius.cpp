// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "phspec/frobenius.hpp"

using namespace phspec;

TEST(ProblemParams, RejectsOutOfRange) {
  EXPECT_THROW(ProblemParams(0.0), std::invalid_argument);
  EXPECT_THROW(ProblemParams(2.0), std::invalid_argument);
  EXPECT_THROW(ProblemParams(-2.5), std::invalid_argument);
  EXPECT_THROW(ProblemParams(std::numeric_limits<double>::quiet_NaN()), std::invalid_argument);
  EXPECT_NO_THROW(ProblemParams(1.999));
  EXPECT_NO_THROW(ProblemParams(-0.5));
}

TEST(ProblemParams, ResonantIndex) {
  EXPECT_EQ(ProblemParams(0.5).resonant_index(), 2);
  EXPECT_EQ(ProblemParams(1.0 / 3.0).resonant_index(), 3);
  EXPECT_EQ(ProblemParams(-0.25).resonant_index(), 4);
  EXPECT_FALSE(ProblemParams(0.3).resonant_index().has_value());
  EXPECT_FALSE(ProblemParams(1.5).resonant_index().has_value());
}

// Hand expansion of eps sin f'' + (1 + eps cos) f' + lambda f = 0 with
// sin = t - t^3/6 and cos = 1 - t^2/2 through order t^2.
TEST(Frobenius, FirstCoefficientsClosedForm) {
  for (double eps : {0.1, 0.5, 1.5}) {
    for (complex lambda : {complex{0.0, 1.0}, complex{1.0, 2.0}, complex{-3.0, 0.5}}) {
      const auto s = frobenius_coefficients(ProblemParams(eps), lambda, 5);
      const complex c1 = -lambda / (1.0 + eps);
      const complex c2 = -lambda * c1 / (2.0 * (1.0 + 2.0 * eps));
      const complex c3 = (0.5 * eps * c1 - lambda * c2) / (3.0 * (1.0 + 3.0 * eps));
      EXPECT_EQ(s.coeffs[0], complex(1.0, 0.0));
      EXPECT_LT(std::abs(s.coeffs[1] - c1), 1e-14 * std::abs(c1));
      EXPECT_LT(std::abs(s.coeffs[2] - c2), 1e-14 * std::abs(c2));
      // c3 vanishes for lambda = i, eps = 1/2.
      EXPECT_LE(std::abs(s.coeffs[3] - c3), 1e-13 * std::max(std::abs(c3), std::abs(c2)));
    }
  }
}

TEST(Frobenius, LambdaZeroIsConstant) {
  const auto s = frobenius_coefficients(ProblemParams(0.7), complex{0.0, 0.0}, 40);
  for (int n = 1; n <= 40; ++n) EXPECT_EQ(s.coeffs[n], complex(0.0, 0.0));
}

// Plugging the truncated series back into the ODE; f'' by a central
// difference of the series derivative.
TEST(Frobenius, SeriesSatisfiesOde) {
  for (double eps : {0.1, 0.5, 1.2}) {
    const ProblemParams p(eps);
    const complex lambda{0.3, 2.0};
    const auto s = frobenius_coefficients(p, lambda, 100);
    for (double t : {1e-3, 0.05, 0.3, 0.8}) {
      const double h = 1e-5;
      const auto a = series_eval(s, t);
      const complex fpp = (series_eval(s, t + h).fprime - series_eval(s, t - h).fprime) / (2.0 * h);
      const complex res = eps * std::sin(t) * fpp + (1.0 + eps * std::cos(t)) * a.fprime + lambda * a.f;
      EXPECT_LT(std::abs(res), 1e-7 * (1.0 + std::abs(lambda * a.f))) << "eps=" << eps << " t=" << t;
    }
  }
}

TEST(Frobenius, TruncationConverges) {
  const ProblemParams p(0.5);
  const complex lambda{0.0, 3.0};
  const auto s100 = frobenius_coefficients(p, lambda, 100);
  const auto s200 = frobenius_coefficients(p, lambda, 200);
  for (double t : {1e-8, 0.1, 1.0}) {
    const auto a = series_eval(s100, t);
    const auto b = series_eval(s200, t);
    EXPECT_LT(std::abs(a.f - b.f), 1e-12 * std::abs(b.f));
    EXPECT_LT(std::abs(a.fprime - b.fprime), 1e-12 * std::abs(b.fprime));
  }
}

TEST(Frobenius, ResonanceOnlyForNegativeReciprocal) {
  EXPECT_NO_THROW(frobenius_coefficients(ProblemParams(0.5), complex{0.0, 1.0}, 100));
  EXPECT_NO_THROW(frobenius_coefficients(ProblemParams(0.1), complex{0.0, 1.0}, 100));
  try {
    frobenius_coefficients(ProblemParams(-0.5), complex{0.0, 1.0}, 10);
    FAIL() << "expected resonance";
  } catch (const NumericalError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resonant_epsilon);
  }
}

TEST(Frobenius, HornerMatchesDirectSum) {
  FrobeniusSeries s{0.5, {0.0, 1.0}, {complex{1.0, 0.0}, complex{2.0, -1.0}, complex{0.5, 0.25}}};
  const double t = 0.3;
  const auto v = series_eval(s, t);
  const complex f = s.coeffs[0] + s.coeffs[1] * t + s.coeffs[2] * t * t;
  const complex fp = s.coeffs[1] + 2.0 * s.coeffs[2] * t;
  EXPECT_LT(std::abs(v.f - f), 1e-15);
  EXPECT_LT(std::abs(v.fprime - fp), 1e-15);
  EXPECT_EQ(s.truncation(), 2);
}
