#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "projfeas/error.hpp"
#include "projfeas/polynomial.hpp"
#include "support.hpp"

using namespace projfeas;
using testing_support::poly;
using testing_support::vec;

namespace {

// x^2 + 2x + y^2, i.e. (x+1)^2 + y^2 - 1
Polynomial shifted_disk() { return poly(2, {{{2, 0}, 1.0}, {{1, 0}, 2.0}, {{0, 2}, 1.0}}); }

// Term-by-term product accumulation, independent of Polynomial::evaluate.
double naive_eval(const Polynomial& p, const Vector& x) {
  double s = 0.0;
  for (const auto& m : p.terms()) {
    double t = m.coefficient;
    for (std::size_t i = 0; i < m.exponents.size(); ++i) {
      for (int e = 0; e < m.exponents[i]; ++e) t *= x[static_cast<Eigen::Index>(i)];
    }
    s += t;
  }
  return s;
}

}  // namespace

TEST(Polynomial, ZeroPolynomialEvaluatesToZero) {
  const Polynomial zero(2);
  EXPECT_TRUE(zero.is_zero());
  EXPECT_EQ(zero.degree(), 0);
  EXPECT_EQ(zero.evaluate(vec({3.7, -1.0})), 0.0);
}

TEST(Polynomial, DiskBoundaryAtOrigin) { EXPECT_EQ(shifted_disk().evaluate(vec({0.0, 0.0})), 0.0); }

TEST(Polynomial, ParabolaPoint) {
  const auto p = poly(2, {{{0, 2}, 1.0}, {{1, 0}, -1.0}});
  const Vector x = vec({0.25, 0.5});
  EXPECT_EQ(p.evaluate(x), 0.0);
  EXPECT_EQ(naive_eval(p, x), 0.0);
}

TEST(Polynomial, MergesDuplicatesAndDropsZeros) {
  const auto p = poly(2, {{{1, 0}, 1.0}, {{1, 0}, 2.0}, {{0, 1}, 0.0}, {{0, 0}, 4.0}, {{0, 0}, -4.0}});
  ASSERT_EQ(p.terms().size(), 1u);
  EXPECT_EQ(p.terms()[0].coefficient, 3.0);
  EXPECT_EQ(p.degree(), 1);
}

TEST(Polynomial, RejectsBadInput) {
  EXPECT_THROW(poly(2, {{{1}, 1.0}}), InputError);
  EXPECT_THROW(poly(2, {{{-1, 0}, 1.0}}), InputError);
  EXPECT_THROW(poly(1, {{{1}, std::nan("")}}), InputError);
  EXPECT_THROW(shifted_disk().evaluate(vec({1.0})), InputError);
  EXPECT_THROW(shifted_disk().gradient(vec({1.0, 2.0, 3.0})), InputError);
  EXPECT_THROW(shifted_disk().hessian(vec({1.0})), InputError);
}

TEST(Polynomial, GradientExamples) {
  EXPECT_EQ(Polynomial::constant(3, 5.0).gradient(vec({1.0, -2.0, 0.5})), Vector::Zero(3));
  EXPECT_EQ(shifted_disk().gradient(vec({0.0, 0.0})), vec({2.0, 0.0}));
  EXPECT_EQ(poly(1, {{{4}, 1.0}}).gradient(vec({2.0})), vec({32.0}));
}

TEST(Polynomial, HessianExamples) {
  const auto linear = poly(2, {{{1, 0}, 3.0}, {{0, 1}, -1.0}, {{0, 0}, 2.0}});
  EXPECT_EQ(linear.hessian(vec({0.3, 0.7})), Matrix::Zero(2, 2));
  const auto sq = poly(2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}});
  Matrix two = Matrix::Zero(2, 2);
  two.diagonal().setConstant(2.0);
  EXPECT_EQ(sq.hessian(vec({-4.0, 9.0})), two);
  EXPECT_EQ(poly(1, {{{4}, 1.0}}).hessian(vec({1.0}))(0, 0), 12.0);
}

TEST(Polynomial, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dim(1, 4), deg(1, 6), count(1, 8);
  const double h = 1e-6;
  for (int c = 0; c < 100; ++c) {
    const auto n = static_cast<std::size_t>(dim(rng));
    const auto p = testing_support::random_polynomial(rng, n, deg(rng), count(rng));
    const Vector x = testing_support::random_point(rng, n, -2.0, 2.0);
    const Vector g = p.gradient(x);
    for (std::size_t i = 0; i < n; ++i) {
      Vector xp = x, xm = x;
      xp[static_cast<Eigen::Index>(i)] += h;
      xm[static_cast<Eigen::Index>(i)] -= h;
      const double fd = (p.evaluate(xp) - p.evaluate(xm)) / (2 * h);
      const double gi = g[static_cast<Eigen::Index>(i)];
      EXPECT_LE(std::abs(fd - gi), 1e-4 * std::max(1.0, std::abs(gi))) << "case " << c << " component " << i;
    }
  }
}

TEST(Polynomial, HessianMatchesGradientDifferencesAndIsSymmetric) {
  std::mt19937_64 rng(12);
  for (int c = 0; c < 50; ++c) {
    const auto p = testing_support::random_polynomial(rng, 3, 5, 6);
    const Vector x = testing_support::random_point(rng, 3, -1.5, 1.5);
    const Matrix hess = p.hessian(x);
    EXPECT_TRUE((hess.array() == hess.transpose().array()).all());
    for (Eigen::Index i = 0; i < 3; ++i) {
      Vector xp = x, xm = x;
      xp[i] += 1e-6;
      xm[i] -= 1e-6;
      const Vector col = (p.gradient(xp) - p.gradient(xm)) / 2e-6;
      for (Eigen::Index j = 0; j < 3; ++j) {
        EXPECT_LE(std::abs(col[j] - hess(j, i)), 1e-4 * std::max(1.0, std::abs(hess(j, i))));
      }
    }
  }
}

TEST(Polynomial, EvaluateAgreesWithNaiveAccumulation) {
  std::mt19937_64 rng(13);
  for (int c = 0; c < 100; ++c) {
    const auto p = testing_support::random_polynomial(rng, 3, 6, 7);
    const Vector x = testing_support::random_point(rng, 3, -2.0, 2.0);
    const double ref = naive_eval(p, x);
    EXPECT_LE(std::abs(p.evaluate(x) - ref), 1e-12 * std::max(1.0, std::abs(ref)));
  }
}

TEST(Polynomial, EvaluateIsLinear) {
  std::mt19937_64 rng(14);
  for (int c = 0; c < 100; ++c) {
    const auto p = testing_support::random_polynomial(rng, 2, 5, 5);
    const auto q = testing_support::random_polynomial(rng, 2, 5, 5);
    const Vector x = testing_support::random_point(rng, 2, -2.0, 2.0);
    const double a = 1.5, b = -0.75;
    const double lhs = (a * p + b * q).evaluate(x);
    const double rhs = a * p.evaluate(x) + b * q.evaluate(x);
    const double scale = std::abs(a * p.evaluate(x)) + std::abs(b * q.evaluate(x));
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, scale));
  }
}

TEST(Polynomial, DegreeOfProductIsSum) {
  std::mt19937_64 rng(15);
  for (int c = 0; c < 100; ++c) {
    const auto p = testing_support::random_polynomial(rng, 3, 4, 4);
    const auto q = testing_support::random_polynomial(rng, 3, 4, 4);
    if (p.is_zero() || q.is_zero()) continue;
    EXPECT_EQ((p * q).degree(), p.degree() + q.degree());
  }
}

TEST(Polynomial, DerivativeMatchesGradient) {
  const auto p = poly(2, {{{3, 1}, 2.0}, {{0, 2}, -1.0}, {{1, 0}, 4.0}});
  const Vector x = vec({0.5, -1.25});
  const Vector g = p.gradient(x);
  EXPECT_DOUBLE_EQ(p.derivative(0).evaluate(x), g[0]);
  EXPECT_DOUBLE_EQ(p.derivative(1).evaluate(x), g[1]);
}

TEST(Polynomial, CanonicalOrderMakesEqualPolynomialsIdentical) {
  const auto a = poly(2, {{{0, 2}, 1.0}, {{2, 0}, 1.0}, {{1, 1}, 3.0}});
  const auto b = poly(2, {{{1, 1}, 3.0}, {{2, 0}, 1.0}, {{0, 2}, 1.0}});
  EXPECT_EQ(a, b);
}

TEST(ConvexitySampler, SumOfSquaresIsConvex) {
  const auto p = poly(2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}});
  const auto r = sample_convexity_check(p, {vec({-3, -3}), vec({3, 3})}, 100, 0);
  EXPECT_DOUBLE_EQ(r.min_eigenvalue_seen, 2.0);
  EXPECT_FALSE(r.suspicious());
}

TEST(ConvexitySampler, SaddleIsReported) {
  const auto p = poly(2, {{{1, 1}, 1.0}});
  const auto r = sample_convexity_check(p, {vec({-1, -1}), vec({1, 1})}, 20, 7);
  EXPECT_NEAR(r.min_eigenvalue_seen, -1.0, 1e-12);
  ASSERT_TRUE(r.suspicious());
  EXPECT_EQ(r.witness->size(), 2);
}

TEST(ConvexitySampler, QuarticIsConvex) {
  const auto r = sample_convexity_check(poly(1, {{{4}, 1.0}}), {vec({-1}), vec({1})}, 200, 3);
  EXPECT_GE(r.min_eigenvalue_seen, 0.0);
  EXPECT_FALSE(r.suspicious());
}

TEST(ConvexitySampler, SeedReproducible) {
  const auto p = poly(2, {{{3, 0}, 1.0}, {{0, 2}, 1.0}});
  const Box box{vec({-1, -1}), vec({1, 1})};
  const auto a = sample_convexity_check(p, box, 50, 42);
  const auto b = sample_convexity_check(p, box, 50, 42);
  EXPECT_EQ(a.min_eigenvalue_seen, b.min_eigenvalue_seen);
  ASSERT_TRUE(a.witness && b.witness);
  EXPECT_EQ(*a.witness, *b.witness);
}

TEST(ConvexitySampler, RejectsBadBox) {
  const auto p = poly(1, {{{2}, 1.0}});
  EXPECT_THROW(sample_convexity_check(p, {vec({1}), vec({-1})}, 10, 0), InputError);
  EXPECT_THROW(sample_convexity_check(p, {vec({-1}), vec({1})}, 0, 0), InputError);
}
