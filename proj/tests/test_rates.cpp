#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "projfeas/error.hpp"
#include "projfeas/rates.hpp"
#include "properties.hpp"

using namespace projfeas;

namespace {

Fraction rho(std::uint64_t n, std::uint64_t d) { return std::get<PowerLawRate>(cyclic_rate(n, d)).rho; }

// a/b <= c/d for positive fractions
bool frac_le(Fraction a, Fraction b) {
  return static_cast<unsigned __int128>(a.num) * b.den <= static_cast<unsigned __int128>(b.num) * a.den;
}

}  // namespace

TEST(CentralBinomial, SmallValues) {
  EXPECT_EQ(central_binomial(0), 1u);
  EXPECT_EQ(central_binomial(1), 1u);
  EXPECT_EQ(central_binomial(4), 6u);
  EXPECT_EQ(central_binomial(5), 10u);
  EXPECT_EQ(central_binomial(10), 252u);
}

TEST(CentralBinomial, LargestAndOverflow) {
  EXPECT_EQ(central_binomial(66), 7219428434016265740ull);
  EXPECT_EQ(central_binomial(67), 14226520737620288370ull);
  EXPECT_THROW(central_binomial(68), OverflowError);
}

TEST(Kappa, Examples) {
  EXPECT_EQ(kappa(2, 2), 2u);
  EXPECT_EQ(kappa(3, 1), 1u);
  EXPECT_EQ(kappa(2, 4), 10u);
  EXPECT_THROW(kappa(64, 3), OverflowError);
  EXPECT_THROW(kappa(0, 2), InputError);
  EXPECT_THROW(kappa(2, 0), InputError);
}

TEST(HolderExponent, LinearSystemsAreLipschitz) {
  for (std::uint64_t n = 1; n <= 8; ++n) {
    EXPECT_EQ(holder_exponent(n, 1), (Fraction{1, 1}));
    EXPECT_EQ(holder_exponent_tau(n, 1), 1.0);
  }
}

TEST(HolderExponent, OneDimensionGivesOneOverD) {
  for (std::uint64_t d = 1; d <= 10; ++d) {
    EXPECT_EQ(holder_exponent(1, d), (Fraction{1, d}));
  }
}

TEST(HolderExponent, TwoByTwo) {
  EXPECT_EQ(holder_exponent(2, 2), (Fraction{1, 4}));
  EXPECT_EQ(holder_exponent_tau(2, 2), 0.25);
}

TEST(HolderExponent, AtMostOneAndOneOnlyForLinear) {
  for (std::uint64_t n = 1; n <= 6; ++n) {
    for (std::uint64_t d = 1; d <= 6; ++d) {
      const double tau = holder_exponent_tau(n, d);
      EXPECT_LE(tau, 1.0);
      EXPECT_EQ(tau == 1.0, d == 1) << n << "," << d;
    }
  }
}

TEST(CyclicRate, Examples) {
  EXPECT_EQ(cyclic_rate(2, 2), RateClass(PowerLawRate{{1, 6}}));
  EXPECT_EQ(cyclic_rate(3, 1), RateClass(LinearRate{}));
  EXPECT_EQ(cyclic_rate(2, 4), RateClass(PowerLawRate{{1, 30}}));
  EXPECT_EQ(describe(cyclic_rate(2, 2)), "power_law(rho=1/6)");
  EXPECT_EQ(describe(cyclic_rate(2, 1)), "linear");
}

TEST(CyclicRate, LinearExactlyForDegreeOne) {
  for (std::uint64_t n = 1; n <= 8; ++n) {
    EXPECT_TRUE(std::holds_alternative<LinearRate>(cyclic_rate(n, 1)));
    for (std::uint64_t d = 2; d <= 6; ++d) {
      const Fraction r = rho(n, d);
      EXPECT_GT(r.num, 0u);
      EXPECT_LE(r.num, r.den);
    }
  }
}

TEST(CyclicRate, NonIncreasingInNAndD) {
  for (std::uint64_t n = 1; n <= 8; ++n) {
    for (std::uint64_t d = 2; d <= 8; ++d) {
      if (n < 8) EXPECT_TRUE(frac_le(rho(n + 1, d), rho(n, d))) << n << "," << d;
      if (d < 8) EXPECT_TRUE(frac_le(rho(n, d + 1), rho(n, d))) << n << "," << d;
    }
  }
}

TEST(CyclicRate, MatchesHolderExponentIdentity) {
  // rho = 1 / (2/tau - 2) with tau = p/q gives rho = p / (2q - 2p).
  for (std::uint64_t n = 1; n <= 8; ++n) {
    for (std::uint64_t d = 2; d <= 8; ++d) {
      const Fraction tau = holder_exponent(n, d);
      std::uint64_t num = tau.num, den = 2 * tau.den - 2 * tau.num;
      const std::uint64_t g = std::gcd(num, den);
      EXPECT_EQ(rho(n, d), (Fraction{num / g, den / g})) << n << "," << d;
    }
  }
}

TEST(RecurrenceBound, ZeroStartGivesZeros) {
  const std::vector<double> deltas{0.5, 1.0, 3.0};
  EXPECT_EQ(recurrence_bound(0.0, 2.0, deltas), std::vector<double>(3, 0.0));
}

TEST(RecurrenceBound, UnitDecrements) {
  const std::vector<double> deltas(10, 1.0);
  const auto b = recurrence_bound(1.0, 1.0, deltas);
  for (std::size_t k = 1; k <= 10; ++k) EXPECT_NEAR(b[k - 1], 1.0 / (1.0 + static_cast<double>(k)), 1e-15);
}

TEST(RecurrenceBound, ZeroDecrementsKeepStart) {
  const std::vector<double> deltas(3, 0.0);
  EXPECT_EQ(recurrence_bound(1.0, 2.0, deltas), std::vector<double>(3, 1.0));
}

TEST(RecurrenceBound, RejectsBadInput) {
  const std::vector<double> ok{1.0};
  const std::vector<double> negative{-1.0};
  EXPECT_THROW(recurrence_bound(1.0, 0.0, ok), InputError);
  EXPECT_THROW(recurrence_bound(-1.0, 1.0, ok), InputError);
  EXPECT_THROW(recurrence_bound(1.0, 1.0, negative), InputError);
}

TEST(RecurrenceBound, HoldsForAdmissibleSequences) {
  EXPECT_LE(testing_support::recurrence_worst_excess(41), 1e-12);
}
