#ifndef PROJFEAS_RATES_HPP
#define PROJFEAS_RATES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace projfeas {

/// Positive fraction num/den kept in lowest terms.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;
  bool operator==(const Fraction&) const = default;
};

/// Linear (geometric) convergence, the d = 1 branch.
struct LinearRate {
  bool operator==(const LinearRate&) const = default;
};

/// Sublinear convergence ||x_k - x_inf|| <= M k^{-rho}.
struct PowerLawRate {
  Fraction rho;
  bool operator==(const PowerLawRate&) const = default;
};

using RateClass = std::variant<LinearRate, PowerLawRate>;

std::string describe(const RateClass& rate);

/// Split of constraint indices into J0 (identically zero on the solution set)
/// and J1 (the rest). Indices are 0-based positions in the flattened
/// constraint list of a problem.
struct IndexPartition {
  std::vector<std::size_t> j0;
  std::vector<std::size_t> j1;
};

/// C(s, floor(s/2)), with C(0, 0) = 1. Throws OverflowError past 64 bits.
std::uint64_t central_binomial(std::uint64_t s);

/// (d-1)^n + 1. Throws OverflowError past 64 bits.
std::uint64_t kappa(std::uint64_t n, std::uint64_t d);

/// Hoelder exponent of the local error bound for a convex polynomial system of
/// degree at most d in R^n: max{2/kappa(n,2d), 1/(beta(n-1) d^n)}.
Fraction holder_exponent(std::uint64_t n, std::uint64_t d);
double holder_exponent_tau(std::uint64_t n, std::uint64_t d);

/// Guaranteed rate class of the cyclic projection method: linear for d = 1,
/// otherwise power law with rho = 1/min{(2d-1)^n - 1, 2 beta(n-1) d^n - 2}.
RateClass cyclic_rate(std::uint64_t n, std::uint64_t d);

/// Upper bounds B_k = (beta0^{-p} + p * sum_{i<k} delta_i)^{-1/p} for
/// k = 1..deltas.size(), valid for any nonnegative sequence with
/// beta_{k+1} <= beta_k (1 - delta_k beta_k^p). beta0 = 0 yields all zeros.
std::vector<double> recurrence_bound(double beta0, double p, std::span<const double> deltas);

}  // namespace projfeas

#endif  // PROJFEAS_RATES_HPP
