#include "projfeas/rates.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "projfeas/error.hpp"

namespace projfeas {
namespace {

using u128 = unsigned __int128;
constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  const u128 r = static_cast<u128>(a) * b;
  if (r > kMax) throw OverflowError(std::string(what) + " exceeds 64-bit range");
  return static_cast<std::uint64_t>(r);
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exponent, const char* what) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exponent; ++i) {
    r = checked_mul(r, base, what);
    if (r == 0) break;
  }
  return r;
}

Fraction reduced(std::uint64_t num, std::uint64_t den) {
  const std::uint64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

void require_positive(std::uint64_t n, std::uint64_t d) {
  if (n == 0) throw InputError("dimension n must be >= 1");
  if (d == 0) throw InputError("degree d must be >= 1");
}

// A = (2d-1)^n + 1 and B = beta(n-1) d^n; tau = max{2/A, 1/B}.
struct ExponentTerms {
  std::uint64_t a;
  std::uint64_t b;
};

ExponentTerms exponent_terms(std::uint64_t n, std::uint64_t d) {
  require_positive(n, d);
  if (d > kMax / 2) throw OverflowError("2d exceeds 64-bit range");
  const std::uint64_t a = kappa(n, 2 * d);
  const std::uint64_t b = checked_mul(central_binomial(n - 1), checked_pow(d, n, "d^n"), "beta(n-1) d^n");
  return {a, b};
}

}  // namespace

std::string Fraction::to_string() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

std::string describe(const RateClass& rate) {
  if (std::holds_alternative<LinearRate>(rate)) return "linear";
  return "power_law(rho=" + std::get<PowerLawRate>(rate).rho.to_string() + ")";
}

std::uint64_t central_binomial(std::uint64_t s) {
  const std::uint64_t k = s / 2;
  // C(s, k) built as C(s-k+i, i) for i = 1..k; each intermediate is an exact
  // binomial coefficient so the division is exact.
  u128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (s - k + i) / i;
    if (c > kMax) throw OverflowError("central binomial exceeds 64-bit range");
  }
  return static_cast<std::uint64_t>(c);
}

std::uint64_t kappa(std::uint64_t n, std::uint64_t d) {
  require_positive(n, d);
  const std::uint64_t p = checked_pow(d - 1, n, "kappa");
  if (p == kMax) throw OverflowError("kappa exceeds 64-bit range");
  return p + 1;
}

Fraction holder_exponent(std::uint64_t n, std::uint64_t d) {
  const auto [a, b] = exponent_terms(n, d);
  // 2/a >= 1/b  <=>  2b >= a.
  if (static_cast<u128>(2) * b >= a) return reduced(2, a);
  return reduced(1, b);
}

double holder_exponent_tau(std::uint64_t n, std::uint64_t d) { return holder_exponent(n, d).value(); }

RateClass cyclic_rate(std::uint64_t n, std::uint64_t d) {
  const auto [a, b] = exponent_terms(n, d);
  if (d == 1) return LinearRate{};
  const std::uint64_t first = a - 2;
  const std::uint64_t second = checked_mul(2, b, "2 beta(n-1) d^n") - 2;
  return PowerLawRate{reduced(1, std::min(first, second))};
}

std::vector<double> recurrence_bound(double beta0, double p, std::span<const double> deltas) {
  if (!(p > 0.0) || !std::isfinite(p)) throw InputError("recurrence exponent p must be positive");
  if (!(beta0 >= 0.0) || !std::isfinite(beta0)) throw InputError("beta0 must be non-negative");
  std::vector<double> bounds;
  bounds.reserve(deltas.size());
  if (beta0 == 0.0) {
    bounds.assign(deltas.size(), 0.0);
    for (double delta : deltas) {
      if (!(delta >= 0.0)) throw InputError("deltas must be non-negative");
    }
    return bounds;
  }
  const double base = std::pow(beta0, -p);
  double sum = 0.0;
  for (double delta : deltas) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw InputError("deltas must be non-negative");
    sum += delta;
    bounds.push_back(std::pow(base + p * sum, -1.0 / p));
  }
  return bounds;
}

}  // namespace projfeas
