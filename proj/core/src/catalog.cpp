#include "projfeas/catalog.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>

#include "projfeas/error.hpp"

namespace projfeas::catalog {
namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

double ipow(double base, int exponent) {
  double r = 1.0;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

Polynomial power(const Polynomial& p, int exponent) {
  Polynomial r = Polynomial::constant(p.dimension(), 1.0);
  for (int i = 0; i < exponent; ++i) r = r * p;
  return r;
}

// (x_1 + shift)^4 + sum_{i>=2} x_i^4 - 1
Polynomial quartic_ball(std::size_t n, double shift) {
  Polynomial g = power(Polynomial::variable(n, 0) + Polynomial::constant(n, shift), 4);
  for (std::size_t i = 1; i < n; ++i) g = g + power(Polynomial::variable(n, i), 4);
  return g - Polynomial::constant(n, 1.0);
}

void require_even_degree(int d) {
  if (d < 2 || d % 2 != 0) throw InputError("degree must be even and >= 2, got " + std::to_string(d));
}

using Params = std::map<std::string, std::string, std::less<>>;

Params parse_params(std::string_view text) {
  Params params;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw InputError("malformed catalog parameter '" + std::string(item) + "'");
    }
    params.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return params;
}

int int_param(Params& params, const std::string& key, int fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  int value = 0;
  const auto& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("parameter " + key + " must be an integer");
  params.erase(it);
  return value;
}

double real_param(Params& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  char* end = nullptr;
  const double value = std::strtod(it->second.c_str(), &end);
  if (end != it->second.c_str() + it->second.size() || !std::isfinite(value)) {
    throw InputError("parameter " + key + " must be a real number");
  }
  params.erase(it);
  return value;
}

}  // namespace

double ex55_alpha_step(double alpha) {
  // 1 - (1+a)/s with s = sqrt(1+4a), rewritten as a(2-a) / ((s + 1 + a) s).
  const double s = std::sqrt(1.0 + 4.0 * alpha);
  return alpha * (2.0 - alpha) / ((s + 1.0 + alpha) * s);
}

double ex55_alpha_after(double alpha0, std::uint64_t steps) {
  double a = alpha0;
  for (std::uint64_t k = 0; k < steps; ++k) a = ex55_alpha_step(a);
  return a;
}

double ex57_next_y(int d, double y) {
  require_even_degree(d);
  if (y == 0.0) return 0.0;
  auto h = [&](double s) { return d * ipow(s, 2 * d - 1) + s - y; };
  auto dh = [&](double s) { return d * (2 * d - 1) * ipow(s, 2 * d - 2) + 1.0; };
  double lo = std::min(0.0, y);
  double hi = std::max(0.0, y);
  double s = y;
  for (int it = 0; it < 200; ++it) {
    const double hs = h(s);
    if (hs == 0.0) return s;
    if (hs > 0.0) hi = s; else lo = s;
    double next = s - hs / dh(s);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 1e-16 * std::abs(s) || next == s) return next;
    s = next;
  }
  return s;
}

Vector ex53_b(double alpha, double t1, std::uint64_t k) {
  if (k == 0) throw InputError("closed form of ex5.3 starts at k = 1");
  const double q = (1.0 + alpha) * (1.0 + alpha);
  double sum = 0.0;
  for (std::uint64_t i = 0; i + 2 <= k; ++i) sum += std::pow(q, static_cast<double>(i));
  const double denom = std::pow(q, static_cast<double>(k - 1)) + t1 * t1 * sum;
  return vec({alpha, t1 / std::sqrt(denom)});
}

Vector ex53_a_next(double alpha, double t1, std::uint64_t k) {
  if (k == 0) throw InputError("closed form of ex5.3 starts at k = 1");
  const double q = (1.0 + alpha) * (1.0 + alpha);
  double sum_prev = 0.0;
  for (std::uint64_t i = 0; i + 2 <= k; ++i) sum_prev += std::pow(q, static_cast<double>(i));
  const double sum = sum_prev + std::pow(q, static_cast<double>(k - 1));
  const double dk = std::pow(q, static_cast<double>(k - 1)) + t1 * t1 * sum_prev;
  const double x = -1.0 + (alpha + 1.0) / std::sqrt(q + t1 * t1 / dk);
  const double y = t1 / std::sqrt(std::pow(q, static_cast<double>(k)) + t1 * t1 * sum);
  return vec({x, y});
}

double ex53_t1_from_start(double alpha, const Vector& b0) {
  if (b0.size() != 2) throw InputError("ex5.3 lives in R^2");
  const Vector shifted = b0 - vec({-1.0, 0.0});
  const double norm = shifted.norm();
  const Vector a1 = norm > 1.0 ? Vector(vec({-1.0, 0.0}) + shifted / norm) : b0;
  if (a1[0] > alpha) throw InputError("start lies in the interior of B");
  return a1[1];
}

Vector ex32_curve(int n, int d, double t) {
  Vector x(n);
  double e = 1.0;
  // x_n = t, x_{n-1} = t^d, ..., x_1 = t^{d^{n-1}}
  for (int i = n - 1; i >= 0; --i) {
    x[i] = std::pow(t, e);
    e *= d;
  }
  return x;
}

CatalogEntry example_5_1() {
  const Vector origin = Vector::Zero(2);
  const Polynomial x = Polynomial::variable(2, 0);
  const Polynomial y = Polynomial::variable(2, 1);
  const Polynomial c4 = x + (y + Polynomial::constant(2, 2.0)) * (y + Polynomial::constant(2, 2.0)) -
                        Polynomial::constant(2, 4.0);
  std::vector<ConvexSet> sets{
      ConvexSet::ball("C1", vec({-1.0, 0.0}), 1.0),
      ConvexSet::halfspace("C2", vec({1.0, 1.0}), 1.0),
      ConvexSet::ball("C3", vec({1.0, 0.0}), 1.0),
      ConvexSet("C4", {c4}),
  };
  FeasibilityProblem problem(std::move(sets), SingletonOracle{origin});
  return CatalogEntry{"ex5.1",
                      "four sets meeting only at the origin",
                      EntryKind::kCyclic,
                      std::move(problem),
                      vec({1.0, 1.0}),
                      origin,
                      std::nullopt,
                      cyclic_rate(2, 2),
                      "||x_k|| = O(k^{-1/6})",
                      {},
                      {}};
}

CatalogEntry example_5_3(double alpha, double t1) {
  if (!(alpha >= 0.0)) throw InputError("alpha must be >= 0");
  if (!(std::abs(t1) <= 1.0)) throw InputError("t1 must lie in [-1, 1]");
  std::vector<ConvexSet> sets{
      ConvexSet::ball("A", vec({-1.0, 0.0}), 1.0),
      ConvexSet::halfspace("B", vec({-1.0, 0.0}), -alpha),
  };
  IntersectionOracle oracle;
  if (alpha == 0.0) oracle = SingletonOracle{Vector::Zero(2)};
  FeasibilityProblem problem(std::move(sets), oracle);
  const double c = std::sqrt(1.0 - t1 * t1);
  return CatalogEntry{"ex5.3",
                      "unit disk and half-plane x >= alpha",
                      EntryKind::kAlternating,
                      std::move(problem),
                      vec({-1.0 + 2.0 * c, 2.0 * t1}),
                      Vector::Zero(2),
                      vec({alpha, 0.0}),
                      cyclic_rate(2, 2),
                      alpha == 0.0 ? "k^{-1/2}" : "(1+alpha)^{-k}",
                      [alpha, t1](std::uint64_t k) { return ex53_b(alpha, t1, k); },
                      {}};
}

CatalogEntry example_5_5() {
  std::vector<ConvexSet> sets{
      ConvexSet::ball("A", vec({-1.0, 0.0}), 1.0),
      ConvexSet::ball("B", vec({1.0, 0.0}), 1.0),
  };
  FeasibilityProblem problem(std::move(sets), SingletonOracle{Vector::Zero(2)});
  return CatalogEntry{"ex5.5",
                      "two unit disks tangent at the origin",
                      EntryKind::kAlternating,
                      std::move(problem),
                      vec({0.0, 2.0}),
                      Vector::Zero(2),
                      Vector::Zero(2),
                      cyclic_rate(2, 2),
                      "r_k ~ 1/sqrt(2k)",
                      {},
                      {}};
}

CatalogEntry example_5_7(int d) {
  require_even_degree(d);
  std::vector<ConvexSet> sets{
      ConvexSet::halfspace("A", vec({1.0, 0.0}), 0.0),
      ConvexSet::power_epigraph("B", 2, d, 0, 1),
  };
  FeasibilityProblem problem(std::move(sets), SingletonOracle{Vector::Zero(2)});
  const double y0 = 0.5;
  const auto ud = static_cast<std::uint64_t>(d);
  return CatalogEntry{"ex5.7:d=" + std::to_string(d),
                      "half-plane x <= 0 and {y^d <= x}",
                      EntryKind::kAlternating,
                      std::move(problem),
                      vec({ipow(y0, d), y0}),
                      Vector::Zero(2),
                      Vector::Zero(2),
                      cyclic_rate(2, ud),
                      "k^{-1/" + std::to_string(2 * d - 2) + "}",
                      {},
                      {}};
}

CatalogEntry example_5_8(int n) {
  if (n < 1) throw InputError("dimension must be >= 1");
  const auto un = static_cast<std::size_t>(n);
  std::vector<ConvexSet> sets{
      ConvexSet("A", {quartic_ball(un, 1.0)}),
      ConvexSet("B", {quartic_ball(un, -2.0)}),
  };
  FeasibilityProblem problem(std::move(sets));
  Vector start = Vector::Constant(n, 0.5);
  start[0] = 2.0;
  Vector b_limit = Vector::Zero(n);
  b_limit[0] = 1.0;
  return CatalogEntry{"ex5.8:n=" + std::to_string(n),
                      "two quartic balls at distance 1",
                      EntryKind::kAlternating,
                      std::move(problem),
                      std::move(start),
                      Vector::Zero(n),
                      std::move(b_limit),
                      cyclic_rate(un, 4),
                      "O(k^{-rho_n})",
                      {},
                      {}};
}

CatalogEntry example_3_2(int n, int d) {
  if (n < 1) throw InputError("dimension must be >= 1");
  require_even_degree(d);
  const auto un = static_cast<std::size_t>(n);
  std::vector<Polynomial> chain;
  chain.push_back(power(Polynomial::variable(un, 0), d));
  for (std::size_t i = 1; i < un; ++i) {
    chain.push_back(power(Polynomial::variable(un, i), d) - Polynomial::variable(un, i - 1));
  }
  FeasibilityProblem problem({ConvexSet("S", std::move(chain))}, SingletonOracle{Vector::Zero(n)});
  return CatalogEntry{"ex3.2:n=" + std::to_string(n) + ",d=" + std::to_string(d),
                      "error-bound worst case x_1^d <= 0, x_i^d <= x_{i-1}",
                      EntryKind::kErrorBound,
                      std::move(problem),
                      Vector::Zero(n),
                      Vector::Zero(n),
                      std::nullopt,
                      cyclic_rate(un, static_cast<std::uint64_t>(d)),
                      "tau <= 1/d^n",
                      {},
                      [n, d](double t) { return ex32_curve(n, d, t); }};
}

CatalogEntry lookup(std::string_view id) {
  const auto colon = id.find(':');
  const std::string_view base = id.substr(0, colon);
  Params params = colon == std::string_view::npos ? Params{} : parse_params(id.substr(colon + 1));
  auto finish = [&](CatalogEntry entry) {
    if (!params.empty()) throw InputError("unknown parameter '" + params.begin()->first + "' for " + std::string(base));
    return entry;
  };
  if (base == "ex5.1") return finish(example_5_1());
  if (base == "ex5.3") {
    const double alpha = real_param(params, "alpha", 0.5);
    const double t1 = real_param(params, "t1", 0.5);
    return finish(example_5_3(alpha, t1));
  }
  if (base == "ex5.5") return finish(example_5_5());
  if (base == "ex5.7") return finish(example_5_7(int_param(params, "d", 2)));
  if (base == "ex5.8") return finish(example_5_8(int_param(params, "n", 2)));
  if (base == "ex3.2") {
    const int n = int_param(params, "n", 2);
    const int d = int_param(params, "d", 2);
    return finish(example_3_2(n, d));
  }
  throw InputError("unknown catalog id '" + std::string(id) + "'");
}

std::vector<std::string> default_ids() { return {"ex3.2", "ex5.1", "ex5.3", "ex5.5", "ex5.7", "ex5.8"}; }

}  // namespace projfeas::catalog
