#ifndef PROJFEAS_CATALOG_HPP
#define PROJFEAS_CATALOG_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "projfeas/rates.hpp"
#include "projfeas/sets.hpp"

namespace projfeas::catalog {

enum class EntryKind {
  kCyclic,       // cyclic projections onto all sets of `problem`
  kAlternating,  // alternating projections between set(0) = A and set(1) = B
  kErrorBound,   // error-bound worst case, probed along `curve`
};

/// A worked problem with known answers.
struct CatalogEntry {
  std::string id;
  std::string title;
  EntryKind kind = EntryKind::kCyclic;
  FeasibilityProblem problem;
  /// x0 for cyclic runs, b0 for alternating runs.
  Vector start;
  /// Limit of the iterates (of a_k for alternating entries).
  Vector known_limit;
  /// Limit of b_k for alternating entries.
  std::optional<Vector> known_b_limit;
  /// Guarantee cyclic_rate(n, d) for this problem.
  RateClass theoretical_rate;
  /// Decay actually documented for the example, in words.
  std::string documented_rate;
  /// Iterate formula in k, where the entry has one (b_k for ex5.3).
  std::function<Vector(std::uint64_t)> closed_form;
  /// Parametrized curve for error-bound entries.
  std::function<Vector(double)> curve;
};

/// Four sets in R^2 meeting only at the origin: two unit disks centered at
/// (-1, 0) and (1, 0), the half-plane x + y <= 1 and x + (y+2)^2 <= 4.
CatalogEntry example_5_1();

/// A = unit disk at (-1, 0), B = {x >= alpha}. The closed form gives b_k for
/// k >= 1 in terms of t1, the second coordinate of b_1. The documented start
/// b0 = (-1 + 2 sqrt(1 - t1^2), 2 t1) produces exactly that b_1.
CatalogEntry example_5_3(double alpha, double t1);

/// Two unit disks tangent at the origin, start (0, 2).
CatalogEntry example_5_5();

/// A = {x <= 0}, B = {y^d <= x} for even d, start (y0^d, y0) with y0 = 1/2.
CatalogEntry example_5_7(int d);

/// Two quartic balls in R^n at distance 1, gap vector (1, 0, ..., 0).
CatalogEntry example_5_8(int n);

/// The chain x_1^d <= 0, x_i^d <= x_{i-1} with solution set {0} and curve
/// x(t) = (t^{d^{n-1}}, ..., t^d, t).
CatalogEntry example_3_2(int n, int d);

/// Looks an entry up by id, e.g. "ex5.1", "ex5.7:d=4", "ex5.3:alpha=0.25,t1=0.5".
/// Throws InputError for unknown ids or malformed parameters.
CatalogEntry lookup(std::string_view id);

/// Ids of the default-parameter entries, in display order.
std::vector<std::string> default_ids();

// Scalar oracles.

/// One step of the ex5.5 recurrence 1 - a' = (1 + a)/sqrt(1 + 4a),
/// evaluated without cancellation.
double ex55_alpha_step(double alpha);
double ex55_alpha_after(double alpha0, std::uint64_t steps);

/// y' with d y'^{2d-1} + y' = y, by bracketed Newton on [0, y].
double ex57_next_y(int d, double y);

/// b_k of ex5.3, k >= 1.
Vector ex53_b(double alpha, double t1, std::uint64_t k);
/// a_{k+1} of ex5.3, k >= 1.
Vector ex53_a_next(double alpha, double t1, std::uint64_t k);
/// t1 reached from an arbitrary start b0 outside the interior of B.
double ex53_t1_from_start(double alpha, const Vector& b0);

Vector ex32_curve(int n, int d, double t);

}  // namespace projfeas::catalog

#endif  // PROJFEAS_CATALOG_HPP
