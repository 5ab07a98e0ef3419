#ifndef PROJFEAS_SETS_HPP
#define PROJFEAS_SETS_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "projfeas/polynomial.hpp"

namespace projfeas {

struct ProjectionTolerances {
  double feasibility = 1e-10;
  double optimality = 1e-10;
  int newton_max_iterations = 100;
  double penalty_mu_cap = 1e12;
  int penalty_inner_iterations = 200;
};

/// {x : <a, x> <= b}
struct HalfspaceHint {
  Vector a;
  double b = 0.0;
};

/// {x : ||x - center|| <= radius}
struct BallHint {
  Vector center;
  double radius = 1.0;
};

/// {x : x[y_axis]^degree <= x[x_axis]} for an even degree.
struct PowerEpigraphHint {
  int degree = 2;
  std::size_t x_axis = 0;
  std::size_t y_axis = 1;
};

using AnalyticHint = std::variant<std::monostate, HalfspaceHint, BallHint, PowerEpigraphHint>;

/// A basic semi-algebraic convex set {x : g_j(x) <= 0 for all j}.
///
/// Convexity of the g_j is trusted. When an analytic hint is given, the
/// constructor checks at 100 seeded points that the largest constraint value
/// agrees with the hinted closed form, and throws InputError otherwise.
class ConvexSet {
 public:
  ConvexSet(std::string name, std::vector<Polynomial> constraints, AnalyticHint hint = {});

  static ConvexSet halfspace(std::string name, Vector a, double b);
  static ConvexSet ball(std::string name, Vector center, double radius);
  static ConvexSet power_epigraph(std::string name, std::size_t dimension, int degree,
                                  std::size_t x_axis = 0, std::size_t y_axis = 1);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Polynomial>& constraints() const noexcept { return constraints_; }
  const AnalyticHint& hint() const noexcept { return hint_; }
  bool has_hint() const noexcept { return !std::holds_alternative<std::monostate>(hint_); }
  std::size_t dimension() const noexcept { return dimension_; }
  int max_degree() const noexcept { return max_degree_; }

  /// max_j [g_j(x)]_+
  double residual(const Vector& x) const;

  /// Same constraints, hint dropped. Forces the numerical projectors.
  ConvexSet without_hint() const;

 private:
  void validate_hint() const;

  std::string name_;
  std::vector<Polynomial> constraints_;
  AnalyticHint hint_;
  std::size_t dimension_ = 0;
  int max_degree_ = 0;
};

enum class ProjectionMethod { kIdentity, kHalfspace, kBall, kPowerEpigraph, kKktNewton, kPenalty };

const char* to_string(ProjectionMethod method);

struct ProjectionResult {
  Vector point;
  ProjectionMethod method = ProjectionMethod::kIdentity;
  /// One multiplier per constraint; empty for closed forms.
  std::vector<double> multipliers;
  double feasibility_residual = 0.0;
  /// || (x - y) - sum_j lambda_j grad g_j(y) ||, 0 for closed forms.
  double optimality_residual = 0.0;
  int iterations = 0;
};

/// Nearest point of `set` to `x`. Dispatch: closed form when a hint is present,
/// identity for feasible x, damped Newton on the KKT system when a single
/// smooth constraint is active, quadratic-penalty continuation otherwise.
/// Throws SolverError when no method reaches the tolerances and
/// NumericalError on non-finite values.
ProjectionResult project_detailed(const ConvexSet& set, const Vector& x,
                                  const ProjectionTolerances& tol = {});
Vector project(const ConvexSet& set, const Vector& x, const ProjectionTolerances& tol = {});
double distance(const ConvexSet& set, const Vector& x, const ProjectionTolerances& tol = {});

struct SingletonOracle {
  Vector point;
};

/// The segment [from, to].
struct SegmentOracle {
  Vector from;
  Vector to;
};

using IntersectionOracle = std::variant<std::monostate, SingletonOracle, SegmentOracle>;

/// Exact projection onto the intersection described by the oracle.
/// Throws CapabilityError when there is no oracle.
Vector oracle_projection(const IntersectionOracle& oracle, const Vector& x);
double oracle_distance(const IntersectionOracle& oracle, const Vector& x);

/// Sets C_1..C_m of R^n, optionally with an exact description of their
/// intersection.
class FeasibilityProblem {
 public:
  explicit FeasibilityProblem(std::vector<ConvexSet> sets, IntersectionOracle oracle = {});

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return sets_.size(); }
  const std::vector<ConvexSet>& sets() const noexcept { return sets_; }
  const ConvexSet& set(std::size_t i) const { return sets_.at(i); }
  /// Largest constraint degree over all sets.
  int max_degree() const noexcept { return max_degree_; }
  const IntersectionOracle& oracle() const noexcept { return oracle_; }
  bool has_oracle() const noexcept { return !std::holds_alternative<std::monostate>(oracle_); }

  /// Total number of constraints across sets.
  std::size_t constraint_count() const;
  /// Constraint `index` of the flattened list (set order, then constraint order).
  const Polynomial& constraint(std::size_t index) const;

  /// All constraints as one basic set, i.e. the intersection C.
  ConvexSet intersection_set() const;

  /// max over sets of residual(C_i, x)
  double max_residual(const Vector& x) const;

 private:
  std::vector<ConvexSet> sets_;
  IntersectionOracle oracle_;
  std::size_t dimension_ = 0;
  int max_degree_ = 0;
};

}  // namespace projfeas

#endif  // PROJFEAS_SETS_HPP
