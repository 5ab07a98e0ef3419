#include "projfeas/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "projfeas/error.hpp"

namespace projfeas {
namespace {

constexpr std::uint64_t kHintValidationSeed = 0x5eed'0001;
constexpr int kHintValidationSamples = 100;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double ipow(double base, int exponent) {
  double r = 1.0;
  for (int i = 0; i < exponent; ++i) r *= base;
  return r;
}

bool all_finite(const Vector& v) { return v.allFinite(); }

void check_dimension(const ConvexSet& set, const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != set.dimension()) {
    throw InputError("point has dimension " + std::to_string(x.size()) + ", set '" + set.name() +
                     "' lives in dimension " + std::to_string(set.dimension()));
  }
  if (!all_finite(x)) throw NumericalError("non-finite coordinate in point projected onto '" + set.name() + "'");
}

// Value of the hinted closed-form constraint at x.
double hint_value(const AnalyticHint& hint, const Vector& x) {
  return std::visit(Overloaded{
                        [](const std::monostate&) { return 0.0; },
                        [&](const HalfspaceHint& h) { return h.a.dot(x) - h.b; },
                        [&](const BallHint& h) { return (x - h.center).squaredNorm() - h.radius * h.radius; },
                        [&](const PowerEpigraphHint& h) {
                          return ipow(x[static_cast<Eigen::Index>(h.y_axis)], h.degree) -
                                 x[static_cast<Eigen::Index>(h.x_axis)];
                        },
                    },
                    hint);
}

// Root of t + d t^{d-1} (t^d - X) - Y on the side of Y, the stationarity
// condition for the nearest point (t^d, t) on the boundary of {y^d <= x}.
double power_epigraph_root(int d, double X, double Y) {
  const double base = X > 0.0 ? std::pow(X, 1.0 / d) : 0.0;
  double lo = Y > 0.0 ? base : Y;
  double hi = Y > 0.0 ? Y : -base;
  auto f = [&](double t) { return t + d * ipow(t, d - 1) * (ipow(t, d) - X) - Y; };
  auto df = [&](double t) {
    return 1.0 + d * (d - 1) * ipow(t, d - 2) * (ipow(t, d) - X) + d * d * ipow(t, 2 * d - 2);
  };
  double t = Y;
  for (int it = 0; it < 400; ++it) {
    const double ft = f(t);
    if (ft == 0.0) return t;
    if (ft > 0.0) hi = t; else lo = t;
    double next = t - ft / df(t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == t || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      return next;
    }
    t = next;
  }
  return t;
}

struct KktResiduals {
  double feasibility = 0.0;
  double optimality = 0.0;
  double complementarity = 0.0;
};

KktResiduals kkt_residuals(const ConvexSet& set, const Vector& x, const Vector& y,
                           const std::vector<double>& lambda) {
  KktResiduals r;
  Vector stationarity = x - y;
  for (std::size_t j = 0; j < set.constraints().size(); ++j) {
    const double g = set.constraints()[j].evaluate(y);
    r.feasibility = std::max(r.feasibility, g);
    if (lambda[j] != 0.0) {
      stationarity -= lambda[j] * set.constraints()[j].gradient(y);
      r.complementarity = std::max(r.complementarity, std::abs(lambda[j] * g));
    }
  }
  r.optimality = stationarity.norm();
  return r;
}

bool within(const KktResiduals& r, const ProjectionTolerances& tol) {
  return r.feasibility <= tol.feasibility && r.optimality <= tol.optimality &&
         r.complementarity <= tol.optimality;
}

// Multipliers for y as a projection of x: nonnegative least squares of
// (x - y) on the gradients of nearly active constraints, by subset
// enumeration (the active sets here are tiny).
std::vector<double> estimate_multipliers(const ConvexSet& set, const Vector& x, const Vector& y,
                                         const ProjectionTolerances& tol,
                                         const std::vector<double>& fallback) {
  const auto& cons = set.constraints();
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < cons.size(); ++j) {
    if (cons[j].evaluate(y) > -10.0 * tol.feasibility) active.push_back(j);
  }
  std::vector<double> lambda(cons.size(), 0.0);
  if (active.empty()) return lambda;
  if (active.size() > 12) return fallback;

  const Vector r = x - y;
  Matrix grads(r.size(), static_cast<Eigen::Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) grads.col(static_cast<Eigen::Index>(k)) = cons[active[k]].gradient(y);

  double best = r.norm();
  const std::size_t subsets = std::size_t{1} << active.size();
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    std::vector<Eigen::Index> cols;
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (mask & (std::size_t{1} << k)) cols.push_back(static_cast<Eigen::Index>(k));
    }
    Matrix sub(r.size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = grads.col(cols[c]);
    const Vector coef = sub.colPivHouseholderQr().solve(r);
    if (!coef.allFinite() || (coef.array() < 0.0).any()) continue;
    const double res = (r - sub * coef).norm();
    if (res < best) {
      best = res;
      std::fill(lambda.begin(), lambda.end(), 0.0);
      for (std::size_t c = 0; c < cols.size(); ++c) lambda[active[static_cast<std::size_t>(cols[c])]] = coef[static_cast<Eigen::Index>(c)];
    }
  }
  return lambda;
}

// Damped Newton on  y - x + lambda grad g(y) = 0,  g(y) = 0.
std::optional<ProjectionResult> kkt_newton(const ConvexSet& set, std::size_t j, const Vector& x,
                                           const ProjectionTolerances& tol) {
  const Polynomial& g = set.constraints()[j];
  const auto n = x.size();
  const Vector g0 = g.gradient(x);
  const double g0n = g0.squaredNorm();
  if (!(g0n > 0.0)) return std::nullopt;

  double lambda = g.evaluate(x) / g0n;
  Vector y = x - lambda * g0;

  auto residual_vec = [&](const Vector& yy, double ll, Vector& out) {
    out.resize(n + 1);
    out.head(n) = yy - x + ll * g.gradient(yy);
    out[n] = g.evaluate(yy);
  };

  Vector F;
  residual_vec(y, lambda, F);
  double merit = F.squaredNorm();
  int it = 0;
  bool converged = false;
  Matrix J(n + 1, n + 1);
  Vector Ftrial;
  for (; it < tol.newton_max_iterations; ++it) {
    if (!F.allFinite()) return std::nullopt;
    const bool tolerances_met = F.head(n).norm() <= tol.optimality && std::abs(F[n]) <= tol.feasibility &&
                                std::abs(lambda * F[n]) <= tol.optimality;
    const Vector grad = g.gradient(y);
    J.topLeftCorner(n, n) = Matrix::Identity(n, n) + lambda * g.hessian(y);
    J.topRightCorner(n, 1) = grad;
    J.bottomLeftCorner(1, n) = grad.transpose();
    J(n, n) = 0.0;
    const Vector step = J.fullPivLu().solve(-F);
    if (!step.allFinite()) break;

    double t = 1.0;
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      const Vector ytrial = y + t * step.head(n);
      const double ltrial = lambda + t * step[n];
      residual_vec(ytrial, ltrial, Ftrial);
      const double mtrial = Ftrial.squaredNorm();
      if (std::isfinite(mtrial) && mtrial < merit) {
        y = ytrial;
        lambda = ltrial;
        F = Ftrial;
        merit = mtrial;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    const bool tiny_step = t * step.head(n).norm() <= 1e-15 * (1.0 + y.norm());
    if (!accepted || tiny_step) {
      converged = tolerances_met || (F.head(n).norm() <= tol.optimality && std::abs(F[n]) <= tol.feasibility);
      break;
    }
  }
  if (!converged) {
    converged = F.head(n).norm() <= tol.optimality && std::abs(F[n]) <= tol.feasibility &&
                std::abs(lambda * F[n]) <= tol.optimality;
  }
  if (!converged || lambda < 0.0 || !y.allFinite()) return std::nullopt;

  // Every other constraint must be strictly inactive, otherwise the
  // single-constraint model is wrong.
  for (std::size_t k = 0; k < set.constraints().size(); ++k) {
    if (k == j) continue;
    if (set.constraints()[k].evaluate(y) > -10.0 * tol.feasibility) return std::nullopt;
  }

  ProjectionResult result;
  result.point = std::move(y);
  result.method = ProjectionMethod::kKktNewton;
  result.multipliers.assign(set.constraints().size(), 0.0);
  result.multipliers[j] = lambda;
  const auto r = kkt_residuals(set, x, result.point, result.multipliers);
  result.feasibility_residual = std::max(0.0, r.feasibility);
  result.optimality_residual = r.optimality;
  result.iterations = it;
  if (!within(r, tol)) return std::nullopt;
  return result;
}

double penalty_objective(const ConvexSet& set, const Vector& x, const Vector& y, double mu) {
  double v = (y - x).squaredNorm();
  for (const auto& g : set.constraints()) {
    const double gv = g.evaluate(y);
    if (gv > 0.0) v += mu * gv * gv;
  }
  return v;
}

// Minimizes ||y - x||^2 + mu sum [g_j(y)]_+^2 from `y` in place. Newton
// direction when it descends, steepest descent otherwise, Armijo backtracking
// (c1 = 1e-4, halving, initial step 1).
int penalty_inner(const ConvexSet& set, const Vector& x, Vector& y, double mu,
                  const ProjectionTolerances& tol) {
  const auto n = y.size();
  int it = 0;
  double phi = penalty_objective(set, x, y, mu);
  for (; it < tol.penalty_inner_iterations; ++it) {
    Vector grad = 2.0 * (y - x);
    Matrix H = 2.0 * Matrix::Identity(n, n);
    for (const auto& g : set.constraints()) {
      const double gv = g.evaluate(y);
      if (gv <= 0.0) continue;
      const Vector gg = g.gradient(y);
      grad += 2.0 * mu * gv * gg;
      H += 2.0 * mu * (gg * gg.transpose() + gv * g.hessian(y));
    }
    if (!grad.allFinite()) throw NumericalError("non-finite gradient in penalty projection onto '" + set.name() + "'");
    Vector dir = H.ldlt().solve(-grad);
    double slope = grad.dot(dir);
    if (!dir.allFinite() || !(slope < 0.0)) {
      dir = -grad;
      slope = -grad.squaredNorm();
    }
    if (slope == 0.0) break;
    double t = 1.0;
    bool accepted = false;
    Vector trial;
    for (int half = 0; half < 60; ++half) {
      trial = y + t * dir;
      const double phit = penalty_objective(set, x, trial, mu);
      if (phit <= phi + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    const double moved = t * dir.norm();
    y = trial;
    phi = penalty_objective(set, x, y, mu);
    if (moved <= 1e-15 * (1.0 + y.norm())) break;
  }
  return it;
}

ProjectionResult penalty_projection(const ConvexSet& set, const Vector& x, const ProjectionTolerances& tol) {
  Vector y = x;
  Vector best = x;
  KktResiduals best_r{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0.0};
  int total_iterations = 0;
  for (double mu = 1.0; mu <= tol.penalty_mu_cap; mu *= 2.0) {
    total_iterations += penalty_inner(set, x, y, mu, tol);
    if (!y.allFinite()) throw NumericalError("penalty projection onto '" + set.name() + "' diverged");
    std::vector<double> fallback(set.constraints().size(), 0.0);
    for (std::size_t j = 0; j < fallback.size(); ++j) {
      fallback[j] = mu * std::max(0.0, set.constraints()[j].evaluate(y));
    }
    const auto lambda = estimate_multipliers(set, x, y, tol, fallback);
    const auto r = kkt_residuals(set, x, y, lambda);
    if (r.feasibility < best_r.feasibility) {
      best = y;
      best_r = r;
    }
    if (within(r, tol)) {
      ProjectionResult result;
      result.point = y;
      result.method = ProjectionMethod::kPenalty;
      result.multipliers = lambda;
      result.feasibility_residual = std::max(0.0, r.feasibility);
      result.optimality_residual = r.optimality;
      result.iterations = total_iterations;
      return result;
    }
  }
  throw SolverError("penalty projection onto '" + set.name() + "' did not reach tolerances", best,
                    std::max(0.0, best_r.feasibility), best_r.optimality);
}

}  // namespace

ConvexSet::ConvexSet(std::string name, std::vector<Polynomial> constraints, AnalyticHint hint)
    : name_(std::move(name)), constraints_(std::move(constraints)), hint_(std::move(hint)) {
  if (constraints_.empty()) throw InputError("set '" + name_ + "' has no constraints");
  dimension_ = constraints_.front().dimension();
  for (const auto& g : constraints_) {
    if (g.dimension() != dimension_) throw InputError("constraints of set '" + name_ + "' disagree on dimension");
    max_degree_ = std::max(max_degree_, g.degree());
  }
  validate_hint();
}

void ConvexSet::validate_hint() const {
  const auto n = static_cast<Eigen::Index>(dimension_);
  Vector lo = Vector::Constant(n, -2.0);
  Vector hi = Vector::Constant(n, 2.0);
  const bool ok = std::visit(
      Overloaded{
          [&](const std::monostate&) { return false; },
          [&](const HalfspaceHint& h) {
            if (h.a.size() != n) throw InputError("halfspace hint of '" + name_ + "' has wrong dimension");
            if (!(h.a.squaredNorm() > 0.0) || !std::isfinite(h.b)) {
              throw InputError("halfspace hint of '" + name_ + "' is degenerate");
            }
            return true;
          },
          [&](const BallHint& h) {
            if (h.center.size() != n) throw InputError("ball hint of '" + name_ + "' has wrong dimension");
            if (!(h.radius > 0.0) || !std::isfinite(h.radius)) throw InputError("ball radius must be positive");
            lo = h.center.array() - 2.0 * h.radius;
            hi = h.center.array() + 2.0 * h.radius;
            return true;
          },
          [&](const PowerEpigraphHint& h) {
            if (h.degree < 2 || h.degree % 2 != 0) throw InputError("power epigraph degree must be even and >= 2");
            if (h.x_axis >= dimension_ || h.y_axis >= dimension_ || h.x_axis == h.y_axis) {
              throw InputError("power epigraph axes of '" + name_ + "' are invalid");
            }
            return true;
          },
      },
      hint_);
  if (!ok) return;

  std::mt19937_64 rng(kHintValidationSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector x(n);
  for (int s = 0; s < kHintValidationSamples; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * unit(rng);
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& g : constraints_) worst = std::max(worst, g.evaluate(x));
    const double expected = hint_value(hint_, x);
    if (std::abs(worst - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw InputError("constraints of set '" + name_ + "' do not match its analytic hint");
    }
  }
}

ConvexSet ConvexSet::halfspace(std::string name, Vector a, double b) {
  const auto n = static_cast<std::size_t>(a.size());
  std::vector<Monomial> terms;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> e(n, 0);
    e[i] = 1;
    terms.push_back({std::move(e), a[static_cast<Eigen::Index>(i)]});
  }
  terms.push_back({std::vector<int>(n, 0), -b});
  Polynomial g(n, std::move(terms));
  return ConvexSet(std::move(name), {std::move(g)}, HalfspaceHint{std::move(a), b});
}

ConvexSet ConvexSet::ball(std::string name, Vector center, double radius) {
  const auto n = static_cast<std::size_t>(center.size());
  std::vector<Monomial> terms;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> sq(n, 0), lin(n, 0);
    sq[i] = 2;
    lin[i] = 1;
    terms.push_back({std::move(sq), 1.0});
    terms.push_back({std::move(lin), -2.0 * center[static_cast<Eigen::Index>(i)]});
  }
  terms.push_back({std::vector<int>(n, 0), center.squaredNorm() - radius * radius});
  Polynomial g(n, std::move(terms));
  return ConvexSet(std::move(name), {std::move(g)}, BallHint{std::move(center), radius});
}

ConvexSet ConvexSet::power_epigraph(std::string name, std::size_t dimension, int degree, std::size_t x_axis,
                                    std::size_t y_axis) {
  if (x_axis >= dimension || y_axis >= dimension) throw InputError("power epigraph axis out of range");
  std::vector<int> ey(dimension, 0), ex(dimension, 0);
  ey[y_axis] = degree;
  ex[x_axis] = 1;
  Polynomial g(dimension, {Monomial{std::move(ey), 1.0}, Monomial{std::move(ex), -1.0}});
  return ConvexSet(std::move(name), {std::move(g)}, PowerEpigraphHint{degree, x_axis, y_axis});
}

double ConvexSet::residual(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dimension_) {
    throw InputError("point has dimension " + std::to_string(x.size()) + ", set '" + name_ +
                     "' lives in dimension " + std::to_string(dimension_));
  }
  double r = 0.0;
  for (const auto& g : constraints_) r = std::max(r, g.evaluate(x));
  return r;
}

ConvexSet ConvexSet::without_hint() const { return ConvexSet(name_, constraints_, {}); }

const char* to_string(ProjectionMethod method) {
  switch (method) {
    case ProjectionMethod::kIdentity: return "identity";
    case ProjectionMethod::kHalfspace: return "halfspace";
    case ProjectionMethod::kBall: return "ball";
    case ProjectionMethod::kPowerEpigraph: return "power_epigraph";
    case ProjectionMethod::kKktNewton: return "kkt_newton";
    case ProjectionMethod::kPenalty: return "penalty";
  }
  return "unknown";
}

ProjectionResult project_detailed(const ConvexSet& set, const Vector& x, const ProjectionTolerances& tol) {
  check_dimension(set, x);
  if (!(tol.feasibility > 0.0) || !(tol.optimality > 0.0)) throw InputError("projection tolerances must be positive");

  ProjectionResult result;
  result.point = x;
  switch (set.hint().index()) {
    case 1: {
      const auto& h = std::get<HalfspaceHint>(set.hint());
      const double v = h.a.dot(x) - h.b;
      if (v > 0.0) {
        result.point = x - (v / h.a.squaredNorm()) * h.a;
        result.method = ProjectionMethod::kHalfspace;
      }
      return result;
    }
    case 2: {
      const auto& h = std::get<BallHint>(set.hint());
      const Vector diff = x - h.center;
      const double norm = diff.norm();
      if (norm > h.radius) {
        result.point = h.center + (h.radius / norm) * diff;
        result.method = ProjectionMethod::kBall;
      }
      return result;
    }
    case 3: {
      const auto& h = std::get<PowerEpigraphHint>(set.hint());
      const auto xi = static_cast<Eigen::Index>(h.x_axis);
      const auto yi = static_cast<Eigen::Index>(h.y_axis);
      if (ipow(x[yi], h.degree) > x[xi]) {
        const double t = power_epigraph_root(h.degree, x[xi], x[yi]);
        result.point[xi] = ipow(t, h.degree);
        result.point[yi] = t;
        result.method = ProjectionMethod::kPowerEpigraph;
      }
      return result;
    }
    default:
      break;
  }

  const auto& cons = set.constraints();
  std::size_t worst = 0;
  double worst_value = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < cons.size(); ++j) {
    const double v = cons[j].evaluate(x);
    if (!std::isfinite(v)) throw NumericalError("constraint of '" + set.name() + "' is not finite at the query point");
    if (v > worst_value) {
      worst_value = v;
      worst = j;
    }
  }
  if (worst_value <= 0.0) return result;

  if (auto newton = kkt_newton(set, worst, x, tol)) return *std::move(newton);
  return penalty_projection(set, x, tol);
}

Vector project(const ConvexSet& set, const Vector& x, const ProjectionTolerances& tol) {
  return project_detailed(set, x, tol).point;
}

double distance(const ConvexSet& set, const Vector& x, const ProjectionTolerances& tol) {
  return (x - project(set, x, tol)).norm();
}

Vector oracle_projection(const IntersectionOracle& oracle, const Vector& x) {
  return std::visit(Overloaded{
                        [](const std::monostate&) -> Vector {
                          throw CapabilityError("problem has no intersection oracle");
                        },
                        [&](const SingletonOracle& o) -> Vector {
                          if (o.point.size() != x.size()) throw InputError("oracle dimension mismatch");
                          return o.point;
                        },
                        [&](const SegmentOracle& o) -> Vector {
                          if (o.from.size() != x.size() || o.to.size() != x.size()) {
                            throw InputError("oracle dimension mismatch");
                          }
                          const Vector dir = o.to - o.from;
                          const double len2 = dir.squaredNorm();
                          if (len2 == 0.0) return o.from;
                          const double t = std::clamp(dir.dot(x - o.from) / len2, 0.0, 1.0);
                          return o.from + t * dir;
                        },
                    },
                    oracle);
}

double oracle_distance(const IntersectionOracle& oracle, const Vector& x) {
  return (x - oracle_projection(oracle, x)).norm();
}

FeasibilityProblem::FeasibilityProblem(std::vector<ConvexSet> sets, IntersectionOracle oracle)
    : sets_(std::move(sets)), oracle_(std::move(oracle)) {
  if (sets_.empty()) throw InputError("feasibility problem needs at least one set");
  dimension_ = sets_.front().dimension();
  for (const auto& s : sets_) {
    if (s.dimension() != dimension_) throw InputError("sets of a feasibility problem disagree on dimension");
    max_degree_ = std::max(max_degree_, s.max_degree());
  }
  const auto n = static_cast<Eigen::Index>(dimension_);
  std::visit(Overloaded{
                 [](const std::monostate&) {},
                 [&](const SingletonOracle& o) {
                   if (o.point.size() != n) throw InputError("singleton oracle has wrong dimension");
                 },
                 [&](const SegmentOracle& o) {
                   if (o.from.size() != n || o.to.size() != n) throw InputError("segment oracle has wrong dimension");
                 },
             },
             oracle_);
}

std::size_t FeasibilityProblem::constraint_count() const {
  std::size_t total = 0;
  for (const auto& s : sets_) total += s.constraints().size();
  return total;
}

const Polynomial& FeasibilityProblem::constraint(std::size_t index) const {
  for (const auto& s : sets_) {
    if (index < s.constraints().size()) return s.constraints()[index];
    index -= s.constraints().size();
  }
  throw InputError("constraint index out of range");
}

ConvexSet FeasibilityProblem::intersection_set() const {
  std::vector<Polynomial> all;
  for (const auto& s : sets_) all.insert(all.end(), s.constraints().begin(), s.constraints().end());
  return ConvexSet("intersection", std::move(all));
}

double FeasibilityProblem::max_residual(const Vector& x) const {
  double r = 0.0;
  for (const auto& s : sets_) r = std::max(r, s.residual(x));
  return r;
}

}  // namespace projfeas
