#include "projfeas/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "projfeas/error.hpp"

namespace projfeas {
namespace {

constexpr std::size_t kMinFitPoints = 20;

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares y ~ intercept + slope x with centered sums.
LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw InputError("fit needs at least two distinct abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

std::vector<ErrorPoint> in_window(std::span<const ErrorPoint> errors, FitWindow window) {
  if (window.lo > window.hi) throw InputError("fit window has lo > hi");
  std::vector<ErrorPoint> selected;
  for (const auto& p : errors) {
    if (p.k < window.lo || p.k > window.hi) continue;
    if (!(p.error > 0.0) || !std::isfinite(p.error)) {
      throw InputError("error at k=" + std::to_string(p.k) + " is not positive");
    }
    selected.push_back(p);
  }
  if (selected.size() < kMinFitPoints) {
    throw InputError("fit window [" + std::to_string(window.lo) + ", " + std::to_string(window.hi) + "] holds " +
                     std::to_string(selected.size()) + " points, need at least " + std::to_string(kMinFitPoints));
  }
  return selected;
}

double intersection_distance(const FeasibilityProblem& problem, const ConvexSet& intersection, const Vector& x,
                             const ProjectionTolerances& tol) {
  if (problem.has_oracle()) return oracle_distance(problem.oracle(), x);
  try {
    return distance(intersection, x, tol);
  } catch (const SolverError& e) {
    throw CapabilityError(std::string("cannot certify dist(x, C): ") + e.what());
  }
}

}  // namespace

const char* to_string(Verdict verdict) {
  return verdict == Verdict::kConsistent ? "CONSISTENT" : "INCONSISTENT";
}

PowerFit fit_power_rate(std::span<const ErrorPoint> errors, FitWindow window) {
  const auto pts = in_window(errors, window);
  std::vector<double> xs, ys;
  for (const auto& p : pts) {
    if (p.k == 0) throw InputError("power fit needs k >= 1");
    xs.push_back(std::log(static_cast<double>(p.k)));
    ys.push_back(std::log(p.error));
  }
  const auto fit = least_squares(xs, ys);
  return {fit.slope, fit.r2};
}

GeometricFit fit_geometric_rate(std::span<const ErrorPoint> errors, FitWindow window) {
  const auto pts = in_window(errors, window);
  std::vector<double> xs, ys;
  for (const auto& p : pts) {
    xs.push_back(static_cast<double>(p.k));
    ys.push_back(std::log(p.error));
  }
  const auto fit = least_squares(xs, ys);
  return {std::exp(fit.slope), fit.r2};
}

RateClassification classify_rate(std::span<const ErrorPoint> errors, FitWindow window) {
  RateClassification c;
  c.power = fit_power_rate(errors, window);
  c.geometric = fit_geometric_rate(errors, window);
  c.points = in_window(errors, window).size();
  if (c.power.r2 > c.geometric.r2 + 1e-6) {
    c.chosen = c.power;
  } else {
    c.chosen = c.geometric;
  }
  return c;
}

Verdict judge(const RateClass& theory, const RateClassification& empirical) {
  if (const auto* g = std::get_if<GeometricFit>(&empirical.chosen)) {
    return g->ratio < 1.0 ? Verdict::kConsistent : Verdict::kInconsistent;
  }
  const auto& p = std::get<PowerFit>(empirical.chosen);
  if (std::holds_alternative<LinearRate>(theory)) return Verdict::kInconsistent;
  const double rho = std::get<PowerLawRate>(theory).rho.value();
  return p.exponent <= -rho + 0.05 ? Verdict::kConsistent : Verdict::kInconsistent;
}

RateReport compare_with_theory(std::span<const ErrorPoint> errors, FitWindow window, std::uint64_t n, std::uint64_t d,
                               std::string errors_used) {
  RateReport report;
  report.theoretical = cyclic_rate(n, d);
  report.empirical = classify_rate(errors, window);
  report.window = window;
  report.errors_used = std::move(errors_used);
  report.verdict = judge(report.theoretical, report.empirical);
  return report;
}

ErrorSeries trace_errors(const Trace& trace, const FeasibilityProblem& problem, const LimitEstimate& limit) {
  ErrorSeries series;
  if (problem.has_oracle()) {
    series.label = "dist_to_oracle";
    for (const auto& row : trace.rows()) series.points.push_back({row.k, oracle_distance(problem.oracle(), row.x)});
    series.noise_floor = 0.0;
  } else {
    series.label = "norm_to_limit_estimate";
    for (const auto& row : trace.rows()) series.points.push_back({row.k, (row.x - limit.point).norm()});
    series.noise_floor = limit.radius;
  }
  return series;
}

FitWindow default_window(const ErrorSeries& series) {
  const auto& pts = series.points;
  if (pts.empty()) throw InputError("no errors to fit");
  const std::size_t first = pts.size() / 5;
  std::size_t last = first;
  bool any = false;
  for (std::size_t i = first; i < pts.size(); ++i) {
    if (pts[i].k == 0) continue;
    if (pts[i].error > 10.0 * series.noise_floor && pts[i].error > 0.0) {
      last = i;
      any = true;
    }
  }
  if (!any) throw InputError("every error in the default window is below the noise floor");
  std::size_t lo = first;
  while (lo < pts.size() && pts[lo].k == 0) ++lo;
  if (lo > last || last - lo + 1 < kMinFitPoints) {
    throw InputError("default fit window holds fewer than " + std::to_string(kMinFitPoints) + " points");
  }
  return {pts[lo].k, pts[last].k};
}

RateReport analyze_trace(const Trace& trace, const FeasibilityProblem& problem, std::optional<FitWindow> window,
                         std::uint64_t refine_sweeps) {
  const LimitEstimate limit = trace.limit ? *trace.limit : estimate_limit(trace, problem, refine_sweeps);
  const ErrorSeries series = trace_errors(trace, problem, limit);
  const FitWindow w = window ? *window : default_window(series);
  return compare_with_theory(series.points, w, problem.dimension(), static_cast<std::uint64_t>(problem.max_degree()),
                             series.label);
}

ErrorBoundReport error_bound_probe(const FeasibilityProblem& problem, const Vector& center,
                                   const ProbeOptions& options) {
  const auto n = static_cast<Eigen::Index>(problem.dimension());
  if (center.size() != n) throw InputError("probe center has the wrong dimension");
  if (!center.allFinite()) throw InputError("probe center has non-finite coordinates");
  if (problem.max_residual(center) > 1e-8) throw InputError("probe center is not in the intersection");
  if (!(options.theta > 0.0)) throw InputError("theta must be positive");
  if (!(options.radius > 0.0)) throw InputError("probe radius must be positive");
  if (options.samples < 50) throw InputError("error-bound probe needs at least 50 samples");

  ErrorBoundReport report;
  report.theta = options.theta;
  report.theoretical_tau =
      problem.size() == 1
          ? 1.0
          : holder_exponent_tau(problem.dimension(), static_cast<std::uint64_t>(std::max(1, problem.max_degree())));
  report.sample_count = options.samples;
  report.radius = options.radius;
  report.seed = options.seed;
  report.center = center;

  const ConvexSet intersection = problem.intersection_set();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> xs, ys;
  Vector offset(n);
  for (std::size_t s = 0; s < options.samples; ++s) {
    do {
      for (Eigen::Index i = 0; i < n; ++i) offset[i] = unit(rng);
    } while (offset.squaredNorm() > 1.0);
    const Vector x = center + options.radius * offset;

    const double dist_c = intersection_distance(problem, intersection, x, options.tol);
    double sum = 0.0;
    if (problem.size() == 1) {
      sum = std::pow(dist_c, options.theta);
    } else {
      for (const auto& set : problem.sets()) sum += std::pow(distance(set, x, options.tol), options.theta);
    }
    const double lhs = std::pow(dist_c, options.theta);
    if (sum > 0.0) {
      report.best_constant = std::max(report.best_constant, lhs / std::pow(sum, report.theoretical_tau));
      if (lhs > std::pow(sum, report.theoretical_tau)) ++report.violations_at_unit_constant;
    }
    if (dist_c > 0.0 && sum > 0.0) {
      xs.push_back(std::log(sum));
      ys.push_back(options.theta * std::log(dist_c));
    }
  }
  report.used_samples = xs.size();
  if (xs.size() < 2) throw CapabilityError("fewer than two probe samples fell outside the intersection");
  const auto fit = least_squares(xs, ys);
  report.fitted_tau = fit.slope;
  report.fitted_log_c = fit.intercept;
  report.fit_r2 = fit.r2;
  return report;
}

CurveProbeReport curve_probe(const FeasibilityProblem& problem, const std::function<Vector(double)>& curve,
                             std::span<const double> ts, const ProjectionTolerances& tol) {
  const ConvexSet intersection = problem.intersection_set();
  std::vector<double> xs, ys;
  for (double t : ts) {
    const Vector x = curve(t);
    double residual = 0.0;
    for (std::size_t j = 0; j < problem.constraint_count(); ++j) {
      residual = std::max(residual, problem.constraint(j).evaluate(x));
    }
    const double dist_c = intersection_distance(problem, intersection, x, tol);
    if (residual > 0.0 && dist_c > 0.0) {
      xs.push_back(std::log(residual));
      ys.push_back(std::log(dist_c));
    }
  }
  if (xs.size() < 2) throw InputError("curve probe needs at least two points outside the intersection");
  const auto fit = least_squares(xs, ys);
  return {fit.slope, fit.r2, xs.size()};
}

IndexPartition estimate_index_partition(const FeasibilityProblem& problem, std::span<const Vector> samples) {
  if (samples.empty()) throw InputError("index partition needs at least one sample");
  for (const auto& s : samples) {
    if (static_cast<std::size_t>(s.size()) != problem.dimension()) throw InputError("sample has wrong dimension");
    if (problem.max_residual(s) > 1e-8) throw InputError("index-partition sample is not in the intersection");
  }
  IndexPartition partition;
  for (std::size_t j = 0; j < problem.constraint_count(); ++j) {
    const auto& g = problem.constraint(j);
    const bool vanishes =
        std::all_of(samples.begin(), samples.end(), [&](const Vector& s) { return std::abs(g.evaluate(s)) <= 1e-8; });
    (vanishes ? partition.j0 : partition.j1).push_back(j);
  }
  return partition;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n < 2) throw InputError("log_spaced needs 0 < lo <= hi and n >= 2");
  std::vector<double> out(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

}  // namespace projfeas
