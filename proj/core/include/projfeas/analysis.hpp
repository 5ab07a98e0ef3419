#ifndef PROJFEAS_ANALYSIS_HPP
#define PROJFEAS_ANALYSIS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "projfeas/engine.hpp"
#include "projfeas/rates.hpp"
#include "projfeas/sets.hpp"

namespace projfeas {

/// Error e_k observed at step k.
struct ErrorPoint {
  std::uint64_t k = 0;
  double error = 0.0;
};

/// Inclusive range of step indices used by a fit.
struct FitWindow {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

/// log e_k ~ log M + exponent * log k
struct PowerFit {
  double exponent = 0.0;
  double r2 = 0.0;
};

/// log e_k ~ log M + k log ratio
struct GeometricFit {
  double ratio = 0.0;
  double r2 = 0.0;
};

using EmpiricalModel = std::variant<PowerFit, GeometricFit>;

struct RateClassification {
  PowerFit power;
  GeometricFit geometric;
  EmpiricalModel chosen;
  std::size_t points = 0;
};

enum class Verdict { kConsistent, kInconsistent };

const char* to_string(Verdict verdict);

struct RateReport {
  RateClass theoretical;
  RateClassification empirical;
  FitWindow window;
  std::string errors_used;
  Verdict verdict = Verdict::kInconsistent;
};

/// Least squares of log e_k against log k over the window. Needs at least
/// 20 points, all with e_k > 0, and k >= 1.
PowerFit fit_power_rate(std::span<const ErrorPoint> errors, FitWindow window);

/// Least squares of log e_k against k; ratio = exp(slope).
GeometricFit fit_geometric_rate(std::span<const ErrorPoint> errors, FitWindow window);

/// Runs both fits and keeps the better r^2. Ties (|delta r^2| < 1e-6) go to
/// the geometric model.
RateClassification classify_rate(std::span<const ErrorPoint> errors, FitWindow window);

/// Whether the empirical decay is at least as fast as the guarantee: a
/// decaying geometric fit satisfies any guarantee; a power fit satisfies
/// PowerLaw(rho) when its exponent is <= -rho + 0.05 and never satisfies
/// the linear class.
Verdict judge(const RateClass& theory, const RateClassification& empirical);

RateReport compare_with_theory(std::span<const ErrorPoint> errors, FitWindow window, std::uint64_t n, std::uint64_t d,
                               std::string errors_used = "provided");

struct ErrorSeries {
  std::vector<ErrorPoint> points;
  std::string label;
  /// Below this level the errors are limit-estimation noise.
  double noise_floor = 0.0;
};

/// dist(x_k, C) from the oracle when the problem has one, otherwise
/// ||x_k - x_inf|| with x_inf from `limit`.
ErrorSeries trace_errors(const Trace& trace, const FeasibilityProblem& problem, const LimitEstimate& limit);

/// Last 80% of the recorded steps, cut where the error drops to 10x the noise
/// floor. Throws InputError when fewer than 20 points remain.
FitWindow default_window(const ErrorSeries& series);

/// Convenience: limit, error series, default or given window, comparison with
/// cyclic_rate(n, max_degree).
RateReport analyze_trace(const Trace& trace, const FeasibilityProblem& problem,
                         std::optional<FitWindow> window = std::nullopt, std::uint64_t refine_sweeps = 0);

struct ProbeOptions {
  double theta = 1.0;
  std::size_t samples = 200;
  double radius = 0.1;
  std::uint64_t seed = 0;
  ProjectionTolerances tol;
};

struct ErrorBoundReport {
  double theta = 0.0;
  double theoretical_tau = 0.0;
  double fitted_tau = 0.0;
  double fitted_log_c = 0.0;
  double fit_r2 = 0.0;
  std::size_t sample_count = 0;
  std::size_t used_samples = 0;
  /// Smallest c with dist^theta <= c (sum dist^theta(x, C_i))^tau at the
  /// theoretical tau over all samples.
  double best_constant = 0.0;
  /// Samples violating the inequality at the theoretical tau with c = 1.
  std::size_t violations_at_unit_constant = 0;
  double radius = 0.0;
  std::uint64_t seed = 0;
  Vector center;
};

/// Samples uniformly in the ball of `options.radius` around `center` (which
/// must lie in C) and fits theta*log dist(x, C) against
/// log sum_i dist^theta(x, C_i). dist(x, C) comes from the oracle, or from a
/// KKT-certified projection onto the intersection when there is none.
ErrorBoundReport error_bound_probe(const FeasibilityProblem& problem, const Vector& center,
                                   const ProbeOptions& options = {});

struct CurveProbeReport {
  double exponent = 0.0;  // slope of log dist(x, C) against log max residual
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Error-bound exponent along a parametrized curve: fits log dist(x(t), C)
/// against log max_j [g_j(x(t))]_+.
CurveProbeReport curve_probe(const FeasibilityProblem& problem, const std::function<Vector(double)>& curve,
                             std::span<const double> ts, const ProjectionTolerances& tol = {});

/// J0 = constraints with |g| <= 1e-8 at every sample of C, J1 = the rest.
/// Sample-based, so only as good as the samples.
IndexPartition estimate_index_partition(const FeasibilityProblem& problem, std::span<const Vector> samples);

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t n);

}  // namespace projfeas

#endif  // PROJFEAS_ANALYSIS_HPP
