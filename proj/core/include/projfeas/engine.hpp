#ifndef PROJFEAS_ENGINE_HPP
#define PROJFEAS_ENGINE_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "projfeas/error.hpp"
#include "projfeas/sets.hpp"

namespace projfeas {

/// One recorded iterate. Row k holds x_k; for k >= 1 it also describes the
/// projection x_k = P_{set_index} x_{k-1}. set_index is 1-based and 0 marks a
/// starting point.
struct TraceRow {
  std::uint64_t k = 0;
  std::size_t set_index = 0;
  double residual_before = 0.0;  // residual of x_{k-1} w.r.t. the target set
  double step_norm = 0.0;        // ||x_k - x_{k-1}||
  Vector x;
};

/// Once more than `cap` rows are recorded, only the first `full_prefix`
/// steps plus checkpoints k = round(growth^j) are kept.
struct RecordingPolicy {
  std::size_t cap = 1'000'000;
  std::uint64_t full_prefix = 10'000;
  double growth = 1.05;
};

struct LimitEstimate {
  enum class Source { kOracle, kRefined };

  Vector point;
  /// ||point - x_inf|| <= radius; a surrogate when `heuristic` is set.
  double radius = 0.0;
  bool heuristic = false;
  Source source = Source::kRefined;
};

/// Iterate history of a projection run.
class Trace {
 public:
  explicit Trace(RecordingPolicy policy = {});

  /// Appends a row; k must be strictly increasing.
  void record(TraceRow row);
  /// Makes sure the most recent row is kept even if thinning skipped it.
  void finish();

  const std::vector<TraceRow>& rows() const noexcept { return rows_; }
  bool empty() const noexcept { return rows_.empty() && !pending_; }
  bool thinned() const noexcept { return thinned_; }
  /// Largest step index seen, recorded or not.
  std::uint64_t last_step() const noexcept { return last_step_; }
  /// Most recent iterate, recorded or not.
  const Vector& last_point() const;
  double max_residual_before() const noexcept { return max_residual_before_; }
  double total_path_length() const noexcept { return total_path_length_; }

  std::optional<LimitEstimate> limit;

 private:
  void thin();
  bool keep_when_thinned(std::uint64_t k);

  RecordingPolicy policy_;
  std::vector<TraceRow> rows_;
  std::optional<TraceRow> pending_;
  bool thinned_ = false;
  std::uint64_t last_step_ = 0;
  double max_residual_before_ = 0.0;
  double total_path_length_ = 0.0;
  // Checkpoint generator state for thinned recording.
  double checkpoint_power_ = 1.0;
  std::uint64_t next_checkpoint_ = 1;
};

/// A projection failed part-way through a run (solver budget exhausted or a
/// non-finite value). Holds the trace recorded up to the failing step.
class RunError : public Error {
 public:
  RunError(const std::string& what, std::uint64_t step, std::shared_ptr<const Trace> partial)
      : Error(what), step_(step), partial_(std::move(partial)) {}

  std::uint64_t step() const noexcept { return step_; }
  const Trace& partial_trace() const noexcept { return *partial_; }

 private:
  std::uint64_t step_;
  std::shared_ptr<const Trace> partial_;
};

struct CyclicOptions {
  std::uint64_t max_sweeps = 1000;
  /// Stop once a full sweep moves the iterate less than this in total; 0 runs
  /// every sweep.
  double stop_tol = 1e-12;
  ProjectionTolerances tol;
  RecordingPolicy recording;
};

/// x_{k+1} = P_{(k mod m)+1} x_k, every projection recorded.
Trace cyclic_project(const FeasibilityProblem& problem, const Vector& x0, const CyclicOptions& options = {});

struct AlternatingOptions {
  std::uint64_t max_iterations = 100'000;
  /// Stop once ||a_{k+1} - a_k|| + ||b_{k+1} - b_k|| falls below this; 0 runs
  /// every iteration.
  double stop_tol = 1e-12;
  ProjectionTolerances tol;
  RecordingPolicy recording;
};

struct AlternatingResult {
  /// b_0, a_1, b_1, a_2, ... as one sequence (set index 1 = A, 2 = B).
  Trace path;
  /// a_1, a_2, ...; step norms are ||a_k - a_{k-1}||.
  Trace a_trace;
  /// b_0, b_1, ...; step norms are ||b_k - b_{k-1}||.
  Trace b_trace;
  /// b_K - a_K at the last iteration.
  Vector gap_vector;
  Vector a_limit;
  Vector b_limit;
  std::uint64_t iterations = 0;
};

/// a_{k+1} = P_A b_k, b_{k+1} = P_B a_{k+1}. A and B may be disjoint.
AlternatingResult alternating_project(const ConvexSet& a, const ConvexSet& b, const Vector& b0,
                                      const AlternatingOptions& options = {});

/// Limit of a cyclic trace. With a singleton oracle the answer is exact.
/// Otherwise the run is continued for `refine_sweeps` sweeps and the radius is
/// twice the distance to C (segment oracle) or twice the summed distances to
/// the C_i (no oracle, flagged heuristic).
LimitEstimate estimate_limit(const Trace& trace, const FeasibilityProblem& problem, std::uint64_t refine_sweeps,
                             const ProjectionTolerances& tol = {});

struct FejerViolation {
  std::uint64_t k = 0;  // index of the later iterate
  std::size_t witness = 0;
  double increase = 0.0;
};

struct FejerReport {
  std::vector<FejerViolation> violations;
  std::size_t checked_pairs = 0;
  bool thinned = false;
};

/// ||x_{k'} - a|| <= ||x_k - a|| + 1e-9 between consecutive recorded sweep
/// boundaries k < k' (multiples of m). Throws InputError for witnesses
/// outside C (residual > 1e-8).
FejerReport check_fejer(const Trace& trace, const FeasibilityProblem& problem, const std::vector<Vector>& witnesses);

struct DescentReport {
  double min_slack = 0.0;
  std::vector<std::uint64_t> violations;  // step indices k+1 with slack < -1e-8
  std::size_t checked_steps = 0;
  bool thinned = false;
};

/// dist^2(x_k, C) - dist^2(x_{k+1}, C) >= dist^2(x_k, C_{alpha_k}) at every pair
/// of consecutive recorded steps, with dist(x_k, C_{alpha_k}) = step norm.
/// Throws CapabilityError without an intersection oracle.
DescentReport check_descent_inequality(const Trace& trace, const FeasibilityProblem& problem);

/// Whether ||(b_k - a_k) - v|| is non-increasing (slack 1e-8) over the
/// iterations where both sequences were recorded.
bool gap_residual_nonincreasing(const AlternatingResult& result, double slack = 1e-8);

}  // namespace projfeas

#endif  // PROJFEAS_ENGINE_HPP
