#include "projfeas/engine.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace projfeas {
namespace {

void require_point(const Vector& x, std::size_t dimension, const char* what) {
  if (static_cast<std::size_t>(x.size()) != dimension) {
    throw InputError(std::string(what) + " has dimension " + std::to_string(x.size()) + ", expected " +
                     std::to_string(dimension));
  }
  if (!x.allFinite()) throw InputError(std::string(what) + " has non-finite coordinates");
}

// Projects `x` onto `set` as step `step` of a run and checks the result is
// feasible. Failures are rethrown as RunError carrying `trace`.
Vector checked_projection(const ConvexSet& set, const Vector& x, const ProjectionTolerances& tol,
                          std::uint64_t step, Trace& trace) {
  auto fail = [&](const std::string& why) -> RunError {
    trace.finish();
    return RunError("step " + std::to_string(step) + " (projection onto '" + set.name() + "'): " + why, step,
                    std::make_shared<const Trace>(std::move(trace)));
  };
  Vector y;
  try {
    y = project(set, x, tol);
  } catch (const SolverError& e) {
    throw fail(e.what());
  } catch (const NumericalError& e) {
    throw fail(e.what());
  }
  const double r = set.residual(y);
  if (!(r <= tol.feasibility)) throw fail("projected point violates the set by " + std::to_string(r));
  return y;
}

}  // namespace

Trace::Trace(RecordingPolicy policy) : policy_(policy) {
  if (policy_.cap == 0) throw InputError("trace cap must be positive");
  if (!(policy_.growth > 1.0)) throw InputError("checkpoint growth factor must exceed 1");
}

bool Trace::keep_when_thinned(std::uint64_t k) {
  if (k <= policy_.full_prefix) return true;
  while (next_checkpoint_ < k) {
    checkpoint_power_ *= policy_.growth;
    next_checkpoint_ = static_cast<std::uint64_t>(std::llround(checkpoint_power_));
  }
  return next_checkpoint_ == k;
}

void Trace::thin() {
  std::vector<TraceRow> kept;
  const std::uint64_t newest = rows_.back().k;
  for (auto& row : rows_) {
    if (keep_when_thinned(row.k)) {
      kept.push_back(std::move(row));
    } else if (row.k == newest) {
      pending_ = std::move(row);
    }
  }
  rows_ = std::move(kept);
  thinned_ = true;
}

void Trace::record(TraceRow row) {
  const bool has_previous = !rows_.empty() || pending_;
  if (has_previous && row.k <= last_step_) throw InputError("trace steps must be strictly increasing");
  last_step_ = row.k;
  max_residual_before_ = std::max(max_residual_before_, row.residual_before);
  total_path_length_ += row.step_norm;
  if (!thinned_) {
    rows_.push_back(std::move(row));
    if (rows_.size() > policy_.cap) thin();
    return;
  }
  if (keep_when_thinned(row.k)) {
    rows_.push_back(std::move(row));
    pending_.reset();
  } else {
    pending_ = std::move(row);
  }
}

void Trace::finish() {
  if (pending_) {
    rows_.push_back(std::move(*pending_));
    pending_.reset();
  }
}

const Vector& Trace::last_point() const {
  if (pending_) return pending_->x;
  if (rows_.empty()) throw InputError("trace is empty");
  return rows_.back().x;
}

Trace cyclic_project(const FeasibilityProblem& problem, const Vector& x0, const CyclicOptions& options) {
  require_point(x0, problem.dimension(), "starting point");
  if (!(options.stop_tol >= 0.0)) throw InputError("stop tolerance must be non-negative");

  Trace trace(options.recording);
  trace.record({0, 0, 0.0, 0.0, x0});
  Vector x = x0;
  std::uint64_t k = 0;
  const std::size_t m = problem.size();
  for (std::uint64_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
    double moved = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const ConvexSet& set = problem.set(i);
      const double before = set.residual(x);
      Vector y = checked_projection(set, x, options.tol, k + 1, trace);
      const double step = (y - x).norm();
      ++k;
      trace.record({k, i + 1, before, step, y});
      moved += step;
      x = std::move(y);
    }
    if (moved < options.stop_tol) break;
  }
  trace.finish();
  return trace;
}

AlternatingResult alternating_project(const ConvexSet& a, const ConvexSet& b, const Vector& b0,
                                      const AlternatingOptions& options) {
  if (a.dimension() != b.dimension()) throw InputError("alternating sets disagree on dimension");
  require_point(b0, a.dimension(), "starting point");
  if (!(options.stop_tol >= 0.0)) throw InputError("stop tolerance must be non-negative");

  AlternatingResult result{Trace(options.recording), Trace(options.recording), Trace(options.recording), {}, {}, {},
                           0};
  result.path.record({0, 0, 0.0, 0.0, b0});
  result.b_trace.record({0, 0, 0.0, 0.0, b0});

  Vector bk = b0;
  Vector ak;
  for (std::uint64_t it = 1; it <= options.max_iterations; ++it) {
    const double ra = a.residual(bk);
    Vector anext = checked_projection(a, bk, options.tol, 2 * it - 1, result.path);
    result.path.record({2 * it - 1, 1, ra, (anext - bk).norm(), anext});
    const double a_move = it > 1 ? (anext - ak).norm() : 0.0;
    result.a_trace.record({it, 1, ra, a_move, anext});

    const double rb = b.residual(anext);
    Vector bnext = checked_projection(b, anext, options.tol, 2 * it, result.path);
    result.path.record({2 * it, 2, rb, (bnext - anext).norm(), bnext});
    const double b_move = (bnext - bk).norm();
    result.b_trace.record({it, 2, rb, b_move, bnext});

    ak = std::move(anext);
    bk = std::move(bnext);
    result.iterations = it;
    if (it > 1 && a_move + b_move < options.stop_tol) break;
  }
  result.path.finish();
  result.a_trace.finish();
  result.b_trace.finish();
  if (result.iterations == 0) {
    ak = project(a, bk, options.tol);
  }
  result.gap_vector = bk - ak;
  result.a_limit = ak;
  result.b_limit = bk;
  return result;
}

LimitEstimate estimate_limit(const Trace& trace, const FeasibilityProblem& problem, std::uint64_t refine_sweeps,
                             const ProjectionTolerances& tol) {
  if (const auto* single = std::get_if<SingletonOracle>(&problem.oracle())) {
    return {single->point, 0.0, false, LimitEstimate::Source::kOracle};
  }
  Vector x = trace.last_point();
  require_point(x, problem.dimension(), "trace iterate");
  const std::size_t m = problem.size();
  std::size_t next = static_cast<std::size_t>(trace.last_step() % m);
  for (std::uint64_t s = 0; s < refine_sweeps * m; ++s) {
    x = project(problem.set(next), x, tol);
    next = (next + 1) % m;
  }
  LimitEstimate est;
  est.source = LimitEstimate::Source::kRefined;
  if (problem.has_oracle()) {
    est.radius = 2.0 * oracle_distance(problem.oracle(), x);
  } else {
    double sum = 0.0;
    for (const auto& set : problem.sets()) sum += distance(set, x, tol);
    est.radius = 2.0 * sum;
    est.heuristic = true;
  }
  est.point = std::move(x);
  return est;
}

FejerReport check_fejer(const Trace& trace, const FeasibilityProblem& problem, const std::vector<Vector>& witnesses) {
  for (const auto& w : witnesses) {
    require_point(w, problem.dimension(), "Fejer witness");
    if (problem.max_residual(w) > 1e-8) throw InputError("Fejer witness is not in the intersection");
  }
  FejerReport report;
  report.thinned = trace.thinned();
  const std::size_t m = problem.size();
  const TraceRow* previous = nullptr;
  for (const auto& row : trace.rows()) {
    if (row.k % m != 0) continue;
    if (previous != nullptr) {
      ++report.checked_pairs;
      for (std::size_t w = 0; w < witnesses.size(); ++w) {
        const double increase = (row.x - witnesses[w]).norm() - (previous->x - witnesses[w]).norm();
        if (increase > 1e-9) report.violations.push_back({row.k, w, increase});
      }
    }
    previous = &row;
  }
  return report;
}

DescentReport check_descent_inequality(const Trace& trace, const FeasibilityProblem& problem) {
  if (!problem.has_oracle()) throw CapabilityError("descent inequality check needs an intersection oracle");
  DescentReport report;
  report.thinned = trace.thinned();
  report.min_slack = std::numeric_limits<double>::infinity();
  const auto& rows = trace.rows();
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const TraceRow& cur = rows[i];
    const TraceRow& nxt = rows[i + 1];
    if (nxt.k != cur.k + 1 || nxt.set_index == 0) continue;
    const double before = oracle_distance(problem.oracle(), cur.x);
    const double after = oracle_distance(problem.oracle(), nxt.x);
    const double slack = before * before - after * after - nxt.step_norm * nxt.step_norm;
    ++report.checked_steps;
    report.min_slack = std::min(report.min_slack, slack);
    if (slack < -1e-8) report.violations.push_back(nxt.k);
  }
  if (report.checked_steps == 0) report.min_slack = 0.0;
  return report;
}

bool gap_residual_nonincreasing(const AlternatingResult& result, double slack) {
  const auto& as = result.a_trace.rows();
  const auto& bs = result.b_trace.rows();
  std::size_t j = 0;
  double previous = std::numeric_limits<double>::infinity();
  for (const auto& arow : as) {
    while (j < bs.size() && bs[j].k < arow.k) ++j;
    if (j == bs.size()) break;
    if (bs[j].k != arow.k) continue;
    const double e = ((bs[j].x - arow.x) - result.gap_vector).norm();
    if (e > previous + slack) return false;
    previous = e;
  }
  return true;
}

}  // namespace projfeas
