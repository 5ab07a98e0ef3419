#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "projfeas/analysis.hpp"
#include "projfeas/catalog.hpp"
#include "projfeas/engine.hpp"
#include "projfeas/error.hpp"
#include "projfeas/io.hpp"
#include "projfeas/replicate.hpp"

namespace {

using nlohmann::json;
using namespace projfeas;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kSolverError = 2;

struct Source {
  std::string problem;
  std::string example;
};

void add_source(CLI::App* cmd, Source& src) {
  auto* p = cmd->add_option("--problem", src.problem, "problem file (JSON)");
  auto* e = cmd->add_option("--example", src.example, "catalog id, e.g. ex5.1 or ex5.7:d=4");
  p->excludes(e);
}

FeasibilityProblem load_problem(const Source& src) {
  if (src.problem.empty() == src.example.empty()) throw InputError("give exactly one of --problem or --example");
  if (!src.problem.empty()) return io::read_problem(src.problem);
  return catalog::lookup(src.example).problem;
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json rate_json(const RateClass& rate) {
  if (std::holds_alternative<LinearRate>(rate)) return {{"class", "linear"}};
  const auto& rho = std::get<PowerLawRate>(rate).rho;
  return {{"class", "power_law"}, {"rho", rho.to_string()}, {"rho_value", rho.value()}};
}

void emit(const json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw InputError("cannot write " + out);
  file << text;
}

// Advisory only: warns when a sampled Hessian is not positive semidefinite.
void warn_nonconvex(const FeasibilityProblem& problem, const Vector& x0, std::uint64_t seed) {
  const double half = std::max(1.0, x0.cwiseAbs().maxCoeff());
  Box box{x0.array() - half, x0.array() + half};
  for (const auto& set : problem.sets()) {
    if (set.has_hint()) continue;
    for (std::size_t j = 0; j < set.constraints().size(); ++j) {
      const auto report = sample_convexity_check(set.constraints()[j], box, 200, seed);
      if (report.suspicious()) {
        std::cerr << "warning: constraint " << j << " of set '" << set.name()
                  << "' looks non-convex (Hessian eigenvalue " << report.min_eigenvalue_seen << ")\n";
      }
    }
  }
}

int cmd_run(const Source& src, const std::string& x0_text, std::uint64_t sweeps, double stop_tol,
            const std::string& out, std::uint64_t seed) {
  const FeasibilityProblem problem = load_problem(src);
  const Vector x0 = io::parse_vector(x0_text);
  if (static_cast<std::size_t>(x0.size()) != problem.dimension()) {
    throw InputError("--x0 has " + std::to_string(x0.size()) + " entries, problem dimension is " +
                     std::to_string(problem.dimension()));
  }
  warn_nonconvex(problem, x0, seed);

  CyclicOptions opts;
  opts.max_sweeps = sweeps;
  opts.stop_tol = stop_tol;
  Trace trace;
  try {
    trace = cyclic_project(problem, x0, opts);
  } catch (const RunError& e) {
    const std::string partial = out + ".partial";
    io::write_trace(partial, e.partial_trace());
    std::cerr << "error: " << e.what() << "\npartial trace written to " << partial << "\n";
    return kSolverError;
  }
  try {
    trace.limit = estimate_limit(trace, problem, 50);
  } catch (const SolverError& e) {
    std::cerr << "warning: no limit estimate: " << e.what() << "\n";
  }
  io::write_trace(out, trace);
  const Vector& last = trace.last_point();
  std::cout << "steps " << trace.last_step() << ", final residual " << problem.max_residual(last) << ", ||x|| "
            << last.norm() << "\n";
  return kOk;
}

FitWindow parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("--window must look like LO:HI");
  try {
    std::size_t a = 0, b = 0;
    const auto lo = std::stoull(text.substr(0, colon), &a);
    const auto hi = std::stoull(text.substr(colon + 1), &b);
    if (a != colon || b != text.size() - colon - 1) throw std::invalid_argument("trailing text");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw InputError("--window must look like LO:HI with non-negative integers");
  }
}

int cmd_rate(const std::string& trace_path, std::uint64_t n, std::uint64_t d, const std::string& window_text,
             const std::string& limit_text, const std::string& out) {
  const io::TraceFile file = io::read_trace(trace_path);
  if (file.rows.empty()) throw InputError("trace has no rows");
  if (n == 0) n = file.dimension;

  ErrorSeries series;
  Vector limit;
  if (!limit_text.empty()) {
    limit = io::parse_vector(limit_text);
    series.label = "norm_to_given_limit";
  } else if (file.limit) {
    limit = file.limit->point;
    series.noise_floor = file.limit->radius;
    series.label = file.limit->source == LimitEstimate::Source::kOracle ? "dist_to_oracle" : "norm_to_limit_estimate";
  } else {
    throw InputError("trace carries no limit estimate; pass --limit");
  }
  if (static_cast<std::size_t>(limit.size()) != file.dimension) throw InputError("limit has the wrong dimension");
  for (const auto& row : file.rows) {
    if (row.k == 0) continue;
    series.points.push_back({row.k, (row.x - limit).norm()});
  }
  const FitWindow window = window_text.empty() ? default_window(series) : parse_window(window_text);
  const RateReport report = compare_with_theory(series.points, window, n, d, series.label);

  json doc;
  doc["theoretical"] = rate_json(report.theoretical);
  doc["empirical"] = {
      {"power", {{"exponent", report.empirical.power.exponent}, {"r2", report.empirical.power.r2}}},
      {"geometric", {{"ratio", report.empirical.geometric.ratio}, {"r2", report.empirical.geometric.r2}}},
      {"chosen", std::holds_alternative<PowerFit>(report.empirical.chosen) ? "power" : "geometric"},
      {"points", report.empirical.points}};
  doc["window"] = {report.window.lo, report.window.hi};
  doc["errors_used"] = report.errors_used;
  doc["thinned"] = file.thinned;
  doc["verdict"] = to_string(report.verdict);
  emit(doc, out);
  return kOk;
}

struct ProbeFlags {
  std::string center;
  double theta = 1.0;
  std::size_t samples = 200;
  double radius = 0.1;
  std::uint64_t seed = 0;
  bool curve = false;
  double t_min = 1e-3;
  double t_max = 1e-1;
  std::size_t points = 50;
  std::string out;
};

int cmd_errorbound(const Source& src, const ProbeFlags& f) {
  if (f.curve) {
    if (src.example.empty()) throw InputError("--curve needs an --example with a curve");
    const auto entry = catalog::lookup(src.example);
    if (!entry.curve) throw InputError(entry.id + " has no curve");
    const auto ts = log_spaced(f.t_min, f.t_max, f.points);
    const auto probe = curve_probe(entry.problem, entry.curve, ts);
    json doc;
    doc["mode"] = "curve";
    doc["example"] = entry.id;
    doc["fitted_exponent"] = probe.exponent;
    doc["fit_r2"] = probe.r2;
    doc["points"] = probe.points;
    doc["t_range"] = {f.t_min, f.t_max};
    doc["theoretical_tau"] = holder_exponent_tau(entry.problem.dimension(),
                                                 static_cast<std::uint64_t>(entry.problem.max_degree()));
    emit(doc, f.out);
    return kOk;
  }
  const FeasibilityProblem problem = load_problem(src);
  if (f.center.empty()) throw InputError("--center is required unless --curve is given");
  ProbeOptions opts;
  opts.theta = f.theta;
  opts.samples = f.samples;
  opts.radius = f.radius;
  opts.seed = f.seed;
  const auto r = error_bound_probe(problem, io::parse_vector(f.center), opts);
  json doc;
  doc["mode"] = "ball";
  doc["theta"] = r.theta;
  doc["theoretical_tau"] = r.theoretical_tau;
  doc["fitted_tau"] = r.fitted_tau;
  doc["fitted_log_c"] = r.fitted_log_c;
  doc["fit_r2"] = r.fit_r2;
  doc["samples"] = r.sample_count;
  doc["used_samples"] = r.used_samples;
  doc["best_constant"] = r.best_constant;
  doc["violations_at_unit_constant"] = r.violations_at_unit_constant;
  doc["radius"] = r.radius;
  doc["seed"] = r.seed;
  doc["center"] = vector_json(r.center);
  emit(doc, f.out);
  return kOk;
}

int cmd_replicate(bool all, const std::string& id) {
  if (all == !id.empty()) throw InputError("give exactly one of --all or --id");
  const auto rows = all ? replicate_all() : replicate(id);
  std::cout << format_table(rows);
  const bool pass = std::all_of(rows.begin(), rows.end(), [](const ReplicationRow& r) { return r.pass; });
  return pass ? kOk : kSolverError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyclic and alternating projections for convex polynomial feasibility problems"};
  app.require_subcommand(1);

  Source run_src;
  std::string x0, run_out;
  std::uint64_t sweeps = 1000, run_seed = 0;
  double stop_tol = 1e-12;
  auto* run = app.add_subcommand("run", "cyclic projections, writes a trace CSV");
  add_source(run, run_src);
  run->add_option("--x0", x0, "starting point, comma separated")->required();
  run->add_option("--sweeps", sweeps, "maximum number of sweeps")->capture_default_str();
  run->add_option("--stop-tol", stop_tol, "stop when a sweep moves less than this")->capture_default_str();
  run->add_option("--out", run_out, "trace file")->required();
  run->add_option("--seed", run_seed, "seed for the convexity sampler")->capture_default_str();

  std::string trace_path, window, limit, rate_out;
  std::uint64_t n = 0, d = 0;
  auto* rate = app.add_subcommand("rate", "fit the decay of a trace and compare with theory");
  rate->add_option("--trace", trace_path, "trace CSV")->required();
  rate->add_option("--n", n, "dimension (default: from the trace)");
  rate->add_option("--d", d, "maximal degree")->required();
  rate->add_option("--window", window, "fit window LO:HI in steps");
  rate->add_option("--limit", limit, "limit point, overrides the trace's estimate");
  rate->add_option("--out", rate_out, "report file (default: stdout)");

  Source eb_src;
  ProbeFlags probe;
  auto* eb = app.add_subcommand("errorbound", "sample the error-bound exponent");
  add_source(eb, eb_src);
  eb->add_option("--center", probe.center, "point of the intersection");
  eb->add_option("--theta", probe.theta)->capture_default_str();
  eb->add_option("--samples", probe.samples)->capture_default_str();
  eb->add_option("--radius", probe.radius)->capture_default_str();
  eb->add_option("--seed", probe.seed)->capture_default_str();
  eb->add_flag("--curve", probe.curve, "probe along the example's curve instead of a ball");
  eb->add_option("--t-min", probe.t_min)->capture_default_str();
  eb->add_option("--t-max", probe.t_max)->capture_default_str();
  eb->add_option("--points", probe.points)->capture_default_str();
  eb->add_option("--out", probe.out, "report file (default: stdout)");

  bool all = false;
  std::string id;
  auto* rep = app.add_subcommand("replicate", "check the catalog examples");
  rep->add_flag("--all", all, "every catalog entry");
  rep->add_option("--id", id, "one catalog id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*run) return cmd_run(run_src, x0, sweeps, stop_tol, run_out, run_seed);
    if (*rate) return cmd_rate(trace_path, n, d, window, limit, rate_out);
    if (*eb) return cmd_errorbound(eb_src, probe);
    if (*rep) return cmd_replicate(all, id);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const CapabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const OverflowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  }
  return kInputError;
}
