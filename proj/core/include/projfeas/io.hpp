#ifndef PROJFEAS_IO_HPP
#define PROJFEAS_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "projfeas/engine.hpp"
#include "projfeas/sets.hpp"

namespace projfeas::io {

/// Problem files are JSON:
///
///   {"dimension": 2,
///    "sets": [{"name": "A",
///              "constraints": [{"terms": [{"exponents": [2, 0], "coefficient": 1}, ...]}],
///              "hint": {"type": "ball", "center": [-1, 0], "radius": 1}}],
///    "oracle": {"type": "singleton", "point": [0, 0]}}
///
/// Hint types: "halfspace" {a, b}, "ball" {center, radius},
/// "power_epigraph" {degree, x_axis, y_axis}. Oracle types: "singleton"
/// {point}, "segment" {from, to}. Errors are InputError; syntax errors carry
/// line and column, schema errors the JSON path of the offending value.
FeasibilityProblem parse_problem(const std::string& text, const std::string& source = "<input>");
FeasibilityProblem read_problem(const std::filesystem::path& path);
std::string format_problem(const FeasibilityProblem& problem);
void write_problem(const std::filesystem::path& path, const FeasibilityProblem& problem);

/// Contents of a trace CSV file.
struct TraceFile {
  std::vector<TraceRow> rows;
  std::size_t dimension = 0;
  bool thinned = false;
  std::optional<LimitEstimate> limit;
};

/// Writes "# thinned=true" and "# limit=..." comment lines when they apply,
/// then the header and one row per recorded step, with 17 significant digits.
void write_trace(std::ostream& out, const Trace& trace);
void write_trace(const std::filesystem::path& path, const Trace& trace);

TraceFile parse_trace(std::istream& in, const std::string& source = "<input>");
TraceFile read_trace(const std::filesystem::path& path);

/// %.17g, which round-trips every double.
std::string format_double(double value);

/// Parses "1,2.5,-3" into a vector.
Vector parse_vector(const std::string& text);

}  // namespace projfeas::io

#endif  // PROJFEAS_IO_HPP
