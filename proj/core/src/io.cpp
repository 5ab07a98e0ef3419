#include "projfeas/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "projfeas/error.hpp"

namespace projfeas::io {
namespace {

using nlohmann::json;

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& why) const {
    throw InputError(source_ + ": " + path + ": " + why);
  }

  const json& field(const json& obj, const std::string& path, const char* key) const {
    if (!obj.is_object()) fail(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing key \"") + key + "\"");
    return *it;
  }

  double number(const json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "number is not finite");
    return x;
  }

  long long integer(const json& v, const std::string& path) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<long long>();
  }

  std::size_t index(const json& v, const std::string& path) const {
    const long long i = integer(v, path);
    if (i < 0) fail(path, "expected a non-negative integer");
    return static_cast<std::size_t>(i);
  }

  const json& array(const json& v, const std::string& path) const {
    if (!v.is_array()) fail(path, "expected an array");
    return v;
  }

  Vector vector(const json& v, const std::string& path, std::size_t dimension) const {
    array(v, path);
    if (v.size() != dimension) {
      fail(path, "expected " + std::to_string(dimension) + " entries, got " + std::to_string(v.size()));
    }
    Vector out(static_cast<Eigen::Index>(dimension));
    for (std::size_t i = 0; i < dimension; ++i) out[static_cast<Eigen::Index>(i)] = number(v[i], path + "[" + std::to_string(i) + "]");
    return out;
  }

 private:
  std::string source_;
};

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

Polynomial read_polynomial(const Reader& r, const json& v, const std::string& path, std::size_t dimension) {
  const json& terms = r.array(r.field(v, path, "terms"), path + ".terms");
  std::vector<Monomial> monomials;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string tp = path + ".terms[" + std::to_string(t) + "]";
    const json& exps = r.array(r.field(terms[t], tp, "exponents"), tp + ".exponents");
    if (exps.size() != dimension) {
      r.fail(tp + ".exponents", "expected " + std::to_string(dimension) + " exponents, got " + std::to_string(exps.size()));
    }
    Monomial m;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      const std::string ep = tp + ".exponents[" + std::to_string(i) + "]";
      const long long e = r.integer(exps[i], ep);
      if (e < 0 || e > 1000) r.fail(ep, "exponent out of range [0, 1000]");
      m.exponents.push_back(static_cast<int>(e));
    }
    m.coefficient = r.number(r.field(terms[t], tp, "coefficient"), tp + ".coefficient");
    monomials.push_back(std::move(m));
  }
  return Polynomial(dimension, std::move(monomials));
}

AnalyticHint read_hint(const Reader& r, const json& v, const std::string& path, std::size_t dimension) {
  const json& type = r.field(v, path, "type");
  if (!type.is_string()) r.fail(path + ".type", "expected a string");
  const auto name = type.get<std::string>();
  if (name == "halfspace") {
    return HalfspaceHint{r.vector(r.field(v, path, "a"), path + ".a", dimension), r.number(r.field(v, path, "b"), path + ".b")};
  }
  if (name == "ball") {
    return BallHint{r.vector(r.field(v, path, "center"), path + ".center", dimension),
                    r.number(r.field(v, path, "radius"), path + ".radius")};
  }
  if (name == "power_epigraph") {
    PowerEpigraphHint h;
    h.degree = static_cast<int>(r.integer(r.field(v, path, "degree"), path + ".degree"));
    if (v.contains("x_axis")) h.x_axis = r.index(v["x_axis"], path + ".x_axis");
    if (v.contains("y_axis")) h.y_axis = r.index(v["y_axis"], path + ".y_axis");
    return h;
  }
  r.fail(path + ".type", "unknown hint type \"" + name + "\"");
}

IntersectionOracle read_oracle(const Reader& r, const json& v, const std::string& path, std::size_t dimension) {
  const json& type = r.field(v, path, "type");
  if (!type.is_string()) r.fail(path + ".type", "expected a string");
  const auto name = type.get<std::string>();
  if (name == "singleton") return SingletonOracle{r.vector(r.field(v, path, "point"), path + ".point", dimension)};
  if (name == "segment") {
    return SegmentOracle{r.vector(r.field(v, path, "from"), path + ".from", dimension),
                         r.vector(r.field(v, path, "to"), path + ".to", dimension)};
  }
  r.fail(path + ".type", "unknown oracle type \"" + name + "\"");
}

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

struct HintJson {
  json operator()(const std::monostate&) const { return nullptr; }
  json operator()(const HalfspaceHint& h) const { return {{"type", "halfspace"}, {"a", vector_json(h.a)}, {"b", h.b}}; }
  json operator()(const BallHint& h) const {
    return {{"type", "ball"}, {"center", vector_json(h.center)}, {"radius", h.radius}};
  }
  json operator()(const PowerEpigraphHint& h) const {
    return {{"type", "power_epigraph"}, {"degree", h.degree}, {"x_axis", h.x_axis}, {"y_axis", h.y_axis}};
  }
};

// Splits one CSV record, honouring RFC-4180 quoting.
std::vector<std::string> split_record(const std::string& line, const std::string& where) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      if (!field.empty() || was_quoted) throw InputError(where + ": stray quote");
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      if (was_quoted) throw InputError(where + ": text after closing quote");
      field += c;
    }
  }
  if (quoted) throw InputError(where + ": unterminated quote");
  fields.push_back(std::move(field));
  return fields;
}

double parse_real(const std::string& s, const std::string& where) {
  if (s.empty()) throw InputError(where + ": empty number");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw InputError(where + ": malformed number '" + s + "'");
  return v;
}

std::uint64_t parse_count(const std::string& s, const std::string& where) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError(where + ": expected a non-negative integer, got '" + s + "'");
  }
  return std::strtoull(s.c_str(), nullptr, 10);
}

void parse_comment(const std::string& body, TraceFile& file, const std::string& where) {
  if (body == "thinned=true") {
    file.thinned = true;
    return;
  }
  if (body.rfind("limit=", 0) != 0) return;
  LimitEstimate est;
  std::istringstream parts(body);
  std::string part;
  while (std::getline(parts, part, ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw InputError(where + ": malformed limit comment");
    const std::string key = part.substr(0, eq);
    const std::string value = part.substr(eq + 1);
    if (key == "limit") {
      std::vector<double> xs;
      for (const auto& f : split_record(value, where)) xs.push_back(parse_real(f, where));
      est.point = Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
    } else if (key == "radius") {
      est.radius = parse_real(value, where);
    } else if (key == "source") {
      if (value == "oracle") {
        est.source = LimitEstimate::Source::kOracle;
      } else if (value == "refined") {
        est.source = LimitEstimate::Source::kRefined;
      } else {
        throw InputError(where + ": unknown limit source '" + value + "'");
      }
    } else if (key == "heuristic") {
      est.heuristic = value == "true";
    }
  }
  file.limit = std::move(est);
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Vector parse_vector(const std::string& text) {
  std::vector<double> xs;
  for (const auto& f : split_record(text, "vector")) {
    std::size_t a = f.find_first_not_of(" \t");
    std::size_t b = f.find_last_not_of(" \t");
    const std::string trimmed = a == std::string::npos ? "" : f.substr(a, b - a + 1);
    const double v = parse_real(trimmed, "vector '" + text + "'");
    if (!std::isfinite(v)) throw InputError("vector '" + text + "' has a non-finite entry");
    xs.push_back(v);
  }
  return Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

FeasibilityProblem parse_problem(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    const auto pos = what.find("syntax error");
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                     (pos == std::string::npos ? what : what.substr(pos)));
  }
  const Reader r(source);
  const long long dim = r.integer(r.field(doc, "$", "dimension"), "$.dimension");
  if (dim < 1) r.fail("$.dimension", "dimension must be >= 1");
  const auto n = static_cast<std::size_t>(dim);
  const json& sets = r.array(r.field(doc, "$", "sets"), "$.sets");
  if (sets.empty()) r.fail("$.sets", "need at least one set");
  std::vector<ConvexSet> built;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const std::string sp = "$.sets[" + std::to_string(s) + "]";
    const json& name = r.field(sets[s], sp, "name");
    if (!name.is_string()) r.fail(sp + ".name", "expected a string");
    const json& cons = r.array(r.field(sets[s], sp, "constraints"), sp + ".constraints");
    std::vector<Polynomial> polys;
    for (std::size_t c = 0; c < cons.size(); ++c) {
      polys.push_back(read_polynomial(r, cons[c], sp + ".constraints[" + std::to_string(c) + "]", n));
    }
    AnalyticHint hint;
    if (sets[s].contains("hint") && !sets[s]["hint"].is_null()) hint = read_hint(r, sets[s]["hint"], sp + ".hint", n);
    try {
      built.emplace_back(name.get<std::string>(), std::move(polys), std::move(hint));
    } catch (const InputError& e) {
      r.fail(sp, e.what());
    }
  }
  IntersectionOracle oracle;
  if (doc.contains("oracle") && !doc["oracle"].is_null()) oracle = read_oracle(r, doc["oracle"], "$.oracle", n);
  return FeasibilityProblem(std::move(built), std::move(oracle));
}

FeasibilityProblem read_problem(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open problem file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str(), path.string());
}

std::string format_problem(const FeasibilityProblem& problem) {
  json doc;
  doc["dimension"] = problem.dimension();
  json sets = json::array();
  for (const auto& set : problem.sets()) {
    json s;
    s["name"] = set.name();
    json cons = json::array();
    for (const auto& p : set.constraints()) {
      json terms = json::array();
      for (const auto& m : p.terms()) terms.push_back({{"exponents", m.exponents}, {"coefficient", m.coefficient}});
      cons.push_back({{"terms", std::move(terms)}});
    }
    s["constraints"] = std::move(cons);
    if (set.has_hint()) s["hint"] = std::visit(HintJson{}, set.hint());
    sets.push_back(std::move(s));
  }
  doc["sets"] = std::move(sets);
  if (const auto* single = std::get_if<SingletonOracle>(&problem.oracle())) {
    doc["oracle"] = {{"type", "singleton"}, {"point", vector_json(single->point)}};
  } else if (const auto* seg = std::get_if<SegmentOracle>(&problem.oracle())) {
    doc["oracle"] = {{"type", "segment"}, {"from", vector_json(seg->from)}, {"to", vector_json(seg->to)}};
  }
  return doc.dump(2) + "\n";
}

void write_problem(const std::filesystem::path& path, const FeasibilityProblem& problem) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << format_problem(problem);
}

void write_trace(std::ostream& out, const Trace& trace) {
  std::size_t n = 0;
  if (!trace.rows().empty()) n = static_cast<std::size_t>(trace.rows().front().x.size());
  if (trace.thinned()) out << "# thinned=true\n";
  if (trace.limit) {
    const auto& est = *trace.limit;
    out << "# limit=";
    for (Eigen::Index i = 0; i < est.point.size(); ++i) out << (i ? "," : "") << format_double(est.point[i]);
    out << ";radius=" << format_double(est.radius)
        << ";source=" << (est.source == LimitEstimate::Source::kOracle ? "oracle" : "refined")
        << ";heuristic=" << (est.heuristic ? "true" : "false") << "\n";
  }
  out << "k,set_index,residual_before,step_norm";
  for (std::size_t i = 0; i < n; ++i) out << ",x_" << i;
  out << "\n";
  for (const auto& row : trace.rows()) {
    out << row.k << ',' << row.set_index << ',' << format_double(row.residual_before) << ','
        << format_double(row.step_norm);
    for (Eigen::Index i = 0; i < row.x.size(); ++i) out << ',' << format_double(row.x[i]);
    out << '\n';
  }
}

void write_trace(const std::filesystem::path& path, const Trace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  write_trace(out, trace);
  if (!out) throw InputError("failed writing " + path.string());
}

TraceFile parse_trace(std::istream& in, const std::string& source) {
  TraceFile file;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string where = source + ":" + std::to_string(line_no);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto start = line.find_first_not_of(" ", 1);
      parse_comment(start == std::string::npos ? "" : line.substr(start), file, where);
      continue;
    }
    const auto fields = split_record(line, where);
    if (!have_header) {
      const char* expected[] = {"k", "set_index", "residual_before", "step_norm"};
      if (fields.size() < 5) throw InputError(where + ": header needs k,set_index,residual_before,step_norm,x_0,...");
      for (std::size_t i = 0; i < 4; ++i) {
        if (fields[i] != expected[i]) throw InputError(where + ": expected column '" + expected[i] + "'");
      }
      for (std::size_t i = 4; i < fields.size(); ++i) {
        if (fields[i] != "x_" + std::to_string(i - 4)) throw InputError(where + ": expected column 'x_" + std::to_string(i - 4) + "'");
      }
      file.dimension = fields.size() - 4;
      have_header = true;
      continue;
    }
    if (fields.size() != file.dimension + 4) {
      throw InputError(where + ": expected " + std::to_string(file.dimension + 4) + " fields, got " +
                       std::to_string(fields.size()));
    }
    TraceRow row;
    row.k = parse_count(fields[0], where);
    row.set_index = static_cast<std::size_t>(parse_count(fields[1], where));
    row.residual_before = parse_real(fields[2], where);
    row.step_norm = parse_real(fields[3], where);
    row.x.resize(static_cast<Eigen::Index>(file.dimension));
    for (std::size_t i = 0; i < file.dimension; ++i) row.x[static_cast<Eigen::Index>(i)] = parse_real(fields[4 + i], where);
    if (!file.rows.empty() && row.k <= file.rows.back().k) throw InputError(where + ": k is not strictly increasing");
    file.rows.push_back(std::move(row));
  }
  if (!have_header) throw InputError(source + ": missing header line");
  if (file.limit && static_cast<std::size_t>(file.limit->point.size()) != file.dimension) {
    throw InputError(source + ": limit comment has the wrong dimension");
  }
  return file;
}

TraceFile read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open trace file " + path.string());
  return parse_trace(in, path.string());
}

}  // namespace projfeas::io
