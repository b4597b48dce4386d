#include "fsipm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace fsipm::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ParseError, where + ": " + what);
}

const json& field(const json& j, const std::string& key,
                  const std::string& where) {
  if (!j.is_object()) {
    fail(where, "expected an object");
  }
  auto it = j.find(key);
  if (it == j.end()) {
    fail(where, "missing field \"" + key + "\"");
  }
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) {
    fail(where, "expected a number");
  }
  return j.get<double>();
}

Index integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) {
    fail(where, "expected an integer");
  }
  return j.get<Index>();
}

Vec<double> vector(const json& j, const std::string& where) {
  if (!j.is_array()) {
    fail(where, "expected an array of numbers");
  }
  Vec<double> v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) =
        number(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

Mat<double> matrix(const json& j, const std::string& where) {
  if (!j.is_array()) {
    fail(where, "expected an array of rows");
  }
  const Index rows = static_cast<Index>(j.size());
  Index cols = -1;
  Mat<double> a;
  for (Index i = 0; i < rows; ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    Vec<double> row = vector(j[static_cast<std::size_t>(i)], w);
    if (cols < 0) {
      cols = row.size();
      a.resize(rows, cols);
    } else if (row.size() != cols) {
      fail(w, "row has " + std::to_string(row.size()) + " entries, expected " +
                  std::to_string(cols));
    }
    a.row(i) = row.transpose();
  }
  return a;
}

std::vector<Vec<double>> polynomials(const json& j, const std::string& where) {
  if (!j.is_array()) {
    fail(where, "expected an array of coefficient lists");
  }
  std::vector<Vec<double>> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(vector(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

/// JSON has no inf/nan; both are written as null.
json real(double v) {
  if (!std::isfinite(v)) {
    return nullptr;
  }
  return v;
}

double real_or_nan(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return it->get<double>();
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::ParseError, path + ": cannot open file");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError,
                path + ": byte " + std::to_string(e.byte) + ": invalid JSON");
  }
}

}  // namespace

Cone<double> parse_cone(const json& j, const std::string& where) {
  const json& type = field(j, "type", where);
  if (!type.is_string()) {
    fail(where + ".type", "expected a string");
  }
  const std::string t = type.get<std::string>();
  if (t == "orthant") {
    const Index n = integer(field(j, "dim", where), where + ".dim");
    if (n < 1) {
      fail(where + ".dim", "must be positive");
    }
    return orthant<double>(n);
  }
  if (t == "product") {
    const json& parts = field(j, "parts", where);
    if (!parts.is_array() || parts.empty()) {
      fail(where + ".parts", "expected a non-empty array of cones");
    }
    std::vector<Cone<double>> out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      out.push_back(
          parse_cone(parts[i], where + ".parts[" + std::to_string(i) + "]"));
    }
    return product<double>(std::move(out));
  }
  if (t == "moment") {
    SemialgebraicInstance<double> inst;
    inst.degree = integer(field(j, "degree", where), where + ".degree");
    inst.objective = Vec<double>::Zero(1);
    if (j.contains("constraints")) {
      inst.constraints = polynomials(j["constraints"], where + ".constraints");
    }
    try {
      return build_moment_cone(inst);
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }
  fail(where + ".type", "unknown cone type \"" + t + "\"");
}

ProblemFile parse_problem(const json& j) {
  Mat<double> a = matrix(field(j, "A", "$"), "$.A");
  Vec<double> b = vector(field(j, "b", "$"), "$.b");
  Vec<double> c = vector(field(j, "c", "$"), "$.c");
  Cone<double> cone = parse_cone(field(j, "cone", "$"), "$.cone");
  if (a.rows() == 0) {
    a.resize(0, c.size());
  }
  std::optional<Vec<double>> x0;
  if (j.contains("x0")) {
    x0 = vector(j["x0"], "$.x0");
    if (x0->size() != c.size()) {
      fail("$.x0", "length differs from c");
    }
  }
  try {
    return {ConicProblem<double>(std::move(a), std::move(b), std::move(c),
                                 std::move(cone)),
            std::move(x0)};
  } catch (const Error& e) {
    fail("$", e.what());
  }
}

ProblemFile load_problem(const std::string& path) {
  const json j = read_file(path);
  try {
    return parse_problem(j);
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError,
                path + ": " + std::string(e.what()).substr(12));
  }
}

SemialgebraicInstance<double> parse_instance(const json& j) {
  SemialgebraicInstance<double> inst;
  inst.degree = integer(field(j, "degree", "$"), "$.degree");
  inst.objective = vector(field(j, "objective", "$"), "$.objective");
  if (j.contains("constraints")) {
    inst.constraints = polynomials(j["constraints"], "$.constraints");
  }
  return inst;
}

SemialgebraicInstance<double> load_instance(const std::string& path) {
  const json j = read_file(path);
  try {
    return parse_instance(j);
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError,
                path + ": " + std::string(e.what()).substr(12));
  }
}

json to_json(const TraceRecord<double>& r) {
  return {{"iteration", r.iteration}, {"tau", real(r.tau)},
          {"mu", real(r.mu)},         {"gap", real(r.gap)},
          {"distance", real(r.distance)}, {"damped", r.damped},
          {"alpha", real(r.alpha)},   {"dx_norm", real(r.dx_norm)},
          {"ds_norm", real(r.ds_norm)}, {"theta", real(r.theta)},
          {"kappa_xi", real(r.kappa_xi)}};
}

TraceRecord<double> trace_record_from_json(const json& j) {
  TraceRecord<double> r;
  r.iteration = j.at("iteration").get<long>();
  r.tau = real_or_nan(j, "tau");
  r.mu = real_or_nan(j, "mu");
  r.gap = real_or_nan(j, "gap");
  r.distance = real_or_nan(j, "distance");
  r.damped = j.at("damped").get<bool>();
  r.alpha = real_or_nan(j, "alpha");
  r.dx_norm = real_or_nan(j, "dx_norm");
  r.ds_norm = real_or_nan(j, "ds_norm");
  r.theta = real_or_nan(j, "theta");
  r.kappa_xi = real_or_nan(j, "kappa_xi");
  return r;
}

json to_json(const RunReport& r) {
  json j;
  j["command"] = r.command;
  j["status"] = r.status;
  if (!r.reason.empty()) {
    j["reason"] = r.reason;
  }
  if (!r.verdict.empty()) {
    j["verdict"] = r.verdict;
  }
  j["primal_objective"] = real(r.primal_objective);
  j["dual_objective"] = real(r.dual_objective);
  j["gap"] = real(r.gap);
  j["iterations"] = r.iterations;
  j["theoretical_bound"] = r.theoretical_bound;
  if (r.seconds) {
    j["seconds"] = *r.seconds;
  }
  if (r.bound) {
    j["bound"] = real(*r.bound);
  }
  if (r.neg_inv_bound) {
    j["neg_inv_bound"] = real(*r.neg_inv_bound);
  }
  if (r.certified) {
    j["certified"] = *r.certified;
  }
  if (r.certificate_distance) {
    j["certificate_distance"] = real(*r.certificate_distance);
  }
  j["config"] = r.config;
  j["x"] = r.x;
  j["y"] = r.y;
  j["s"] = r.s;
  if (!r.trace.empty()) {
    json t = json::array();
    for (const auto& rec : r.trace) {
      t.push_back(to_json(rec));
    }
    j["trace"] = std::move(t);
  }
  return j;
}

RunReport report_from_json(const json& j) {
  RunReport r;
  try {
    r.command = j.at("command").get<std::string>();
    r.status = j.at("status").get<std::string>();
    r.reason = j.value("reason", std::string());
    r.verdict = j.value("verdict", std::string());
    r.primal_objective = real_or_nan(j, "primal_objective");
    r.dual_objective = real_or_nan(j, "dual_objective");
    r.gap = real_or_nan(j, "gap");
    r.iterations = j.at("iterations").get<long>();
    r.theoretical_bound = j.at("theoretical_bound").get<long>();
    if (j.contains("seconds")) {
      r.seconds = j["seconds"].get<double>();
    }
    if (j.contains("bound")) {
      r.bound = real_or_nan(j, "bound");
    }
    if (j.contains("neg_inv_bound")) {
      r.neg_inv_bound = real_or_nan(j, "neg_inv_bound");
    }
    if (j.contains("certified")) {
      r.certified = j["certified"].get<bool>();
    }
    if (j.contains("certificate_distance")) {
      r.certificate_distance = real_or_nan(j, "certificate_distance");
    }
    r.config = j.at("config");
    r.x = j.at("x").get<std::vector<double>>();
    r.y = j.at("y").get<std::vector<double>>();
    r.s = j.at("s").get<std::vector<double>>();
    if (j.contains("trace")) {
      for (const auto& rec : j["trace"]) {
        r.trace.push_back(trace_record_from_json(rec));
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("run report: ") + e.what());
  }
  return r;
}

std::string table_row_csv(const TableRow<double>& row, bool timing) {
  char buf[256];
  std::string seconds = "-";
  if (timing) {
    std::snprintf(buf, sizeof buf, "%.3f", row.seconds);
    seconds = buf;
  }
  std::string dobj = "FAILED";
  std::string neg = "FAILED";
  if (row.ok) {
    std::snprintf(buf, sizeof buf, "%.12g", row.bound);
    dobj = buf;
    std::snprintf(buf, sizeof buf, "%.6f", row.neg_inv_bound);
    neg = buf;
  }
  std::snprintf(buf, sizeof buf, "%ld,%s,%s,%.0f,%ld,%s,%s",
                static_cast<long>(row.degree), dobj.c_str(), neg.c_str(),
                row.conjectured, row.iterations, seconds.c_str(),
                std::string(to_string(row.method)).c_str());
  return buf;
}

}  // namespace fsipm::io
