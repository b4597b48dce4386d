#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsipm/core.hpp"
#include "fsipm/sos.hpp"

namespace fsipm::io {

using json = nlohmann::json;

/// A problem document plus an optional strictly feasible primal point.
struct ProblemFile {
  ConicProblem<double> problem;
  std::optional<Vec<double>> x0;
};

/// {"type": "orthant", "dim": n}, {"type": "product", "parts": [...]} or
/// {"type": "moment", "degree": D, "constraints": [[chebyshev coeffs], ...]}.
Cone<double> parse_cone(const json& j, const std::string& where = "cone");

/// {"A": rows, "b": [...], "c": [...], "cone": {...}, "x0": [...]?}.
/// Throws ParseError naming the JSON path of the offending field.
ProblemFile parse_problem(const json& j);
ProblemFile load_problem(const std::string& path);

/// {"degree": D, "objective": [chebyshev coeffs], "constraints": [[...], ...]}
SemialgebraicInstance<double> parse_instance(const json& j);
SemialgebraicInstance<double> load_instance(const std::string& path);

/// Named instances for `sos --example`; only "stengle" is bundled.
SemialgebraicInstance<double> example_instance(const std::string& name,
                                               Index degree);

json to_json(const TraceRecord<double>& r);
TraceRecord<double> trace_record_from_json(const json& j);

struct RunReport {
  std::string command;
  std::string status;
  std::string reason;
  /// HSD verdict, or empty.
  std::string verdict;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  long iterations = 0;
  long theoretical_bound = 0;
  std::optional<double> seconds;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> s;
  /// sos only
  std::optional<double> bound;
  std::optional<double> neg_inv_bound;
  std::optional<bool> certified;
  std::optional<double> certificate_distance;
  json config = json::object();
  std::vector<TraceRecord<double>> trace;
};

json to_json(const RunReport& r);
RunReport report_from_json(const json& j);

inline constexpr const char* kTableHeader =
    "D,dObj,neg_inv_dObj,conjectured,iters,seconds,method";

/// One CSV line (no newline). Failed rows carry FAILED in the value columns.
std::string table_row_csv(const TableRow<double>& row, bool timing);

/// Process exit codes of the command-line tool.
enum ExitCode { kOk = 0, kConfigError = 1, kNumericalFailure = 2, kIterationLimit = 3 };

struct SolveOptions {
  std::string problem_path;
  std::string variant = "adaptive";
  double eta = 0.25;
  double eps = 1e-8;
  std::string init = "hsd";
  long max_iter = 20000;
  std::string trace_path;
  bool check_invariants = true;
  bool timing = true;
};

struct SosOptions {
  std::string instance_path;
  std::string example;
  Index degree = 20;
  std::string method = "two-phase";
  std::string variant = "largest";
  double eta = 0.25;
  double eps = 1e-9;
  long max_iter = 20000;
  std::string trace_path;
  bool check_invariants = true;
  bool timing = true;
};

struct TableOptions {
  std::vector<Index> degrees;
  std::vector<std::string> methods{"two-phase"};
  std::string variant = "largest";
  double eta = 0.25;
  double eps = 1e-9;
  bool timing = true;
};

UpdateStrategy parse_variant(const std::string& name);
SosMethod parse_method(const std::string& name);

/// Each command writes its report to `out`, diagnostics to `err`, and
/// returns an ExitCode.
int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err);
int cmd_sos(const SosOptions& opt, std::ostream& out, std::ostream& err);
int cmd_table(const TableOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace fsipm::io
