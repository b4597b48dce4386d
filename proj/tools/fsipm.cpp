#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fsipm/io.hpp"

namespace {

/// "20,40,60" or "20:100:20" (first:last:step).
std::vector<fsipm::Index> parse_degrees(const std::string& text) {
  std::vector<fsipm::Index> out;
  if (text.empty()) {
    return out;
  }
  if (text.find(':') != std::string::npos) {
    std::istringstream in(text);
    long first = 0, last = 0, step = 1;
    char sep1 = 0, sep2 = 0;
    in >> first >> sep1 >> last;
    if (in >> sep2) {
      in >> step;
    }
    if (!in.eof() || in.fail() || step <= 0) {
      throw CLI::ValidationError("--degrees", "expected first:last:step");
    }
    for (long d = first; d <= last; d += step) {
      out.push_back(d);
    }
    return out;
  }
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stol(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw CLI::ValidationError("--degrees", "not an integer: " + item);
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primal-dual path following with self-concordant barriers"};
  app.require_subcommand(1);

  fsipm::io::SolveOptions solve;
  std::string solve_checks = "on";
  auto* s = app.add_subcommand("solve", "Solve a conic problem from a JSON file");
  s->add_option("problem", solve.problem_path, "Problem JSON")->required();
  s->add_option("--variant", solve.variant, "fixed|adaptive|largest")
      ->capture_default_str();
  s->add_option("--eta", solve.eta, "Neighborhood radius, at most 1/4")
      ->capture_default_str();
  s->add_option("--eps", solve.eps, "Target duality gap")->capture_default_str();
  s->add_option("--init", solve.init, "membership|two-phase|backwards|hsd")
      ->capture_default_str();
  s->add_option("--max-iter", solve.max_iter)->capture_default_str();
  s->add_option("--trace", solve.trace_path, "Write the iteration trace here");
  s->add_option("--check-invariants", solve_checks, "on|off")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  bool solve_no_timing = false;
  s->add_flag("--no-timing", solve_no_timing, "Omit wall time from the report");

  fsipm::io::SosOptions sos;
  std::string sos_checks = "on";
  auto* o = app.add_subcommand("sos", "Lower bound for a univariate polynomial");
  o->add_option("instance", sos.instance_path, "Instance JSON");
  o->add_option("--example", sos.example, "Bundled instance (stengle)");
  o->add_option("--degree", sos.degree, "Even relaxation degree D")
      ->capture_default_str();
  o->add_option("--method", sos.method, "two-phase|hsd")->capture_default_str();
  o->add_option("--variant", sos.variant, "fixed|adaptive|largest")
      ->capture_default_str();
  o->add_option("--eta", sos.eta)->capture_default_str();
  o->add_option("--eps", sos.eps)->capture_default_str();
  o->add_option("--max-iter", sos.max_iter)->capture_default_str();
  o->add_option("--trace", sos.trace_path);
  o->add_option("--check-invariants", sos_checks, "on|off")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  bool sos_no_timing = false;
  o->add_flag("--no-timing", sos_no_timing);

  fsipm::io::TableOptions table;
  std::string degrees;
  std::string methods = "two-phase";
  auto* t = app.add_subcommand("table", "CSV of bounds for the bundled example");
  t->add_option("--degrees", degrees, "20,40,60 or 20:100:20 (may be empty)");
  t->add_option("--methods", methods, "two-phase,hsd")->capture_default_str();
  t->add_option("--variant", table.variant)->capture_default_str();
  t->add_option("--eta", table.eta)->capture_default_str();
  t->add_option("--eps", table.eps)->capture_default_str();
  bool table_no_timing = false;
  t->add_flag("--no-timing", table_no_timing);

  try {
    app.parse(argc, argv);
    if (t->parsed()) {
      table.degrees = parse_degrees(degrees);
      table.methods = split(methods);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fsipm::io::kConfigError;
  }

  if (s->parsed()) {
    solve.check_invariants = solve_checks == "on";
    solve.timing = !solve_no_timing;
    return fsipm::io::cmd_solve(solve, std::cout, std::cerr);
  }
  if (o->parsed()) {
    if (sos.instance_path.empty() && sos.example.empty()) {
      std::cerr << "fsipm: sos needs an instance file or --example\n";
      return fsipm::io::kConfigError;
    }
    sos.check_invariants = sos_checks == "on";
    sos.timing = !sos_no_timing;
    return fsipm::io::cmd_sos(sos, std::cout, std::cerr);
  }
  table.timing = !table_no_timing;
  return fsipm::io::cmd_table(table, std::cout, std::cerr);
}
