#include <chrono>
#include <fstream>
#include <ostream>

#include "fsipm/hsd.hpp"
#include "fsipm/init.hpp"
#include "fsipm/io.hpp"

namespace fsipm::io {

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidTolerance:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::RankDeficient:
    case ErrorKind::PreconditionFailed:
      return kConfigError;
    case ErrorKind::IterationLimit:
      return kIterationLimit;
    default:
      return kNumericalFailure;
  }
}

int exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::NumericalFailure:
      return kNumericalFailure;
    case SolveStatus::IterationLimit:
      return kIterationLimit;
    default:
      return kOk;
  }
}

std::vector<double> to_std(const Vec<double>& v) {
  return {v.data(), v.data() + v.size()};
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void write_trace(const std::string& path,
                 const std::vector<TraceRecord<double>>& trace) {
  if (path.empty()) {
    return;
  }
  json t = json::array();
  for (const auto& rec : trace) {
    t.push_back(to_json(rec));
  }
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::InvalidConfig, path + ": cannot write trace file");
  }
  out << t.dump(2) << '\n';
}

/// Membership-type problems have a single row aᵀx = b with b > 0.
MembershipInstance<double> as_membership(const ConicProblem<double>& p) {
  if (p.rows() != 1 || !(p.b(0) > 0.0)) {
    throw Error(ErrorKind::PreconditionFailed,
                "this --init needs a single constraint a'x = b with b > 0");
  }
  return {p.c, Vec<double>(p.A.row(0).transpose() / p.b(0)), p.cone};
}

SolverConfig<double> make_config(const std::string& variant, double eta,
                                 double eps, long max_iter, bool checks) {
  SolverConfig<double> cfg;
  cfg.variant = parse_variant(variant);
  cfg.eta = eta;
  cfg.eps = eps;
  cfg.max_iterations = max_iter;
  cfg.invariant_checks = checks;
  cfg.validate();
  return cfg;
}

void fill_standard(RunReport& r, const ConicProblem<double>& p,
                   const SolveOutcome<double>& res, double y_scale) {
  r.status = std::string(to_string(res.status));
  r.reason = res.reason;
  r.iterations = res.iterations();
  r.theoretical_bound = res.theoretical_bound;
  const auto& it = res.final;
  r.x = to_std(it.x);
  r.y = to_std(it.y / y_scale);
  r.s = to_std(it.s);
  r.primal_objective = p.c.dot(it.x);
  r.dual_objective = p.b.dot(it.y / y_scale);
  r.gap = it.x.dot(it.s);
}

}  // namespace

UpdateStrategy parse_variant(const std::string& name) {
  if (name == "fixed") return UpdateStrategy::Fixed;
  if (name == "adaptive") return UpdateStrategy::Adaptive;
  if (name == "largest") return UpdateStrategy::Largest;
  throw Error(ErrorKind::InvalidConfig,
              "unknown variant \"" + name + "\" (fixed, adaptive, largest)");
}

SosMethod parse_method(const std::string& name) {
  if (name == "two-phase") return SosMethod::TwoPhase;
  if (name == "hsd") return SosMethod::Hsd;
  throw Error(ErrorKind::InvalidConfig,
              "unknown method \"" + name + "\" (two-phase, hsd)");
}

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = make_config(opt.variant, opt.eta, opt.eps, opt.max_iter,
                                 opt.check_invariants);
    const ProblemFile file = load_problem(opt.problem_path);
    const auto& p = file.problem;
    RunReport r;
    r.command = "solve";
    r.config = {{"variant", opt.variant}, {"eta", opt.eta},
                {"eps", opt.eps},         {"init", opt.init},
                {"max_iter", opt.max_iter},
                {"check_invariants", opt.check_invariants}};
    std::vector<TraceRecord<double>> trace;
    SolveStatus status = SolveStatus::Optimal;
    const auto t0 = std::chrono::steady_clock::now();
    if (opt.init == "hsd") {
      auto [emb, st] = build_embedding(p);
      auto res = hsd_solve(emb, std::move(st), cfg);
      const auto ex = extract(emb, res.path.final);
      status = res.path.status;
      r.status = std::string(to_string(status));
      r.reason = res.path.reason;
      r.verdict = std::string(to_string(ex.verdict));
      r.iterations = res.path.iterations();
      r.theoretical_bound = res.path.theoretical_bound;
      r.x = to_std(ex.x);
      r.y = to_std(ex.y);
      r.s = to_std(ex.s);
      r.primal_objective = ex.primal_objective;
      r.dual_objective = ex.dual_objective;
      r.gap = ex.x.dot(ex.s);
      trace = std::move(res.path.trace);
    } else if (opt.init == "membership" || opt.init == "two-phase") {
      const auto inst = as_membership(p);
      Vec<double> x0 = canonical_point(p.cone);
      Iterate<double> start;
      if (opt.init == "membership") {
        x0 /= x0.dot(inst.w);
        start = init_dual_membership(inst, x0, cfg.eta);
      } else {
        SolverConfig<double> p1 = cfg;
        p1.eta = 0.1;
        start = two_phase_start(inst, x0, cfg.eta, p1).start;
      }
      const auto mp = membership_problem(inst);
      auto res = solve(mp, std::move(start), cfg);
      fill_standard(r, p, res, p.b(0));
      status = res.status;
      trace = std::move(res.trace);
    } else if (opt.init == "backwards") {
      if (!file.x0) {
        throw Error(ErrorKind::PreconditionFailed,
                    "--init backwards needs a strictly feasible \"x0\" in the "
                    "problem file");
      }
      auto start = backwards_phase1(p, *file.x0, 0.2, cfg.eta);
      auto res = solve(p, std::move(start), cfg);
      fill_standard(r, p, res, 1.0);
      status = res.status;
      trace = std::move(res.trace);
    } else {
      throw Error(ErrorKind::InvalidConfig,
                  "unknown init \"" + opt.init +
                      "\" (membership, two-phase, backwards, hsd)");
    }
    if (opt.timing) {
      r.seconds = elapsed(t0);
    }
    write_trace(opt.trace_path, trace);
    out << to_json(r).dump(2) << '\n';
    if (!r.reason.empty()) {
      err << "fsipm: " << r.reason << '\n';
    }
    return exit_code(status);
  } catch (const Error& e) {
    err << "fsipm: " << e.what() << '\n';
    return exit_code(e.kind());
  }
}

int cmd_sos(const SosOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = make_config(opt.variant, opt.eta, opt.eps, opt.max_iter,
                                 opt.check_invariants);
    const auto method = parse_method(opt.method);
    SemialgebraicInstance<double> inst =
        opt.instance_path.empty() ? example_instance(opt.example, opt.degree)
                                  : load_instance(opt.instance_path);
    inst.validate();
    const auto res = solve_sos_bound(inst, method, cfg);
    RunReport r;
    r.command = "sos";
    r.config = {{"method", opt.method},   {"variant", opt.variant},
                {"eta", opt.eta},         {"eps", opt.eps},
                {"max_iter", opt.max_iter},
                {"check_invariants", opt.check_invariants},
                {"degree", inst.degree}};
    if (!opt.example.empty() && opt.instance_path.empty()) {
      r.config["example"] = opt.example;
    }
    r.status = std::string(to_string(res.status));
    r.reason = res.reason;
    r.iterations = res.iterations;
    r.gap = res.gap;
    if (res.bound_valid) {
      r.bound = res.bound;
      r.neg_inv_bound = -1.0 / res.bound;
      r.dual_objective = res.bound;
      r.primal_objective = res.primal_objective;
      r.x = to_std(res.lambda);
      const auto cert = certify(inst, res.lambda, res.bound);
      r.certified = cert.certified;
      r.certificate_distance = cert.distance;
    }
    if (opt.timing) {
      r.seconds = res.seconds;
    }
    write_trace(opt.trace_path, res.trace);
    out << to_json(r).dump(2) << '\n';
    if (!res.reason.empty()) {
      err << "fsipm: " << res.reason << '\n';
    }
    /// A run stopped by roundoff still reports a valid bound.
    if (res.within_tolerance) {
      return kOk;
    }
    return exit_code(res.status);
  } catch (const Error& e) {
    err << "fsipm: " << e.what() << '\n';
    return exit_code(e.kind());
  }
}

int cmd_table(const TableOptions& opt, std::ostream& out, std::ostream& err) {
  std::vector<SosMethod> methods;
  SolverConfig<double> cfg;
  try {
    for (const auto& m : opt.methods) {
      methods.push_back(parse_method(m));
    }
    cfg = make_config(opt.variant, opt.eta, opt.eps, 20000, true);
  } catch (const Error& e) {
    err << "fsipm: " << e.what() << '\n';
    return exit_code(e.kind());
  }
  out << kTableHeader << '\n';
  for (const Index d : opt.degrees) {
    for (const auto m : methods) {
      const auto row = conjecture_row<double>(d, m, cfg);
      out << table_row_csv(row, opt.timing) << '\n';
      if (!row.ok && !row.reason.empty()) {
        err << "fsipm: D=" << d << " " << to_string(m) << ": " << row.reason
            << '\n';
      }
    }
  }
  return kOk;
}

}  // namespace fsipm::io
