#pragma once

#include <chrono>
#include <limits>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "fsipm/hsd.hpp"
#include "fsipm/init.hpp"
#include "fsipm/moment_cone.hpp"

namespace fsipm {

/// Chebyshev points of the second kind, −cos(jπ/D) for j = 0..D, ascending.
/// Written as sin(π(2j − D)/(2D)) so that the set is exactly symmetric.
template <typename Scalar = double>
Vec<Scalar> chebyshev_nodes(Index degree) {
  using std::sin;
  if (degree < 1) {
    throw Error(ErrorKind::PreconditionFailed, "degree must be positive");
  }
  const Scalar pi = Scalar(EIGEN_PI);
  Vec<Scalar> t(degree + 1);
  for (Index j = 0; j <= degree; ++j) {
    t(j) = sin(pi * Scalar(2 * j - degree) / Scalar(2 * degree));
  }
  return t;
}

/// Σ cₖTₖ(t) by Clenshaw's recurrence.
template <typename Scalar>
Scalar chebyshev_eval(const Vec<Scalar>& coeffs, Scalar t) {
  Scalar b1(0);
  Scalar b2(0);
  for (Index k = coeffs.size() - 1; k >= 1; --k) {
    const Scalar b0 = coeffs(k) + Scalar(2) * t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  const Scalar c0 = coeffs.size() > 0 ? coeffs(0) : Scalar(0);
  return c0 + t * b1 - b2;
}

template <typename Scalar>
Vec<Scalar> chebyshev_eval(const Vec<Scalar>& coeffs, const Vec<Scalar>& t) {
  Vec<Scalar> out(t.size());
  for (Index j = 0; j < t.size(); ++j) {
    out(j) = chebyshev_eval(coeffs, t(j));
  }
  return out;
}

/// Columns T₀(t), …, T_{k−1}(t).
template <typename Scalar>
Mat<Scalar> chebyshev_vandermonde(const Vec<Scalar>& t, Index k) {
  Mat<Scalar> p(t.size(), k);
  if (k > 0) {
    p.col(0).setOnes();
  }
  if (k > 1) {
    p.col(1) = t;
  }
  for (Index j = 2; j < k; ++j) {
    p.col(j) = Scalar(2) * t.cwiseProduct(p.col(j - 1)) - p.col(j - 2);
  }
  return p;
}

/// Product in the Chebyshev basis via TₘTₙ = (T_{m+n} + T_{|m−n|})/2.
template <typename Scalar>
Vec<Scalar> chebyshev_multiply(const Vec<Scalar>& a, const Vec<Scalar>& b) {
  if (a.size() == 0 || b.size() == 0) {
    return Vec<Scalar>::Zero(1);
  }
  Vec<Scalar> out = Vec<Scalar>::Zero(a.size() + b.size() - 1);
  for (Index i = 0; i < a.size(); ++i) {
    for (Index j = 0; j < b.size(); ++j) {
      const Scalar half = a(i) * b(j) / Scalar(2);
      out(i + j) += half;
      out(i > j ? i - j : j - i) += half;
    }
  }
  return out;
}

/// Index of the last nonzero coefficient (0 for the zero polynomial).
template <typename Scalar>
Index chebyshev_degree(const Vec<Scalar>& coeffs) {
  for (Index k = coeffs.size() - 1; k > 0; --k) {
    if (coeffs(k) != Scalar(0)) {
      return k;
    }
  }
  return 0;
}

/// Lower bound of f over {x ∈ [−1, 1] : gᵢ(x) ≥ 0} at hierarchy degree D,
/// all polynomials given by Chebyshev coefficients.
template <typename Scalar>
struct SemialgebraicInstance {
  Index degree = 0;
  Vec<Scalar> objective;
  std::vector<Vec<Scalar>> constraints;

  void validate() const {
    if (degree < 2 || degree % 2 != 0) {
      throw Error(ErrorKind::InvalidConfig,
                  "degree must be even and at least 2, got " +
                      std::to_string(degree));
    }
    if (chebyshev_degree(objective) > degree) {
      throw Error(ErrorKind::InvalidConfig, "objective degree exceeds D");
    }
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      const Index dg = chebyshev_degree(constraints[i]);
      if (dg > degree) {
        throw Error(ErrorKind::InvalidConfig,
                    "constraint " + std::to_string(i) + " degree exceeds D");
      }
      if ((degree - dg) % 2 != 0) {
        throw Error(ErrorKind::InvalidConfig,
                    "constraint " + std::to_string(i) +
                        ": D - deg g must be even");
      }
    }
  }
};

/// f = 1 − x², g₁ = (1 − x²)³ at degree D.
template <typename Scalar = double>
SemialgebraicInstance<Scalar> stengle_instance(Index degree) {
  Vec<Scalar> f(3);
  f << Scalar(0.5), Scalar(0), Scalar(-0.5);
  const Vec<Scalar> g = chebyshev_multiply(chebyshev_multiply(f, f), f);
  SemialgebraicInstance<Scalar> inst{degree, f, {g}};
  inst.validate();
  return inst;
}

template <typename Scalar>
MomentConeSpec<Scalar> build_moment_cone_spec(
    const SemialgebraicInstance<Scalar>& inst) {
  inst.validate();
  const Index D = inst.degree;
  MomentConeSpec<Scalar> spec;
  spec.nodes = chebyshev_nodes<Scalar>(D);
  spec.blocks.push_back({Vec<Scalar>::Ones(D + 1),
                         chebyshev_vandermonde(spec.nodes, D / 2 + 1)});
  for (const auto& g : inst.constraints) {
    const Index k = (D - chebyshev_degree(g)) / 2 + 1;
    spec.blocks.push_back(
        {chebyshev_eval(g, spec.nodes), chebyshev_vandermonde(spec.nodes, k)});
  }
  return spec;
}

template <typename Scalar>
Cone<Scalar> build_moment_cone(const SemialgebraicInstance<Scalar>& inst) {
  return moment(build_moment_cone_spec(inst));
}

/// min fᵀλ s.t. 1ᵀλ = 1, λ in the pseudo-moment cone (node-value basis).
template <typename Scalar>
ConicProblem<Scalar> build_lower_bound_problem(
    const SemialgebraicInstance<Scalar>& inst) {
  auto cone = build_moment_cone(inst);
  const auto nodes = chebyshev_nodes<Scalar>(inst.degree);
  Mat<Scalar> a = Mat<Scalar>::Ones(1, inst.degree + 1);
  Vec<Scalar> b = Vec<Scalar>::Ones(1);
  return ConicProblem<Scalar>(std::move(a), std::move(b),
                              chebyshev_eval(inst.objective, nodes),
                              std::move(cone));
}

enum class SosMethod { TwoPhase, Hsd };

constexpr std::string_view to_string(SosMethod m) {
  return m == SosMethod::TwoPhase ? "two-phase" : "hsd";
}

template <typename Scalar>
struct SosResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  std::string reason;
  /// The dual objective, a lower bound on min f.
  Scalar bound{};
  /// Primal pseudo-moment vector, normalized to 1ᵀλ = 1.
  Vec<Scalar> lambda;
  Scalar primal_objective{};
  /// xᵀs at the reported iterate.
  Scalar gap{};
  /// True when bound and λ come from an iterate that passed every check, even
  /// if the run later stopped on a numerical failure.
  bool bound_valid = false;
  /// bound_valid and xᵀs/ν ≤ ε at the reported iterate.
  bool within_tolerance = false;
  long iterations = 0;
  long phase1_iterations = 0;
  double seconds = 0.0;
  std::vector<TraceRecord<Scalar>> trace;
};

/// Two-phase: phase 1 with radius 1/10 from the normalized Clenshaw–Curtis
/// point, then the main solve. HSD: the embedding anchored at the same point.
/// The phase 1 run uses the same τ-update strategy as the main solve.
template <typename Scalar>
SosResult<Scalar> solve_sos_bound(const SemialgebraicInstance<Scalar>& inst,
                                  SosMethod method,
                                  const SolverConfig<Scalar>& config) {
  const auto t0 = std::chrono::steady_clock::now();
  auto problem = build_lower_bound_problem(inst);
  const Vec<Scalar> x0 = canonical_point(problem.cone);
  SosResult<Scalar> out;
  try {
    if (method == SosMethod::TwoPhase) {
      MembershipInstance<Scalar> mi{problem.c, Vec<Scalar>(problem.A.row(0)),
                                    problem.cone};
      SolverConfig<Scalar> p1 = config;
      p1.eta = Scalar(0.1);
      auto start = two_phase_start(mi, x0, config.eta, p1);
      out.phase1_iterations = start.phase1.iterations;
      auto res = solve(problem, std::move(start.start), config);
      out.status = res.status;
      out.reason = res.reason;
      out.iterations = res.iterations() + out.phase1_iterations;
      out.bound = res.final.y(0);
      out.lambda = res.final.x / res.final.x.sum();
      out.gap = res.final.x.dot(res.final.s);
      out.bound_valid = true;
      out.trace = std::move(res.trace);
    } else {
      auto [emb, st] = build_embedding(
          problem, x0, Vec<Scalar>(Vec<Scalar>::Zero(1)));
      auto res = hsd_solve(emb, std::move(st), config);
      out.status = res.path.status;
      out.reason = res.path.reason;
      out.iterations = res.path.iterations();
      const auto ex = extract(emb, res.path.final);
      if (ex.verdict != HsdVerdict::Solution &&
          out.status != SolveStatus::NumericalFailure) {
        out.status = SolveStatus::NumericalFailure;
        out.reason = "embedding did not yield a solution";
      }
      if (ex.verdict == HsdVerdict::Solution) {
        out.bound = ex.y(0);
        out.lambda = ex.x / ex.x.sum();
        out.gap = res.path.final.x_ext().dot(res.path.final.s_ext());
        out.bound_valid = true;
      }
      out.trace = std::move(res.path.trace);
    }
  } catch (const Error& e) {
    out.status = SolveStatus::NumericalFailure;
    out.reason = e.what();
  }
  if (out.lambda.size() > 0) {
    out.primal_objective = problem.c.dot(out.lambda);
  }
  out.within_tolerance =
      out.bound_valid && out.gap <= config.eps * problem.cone.nu();
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
  return out;
}

template <typename Scalar>
struct Certificate {
  bool certified = false;
  Scalar tau{};
  /// ‖s + τg(λ)‖*_λ / τ, or +∞ when λ is not interior or τ ≤ 0.
  Scalar distance{};
};

/// λ certifies f − γ ≥ 0 on the set when, after rescaling to 1ᵀλ = 1,
/// s = f − γ·1 (node values) satisfies ‖s + τg(λ)‖*_λ ≤ τ for τ = λᵀs/ν.
template <typename Scalar>
Certificate<Scalar> certify(const SemialgebraicInstance<Scalar>& inst,
                            const Vec<Scalar>& lambda, Scalar gamma) {
  Certificate<Scalar> out;
  out.distance = std::numeric_limits<Scalar>::infinity();
  const auto problem = build_lower_bound_problem(inst);
  if (lambda.size() != problem.cols() || !(lambda.sum() > Scalar(0))) {
    return out;
  }
  const Vec<Scalar> l = lambda / lambda.sum();
  BarrierEval<Scalar> e;
  try {
    e = eval(problem.cone, l);
  } catch (const Error&) {
    return out;
  }
  const Vec<Scalar> s = problem.c - gamma * Vec<Scalar>::Ones(l.size());
  out.tau = l.dot(s) / e.nu;
  if (!(out.tau > Scalar(0))) {
    return out;
  }
  out.distance = neighborhood_distance(e, s, out.tau) / out.tau;
  out.certified = out.distance <= Scalar(1);
  return out;
}

template <typename Scalar>
struct TableRow {
  Index degree = 0;
  SosMethod method = SosMethod::TwoPhase;
  bool ok = false;
  Scalar bound{};
  Scalar neg_inv_bound{};
  Scalar conjectured{};
  long iterations = 0;
  double seconds = 0.0;
  std::string reason;
};

/// (D/2)(D/2 − 2), the conjectured value of −1/γ* for the Stengle example.
template <typename Scalar>
Scalar conjectured_value(Index degree) {
  const Scalar d = Scalar(degree / 2);
  return d * (d - Scalar(2));
}

template <typename Scalar>
TableRow<Scalar> conjecture_row(Index degree, SosMethod method,
                                const SolverConfig<Scalar>& config) {
  TableRow<Scalar> row;
  row.degree = degree;
  row.method = method;
  row.conjectured = conjectured_value<Scalar>(degree);
  try {
    const auto inst = stengle_instance<Scalar>(degree);
    const auto res = solve_sos_bound(inst, method, config);
    row.iterations = res.iterations;
    row.seconds = res.seconds;
    row.bound = res.bound;
    row.neg_inv_bound = -Scalar(1) / res.bound;
    row.ok = res.within_tolerance;
    row.reason = res.reason;
  } catch (const Error& e) {
    row.ok = false;
    row.reason = e.what();
  }
  return row;
}

}  // namespace fsipm
