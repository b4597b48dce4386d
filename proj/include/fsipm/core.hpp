#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/QR>

#include "fsipm/barrier.hpp"

namespace fsipm {

/// min cᵀx s.t. Ax = b, x ∈ 𝒦 together with its dual
/// max bᵀy s.t. Aᵀy + s = c, s ∈ 𝒦*.
template <typename Scalar>
struct ConicProblem {
  Mat<Scalar> A;
  Vec<Scalar> b;
  Vec<Scalar> c;
  Cone<Scalar> cone;

  ConicProblem(Mat<Scalar> a, Vec<Scalar> b_, Vec<Scalar> c_,
               Cone<Scalar> k)
      : A{std::move(a)}, b{std::move(b_)}, c{std::move(c_)}, cone{std::move(k)} {
    if (A.cols() != cone.dimension() || c.size() != cone.dimension()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "A has " + std::to_string(A.cols()) + " columns, c has " +
                      std::to_string(c.size()) + " entries, cone dimension is " +
                      std::to_string(cone.dimension()));
    }
    if (b.size() != A.rows()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "b has " + std::to_string(b.size()) + " entries, A has " +
                      std::to_string(A.rows()) + " rows");
    }
    if (A.rows() > 0 && numerical_rank(A) < A.rows()) {
      throw Error(ErrorKind::RankDeficient, "A does not have full row rank");
    }
  }

  Index rows() const { return A.rows(); }
  Index cols() const { return A.cols(); }
};

template <typename Scalar>
struct Iterate {
  Vec<Scalar> x;
  Vec<Scalar> y;
  Vec<Scalar> s;
  Scalar tau{};
  BarrierEval<Scalar> eval;
  Scalar mu{};
};

/// Builds an iterate, evaluating the barrier at x.
template <typename Scalar>
Iterate<Scalar> make_iterate(const ConicProblem<Scalar>& problem,
                             Vec<Scalar> x, Vec<Scalar> y, Vec<Scalar> s,
                             Scalar tau) {
  if (y.size() != problem.rows() || s.size() != problem.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "iterate dimensions");
  }
  Iterate<Scalar> it;
  it.eval = eval(problem.cone, x);
  it.mu = x.dot(s) / it.eval.nu;
  it.x = std::move(x);
  it.y = std::move(y);
  it.s = std::move(s);
  it.tau = tau;
  return it;
}

enum class UpdateStrategy { Fixed, Adaptive, Largest };

constexpr std::string_view to_string(UpdateStrategy u) {
  switch (u) {
    case UpdateStrategy::Fixed:
      return "fixed";
    case UpdateStrategy::Adaptive:
      return "adaptive";
    case UpdateStrategy::Largest:
      return "largest";
  }
  return "unknown";
}

template <typename Scalar = double>
struct SolverConfig {
  Scalar eta = Scalar(0.25);
  /// Stop once xᵀs ≤ eps.
  Scalar eps = Scalar(1e-8);
  UpdateStrategy variant = UpdateStrategy::Adaptive;
  long max_iterations = 20000;
  Scalar feas_tol = Scalar(1e-9);
  Scalar shrink = Scalar(0.5);
  int max_trials = 40;
  /// Bisection steps (in log τ) between the last accepted and first rejected
  /// trial of the largest update.
  int refine_steps = 12;
  bool invariant_checks = true;

  void validate() const {
    if (!(eta > Scalar(0)) || eta > Scalar(0.25)) {
      throw Error(ErrorKind::InvalidConfig,
                  "eta must lie in (0, 1/4]; neighborhood preservation is "
                  "only guaranteed for eta <= 1/4");
    }
    if (!(eps > Scalar(0))) {
      throw Error(ErrorKind::InvalidTolerance, "eps must be positive");
    }
    if (!(shrink > Scalar(0)) || !(shrink < Scalar(1))) {
      throw Error(ErrorKind::InvalidConfig, "shrink must lie in (0, 1)");
    }
    if (max_trials < 1 || max_iterations < 0 || refine_steps < 0) {
      throw Error(ErrorKind::InvalidConfig, "iteration limits must be positive");
    }
  }
};

template <typename Scalar>
struct TraceRecord {
  long iteration = 0;
  Scalar tau{};
  Scalar mu{};
  Scalar gap{};
  Scalar distance{};
  bool damped = false;
  Scalar alpha = Scalar(1);
  Scalar dx_norm{};
  Scalar ds_norm{};
  /// Embedding runs only: θ and κξ after the step.
  Scalar theta{};
  Scalar kappa_xi{};
};

enum class SolveStatus { Optimal, Classified, IterationLimit, NumericalFailure };

constexpr std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "Optimal";
    case SolveStatus::Classified:
      return "Classified";
    case SolveStatus::IterationLimit:
      return "IterationLimit";
    case SolveStatus::NumericalFailure:
      return "NumericalFailure";
  }
  return "Unknown";
}

template <typename State, typename Scalar>
struct PathOutcome {
  SolveStatus status = SolveStatus::NumericalFailure;
  std::string reason;
  State final;
  std::vector<TraceRecord<Scalar>> trace;
  long theoretical_bound = 0;

  long iterations() const { return static_cast<long>(trace.size()); }
};

template <typename Scalar>
using SolveOutcome = PathOutcome<Iterate<Scalar>, Scalar>;

template <typename Scalar>
struct NewtonDirection {
  Vec<Scalar> dx;
  Vec<Scalar> dy;
  Vec<Scalar> ds;
};

/// ‖s + τg(x)‖*ₓ
template <typename Scalar>
Scalar neighborhood_distance(const BarrierEval<Scalar>& e,
                             const Vec<Scalar>& s, Scalar tau) {
  if (s.size() != e.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "slack dimension");
  }
  if (!(tau > Scalar(0))) {
    throw Error(ErrorKind::PreconditionFailed, "tau must be positive");
  }
  return dual_local_norm(e, Vec<Scalar>(s + tau * e.gradient));
}

/// ϑ = (η/2)/(√ν + 1)
template <typename Scalar>
Scalar theta_fixed(Scalar nu, Scalar eta) {
  using std::sqrt;
  return (eta / Scalar(2)) / (sqrt(nu) + Scalar(1));
}

template <typename Scalar>
Scalar tau_fixed(Scalar tau, Scalar nu, Scalar eta) {
  return (Scalar(1) - theta_fixed(nu, eta)) * tau;
}

/// Smallest τ⁺ with ‖s⁺ + τ⁺g(x⁺)‖* ≤ ητ⁺, given a = (x⁺)ᵀs⁺ and
/// b = ‖s⁺‖*_{x⁺}. Evaluated as b²/(a + √disc), the cancellation-free form of
/// (a − √disc)/(ν − η²).
template <typename Scalar>
Scalar tau_adaptive(Scalar a, Scalar b, Scalar nu, Scalar eta) {
  using std::sqrt;
  if (!(a > Scalar(0))) {
    throw Error(ErrorKind::PreconditionFailed,
                "duality gap of the candidate is not positive");
  }
  const Scalar q = nu - eta * eta;
  Scalar disc = a * a - q * b * b;
  if (disc < Scalar(0)) {
    if (disc < -Scalar(1e-12) * a * a) {
      throw Error(ErrorKind::NegativeDiscriminant,
                  "candidate lies outside every neighborhood");
    }
    disc = Scalar(0);
  }
  return b * b / (a + sqrt(disc));
}

template <typename Scalar>
Scalar tau_adaptive(const BarrierEval<Scalar>& e, const Vec<Scalar>& s,
                    Scalar eta) {
  /// Same quadratic with −sᵀH⁻¹g and gᵀH⁻¹g in place of xᵀs and ν, so the
  /// root agrees with the computed local norm.
  const Vec<Scalar> hg = e.factor.solve(e.gradient);
  Scalar tau = tau_adaptive(Scalar(-s.dot(hg)), dual_local_norm(e, s),
                            Scalar(e.gradient.dot(hg)), eta);
  /// The root sits on the boundary; nudge it inward when roundoff in the
  /// directly computed norm puts it just outside.
  Scalar step = Scalar(1e-12);
  for (int k = 0; k < 30; ++k) {
    if (neighborhood_distance(e, s, tau) <= eta * tau * (Scalar(1) + Scalar(1e-12))) {
      break;
    }
    tau *= Scalar(1) + step;
    step *= Scalar(2);
  }
  return tau;
}

template <typename Scalar>
Scalar tau_adaptive(const Iterate<Scalar>& candidate, Scalar nu, Scalar eta) {
  (void)nu;
  return tau_adaptive(candidate.eval, candidate.s, eta);
}

/// ⌈(2/η)(√ν+1)·ln(τ₀ν/ε)⌉ + 1
template <typename Scalar>
long theoretical_iteration_bound(Scalar tau0, Scalar nu, Scalar eta,
                                 Scalar eps) {
  using std::ceil;
  using std::log;
  using std::sqrt;
  if (!(tau0 > 0) || !(nu > 0) || !(eta > 0) || !(eps > 0)) {
    throw Error(ErrorKind::PreconditionFailed, "arguments must be positive");
  }
  const Scalar ratio = tau0 * nu / eps;
  if (ratio < Scalar(1)) {
    throw Error(ErrorKind::InvalidTolerance,
                "eps exceeds the initial duality gap bound");
  }
  return static_cast<long>(
             ceil((Scalar(2) / eta) * (sqrt(nu) + Scalar(1)) * log(ratio))) +
         1;
}

/// Solves AΔx = 0, AᵀΔy + Δs = 0, τHΔx + Δs = −(s + τg) for the target τ.
///
/// With H = LLᵀ, W = L⁻¹Aᵀ and v = L⁻¹(s + τg), Δy is the least-squares
/// solution of WΔy ≈ v (so (AH⁻¹Aᵀ)Δy = AH⁻¹(s + τg)), computed from a QR
/// factorization of W so that the residual v − WΔy is orthogonal to range(W)
/// to working precision.
template <typename Scalar>
NewtonDirection<Scalar> newton_direction(const ConicProblem<Scalar>& problem,
                                         const Iterate<Scalar>& it,
                                         Scalar tau) {
  const auto& e = it.eval;
  const Vec<Scalar> r = it.s + tau * e.gradient;
  const Vec<Scalar> v = e.factor.forward(r);
  const Index m = problem.rows();
  const Index n = problem.cols();

  NewtonDirection<Scalar> d;
  if (m == 0) {
    d.dy = Vec<Scalar>::Zero(0);
    d.ds = Vec<Scalar>::Zero(n);
    Vec<Scalar> w = -v;
    e.factor.lower().transpose().template triangularView<Eigen::Upper>()
        .solveInPlace(w);
    d.dx = w / tau;
    return d;
  }

  const Mat<Scalar> w = e.factor.forward(problem.A.transpose());
  Eigen::HouseholderQR<Mat<Scalar>> qr(w);
  const Mat<Scalar> rr =
      qr.matrixQR().topRows(m).template triangularView<Eigen::Upper>();
  const Scalar rmax = rr.diagonal().cwiseAbs().maxCoeff();
  for (Index i = 0; i < m; ++i) {
    using std::abs;
    if (!(abs(rr(i, i)) > Scalar(1e-14) * rmax)) {
      throw Error(ErrorKind::NotPositiveDefinite,
                  "Schur complement is singular at pivot " +
                      std::to_string(i + 1),
                  i + 1);
    }
  }
  Vec<Scalar> qtv = qr.householderQ().adjoint() * v;
  d.dy = rr.template triangularView<Eigen::Upper>().solve(qtv.head(m));
  // v − WΔy = Q·(0, (Qᵀv)_tail)
  qtv.head(m).setZero();
  Vec<Scalar> resid = qr.householderQ() * qtv;
  e.factor.lower().transpose().template triangularView<Eigen::Upper>()
      .solveInPlace(resid);
  d.dx = -resid / tau;
  d.ds = -problem.A.transpose() * d.dy;
  return d;
}

template <typename Scalar>
NewtonDirection<Scalar> newton_direction(const ConicProblem<Scalar>& problem,
                                         const Iterate<Scalar>& it) {
  return newton_direction(problem, it, it.tau);
}

/// (x + αΔx, y + αΔy, s + αΔs) with a fresh barrier evaluation; τ is kept.
template <typename Scalar>
Iterate<Scalar> take_step(const ConicProblem<Scalar>& problem,
                          const Iterate<Scalar>& it,
                          const NewtonDirection<Scalar>& d, Scalar alpha) {
  if (!(alpha > Scalar(0)) || alpha > Scalar(1)) {
    throw Error(ErrorKind::PreconditionFailed, "step size must lie in (0, 1]");
  }
  return make_iterate(problem, Vec<Scalar>(it.x + alpha * d.dx),
                      Vec<Scalar>(it.y + alpha * d.dy),
                      Vec<Scalar>(it.s + alpha * d.ds), it.tau);
}

/// Relative residuals of the primal and dual equality constraints.
template <typename Scalar>
Scalar feasibility_residual(const ConicProblem<Scalar>& problem,
                            const Iterate<Scalar>& it) {
  const Scalar primal = (problem.A * it.x - problem.b).norm() /
                        (Scalar(1) + problem.b.norm());
  const Scalar dual =
      (problem.A.transpose() * it.y + it.s - problem.c).norm() /
      (Scalar(1) + problem.c.norm());
  return std::max(primal, dual);
}

template <typename Scalar>
struct DirectionNorms {
  /// ‖Δx‖ₓ
  Scalar dx;
  /// ‖Δs‖*ₓ
  Scalar ds;
  /// ΔxᵀΔs
  Scalar cross;
  /// ‖Δx‖·‖Δs‖ in the Euclidean norm.
  Scalar scale;
};

/// Path-following model for the standard primal-dual pair.
template <typename Scalar>
class StandardModel {
 public:
  using State = Iterate<Scalar>;
  using Direction = NewtonDirection<Scalar>;

  explicit StandardModel(const ConicProblem<Scalar>& problem)
      : problem_{problem}, nu_{problem.cone.nu()} {}

  Scalar nu() const { return nu_; }

  Direction direction(const State& st, Scalar tau) const {
    return newton_direction(problem_, st, tau);
  }

  State step(const State& st, const Direction& d, Scalar alpha) const {
    return take_step(problem_, st, d, alpha);
  }

  Scalar distance(const State& st, Scalar tau) const {
    return neighborhood_distance(st.eval, st.s, tau);
  }

  Scalar gap(const State& st) const { return st.x.dot(st.s); }

  Scalar adaptive_tau(const State& st, Scalar eta) const {
    return tau_adaptive(st.eval, st.s, eta);
  }

  void annotate(TraceRecord<Scalar>&, const State&) const {}

  DirectionNorms<Scalar> norms(const State& st, const Direction& d) const {
    return {local_norm(st.eval, d.dx), dual_local_norm(st.eval, d.ds),
            d.dx.dot(d.ds), d.dx.norm() * d.ds.norm()};
  }

  Scalar residual(const State& st) const {
    return feasibility_residual(problem_, st);
  }

  /// Floating-point error scale of the post-step gap (x+Δx)ᵀ(s+Δs).
  Scalar gap_roundoff(const State& st, const Direction& d) const {
    const Vec<Scalar> ax = st.x.cwiseAbs() + d.dx.cwiseAbs();
    const Vec<Scalar> as = st.s.cwiseAbs() + d.ds.cwiseAbs();
    return Eigen::NumTraits<Scalar>::epsilon() * ax.dot(as);
  }

  void set_tau(State& st, Scalar tau) const { st.tau = tau; }

  std::optional<std::string> check(const State&) const { return {}; }

  bool classified(const State&) const { return false; }

 private:
  const ConicProblem<Scalar>& problem_;
  Scalar nu_;
};

template <typename Direction, typename State, typename Scalar>
struct LargestStep {
  Scalar tau;
  Direction direction;
  State candidate;
  int trials = 0;
};

namespace detail {

/// Backtracking search for the largest τ-reduction: starting at (1−ϑ)τ,
/// multiply by the shrink factor while the full Newton step computed for the
/// trial value lands in 𝒩(η, τ_try). `accept` can veto a candidate.
template <typename Model, typename Accept>
std::optional<LargestStep<typename Model::Direction, typename Model::State,
                          decltype(std::declval<Model>().nu())>>
largest_update(const Model& model, const typename Model::State& st,
               const SolverConfig<decltype(std::declval<Model>().nu())>& config,
               Accept&& accept) {
  using Scalar = decltype(model.nu());
  using Result =
      LargestStep<typename Model::Direction, typename Model::State, Scalar>;
  std::optional<Result> best;
  auto attempt = [&](Scalar tau_try, int trial) -> std::optional<Result> {
    try {
      auto d = model.direction(st, tau_try);
      auto cand = model.step(st, d, Scalar(1));
      if (model.distance(cand, tau_try) <= config.eta * tau_try &&
          accept(cand)) {
        return Result{tau_try, std::move(d), std::move(cand), trial};
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotInterior &&
          e.kind() != ErrorKind::NotPositiveDefinite &&
          e.kind() != ErrorKind::SingularSystem) {
        throw;
      }
    }
    return std::nullopt;
  };
  Scalar tau_try = tau_fixed(st.tau, model.nu(), config.eta);
  int trials = 0;
  bool rejected = false;
  while (trials < config.max_trials) {
    auto r = attempt(tau_try, ++trials);
    if (!r) {
      rejected = true;
      break;
    }
    best = std::move(r);
    tau_try *= config.shrink;
  }
  if (best && rejected) {
    using std::sqrt;
    Scalar hi = best->tau;
    Scalar lo = tau_try;
    for (int k = 0; k < config.refine_steps; ++k) {
      const Scalar mid = sqrt(hi * lo);
      auto r = attempt(mid, ++trials);
      if (r) {
        hi = mid;
        best = std::move(r);
      } else {
        lo = mid;
      }
    }
  }
  if (best) {
    best->trials = trials;
  }
  return best;
}

}  // namespace detail

template <typename Scalar>
LargestStep<NewtonDirection<Scalar>, Iterate<Scalar>, Scalar> tau_largest(
    const ConicProblem<Scalar>& problem, const Iterate<Scalar>& it,
    const SolverConfig<Scalar>& config) {
  StandardModel<Scalar> model(problem);
  auto result = detail::largest_update(model, it, config,
                                       [](const Iterate<Scalar>&) { return true; });
  if (!result) {
    throw Error(ErrorKind::PreconditionFailed,
                "the safe update (1 - theta) tau failed its neighborhood test");
  }
  result->candidate.tau = result->tau;
  return std::move(*result);
}

namespace detail {

template <typename Scalar>
constexpr Scalar kNormSlack = Scalar(1e-8);
template <typename Scalar>
constexpr Scalar kOrthogonalitySlack = Scalar(1e-10);
template <typename Scalar>
constexpr Scalar kNeighborhoodSlack = Scalar(1e-10);
template <typename Scalar>
constexpr Scalar kDriftLimit = Scalar(1e-6);

}  // namespace detail

/// Generic short-step path following loop. The model supplies the Newton
/// direction, steps, and local norms; see StandardModel for the interface.
template <typename Model>
PathOutcome<typename Model::State, decltype(std::declval<Model>().nu())>
follow_path(const Model& model, typename Model::State start,
            const SolverConfig<decltype(std::declval<Model>().nu())>& config) {
  using Scalar = decltype(model.nu());
  using State = typename Model::State;
  using std::max;

  config.validate();
  const Scalar nu = model.nu();
  const Scalar eta = config.eta;
  const Scalar vartheta = theta_fixed(nu, eta);

  PathOutcome<State, Scalar> out;
  if (!(start.tau > Scalar(0))) {
    throw Error(ErrorKind::PreconditionFailed, "tau must be positive");
  }
  const Scalar d0 = model.distance(start, start.tau);
  if (d0 > eta * start.tau * (Scalar(1) + detail::kNeighborhoodSlack<Scalar>)) {
    throw Error(ErrorKind::StartNotInNeighborhood,
                "start distance " + std::to_string(double(d0 / start.tau)) +
                    " tau exceeds eta tau");
  }
  if (model.residual(start) > detail::kDriftLimit<Scalar>) {
    throw Error(ErrorKind::PreconditionFailed, "start is not feasible");
  }
  {
    const Scalar ratio = start.tau * nu / config.eps;
    out.theoretical_bound =
        ratio >= Scalar(1)
            ? theoretical_iteration_bound(start.tau, nu, eta, config.eps)
            : 1;
  }

  State st = std::move(start);
  auto fail = [&](std::string why) {
    out.status = SolveStatus::NumericalFailure;
    out.reason = std::move(why);
    out.final = std::move(st);
    return out;
  };

  for (long k = 0;; ++k) {
    if (model.gap(st) <= config.eps) {
      out.status = SolveStatus::Optimal;
      break;
    }
    if (model.classified(st)) {
      out.status = SolveStatus::Classified;
      break;
    }
    if (k >= config.max_iterations) {
      out.status = SolveStatus::IterationLimit;
      out.reason = "iteration limit reached";
      break;
    }

    const Scalar tau = st.tau;
    Scalar tau_dir = tau;
    Scalar tau_new;
    std::optional<typename Model::Direction> dir;
    std::optional<State> cand;
    try {
      if (config.variant == UpdateStrategy::Largest) {
        auto r = detail::largest_update(model, st, config,
                                        [](const State&) { return true; });
        if (!r) {
          return fail("largest update: the safe value (1 - theta) tau failed");
        }
        tau_new = tau_dir = r->tau;
        dir = std::move(r->direction);
        cand = std::move(r->candidate);
      } else {
        dir = model.direction(st, tau);
        cand = model.step(st, *dir, Scalar(1));
        if (config.variant == UpdateStrategy::Fixed) {
          tau_new = tau_fixed(tau, nu, eta);
        } else {
          tau_new = model.adaptive_tau(*cand, eta);
        }
      }
    } catch (const Error& e) {
      return fail(std::string("iteration ") + std::to_string(k) + ": " +
                  e.what());
    }

    TraceRecord<Scalar> rec;
    rec.iteration = k;
    const auto dn = model.norms(st, *dir);
    rec.dx_norm = dn.dx;
    rec.ds_norm = dn.ds;
    rec.tau = tau_new;
    rec.gap = model.gap(*cand);
    rec.mu = rec.gap / nu;
    rec.distance = model.distance(*cand, tau_new);

    if (config.invariant_checks) {
      const std::string at = "iteration " + std::to_string(k) + ": ";
      /// Direction and gap bounds use radius max(η, δ), where δτ_dir is the
      /// pre-step distance measured at the direction's target.
      const Scalar delta = model.distance(st, tau_dir) / tau_dir;
      const Scalar radius = max(eta, delta);
      const Scalar slack = detail::kNormSlack<Scalar>;
      using std::abs;
      if (abs(dn.cross) >
          detail::kOrthogonalitySlack<Scalar> * (Scalar(1) + dn.scale)) {
        return fail(at + "orthogonality dx's = " +
                    std::to_string(double(dn.cross)));
      }
      if (dn.dx > radius * (Scalar(1) + slack)) {
        return fail(at + "primal direction norm bound");
      }
      if (dn.ds > radius * tau_dir * (Scalar(1) + slack)) {
        return fail(at + "dual direction norm bound");
      }
      const Scalar gap_abs = Scalar(64) * model.gap_roundoff(st, *dir);
      if (rec.gap < tau_dir * (nu - radius * radius) * (Scalar(1) - slack) -
                        gap_abs ||
          rec.gap > tau_dir * nu * (Scalar(1) + slack) + gap_abs) {
        return fail(at + "duality gap bracket");
      }
      if (rec.distance >
          eta * tau_new * (Scalar(1) + detail::kNeighborhoodSlack<Scalar>)) {
        return fail(at + "neighborhood after update");
      }
      if (!(tau_new < tau)) {
        return fail(at + "tau did not decrease");
      }
      if (config.variant != UpdateStrategy::Fixed &&
          tau_new > (Scalar(1) - vartheta) * tau * (Scalar(1) + Scalar(1e-12))) {
        return fail(at + "update worse than the fixed rule");
      }
      if (model.residual(*cand) > config.feas_tol) {
        return fail(at + "linear feasibility");
      }
    }
    if (model.residual(*cand) > detail::kDriftLimit<Scalar>) {
      return fail("iteration " + std::to_string(k) +
                  ": linear feasibility drift");
    }

    model.set_tau(*cand, tau_new);
    model.annotate(rec, *cand);
    if (config.invariant_checks) {
      if (auto why = model.check(*cand)) {
        return fail("iteration " + std::to_string(k) + ": " + *why);
      }
    }
    st = std::move(*cand);
    out.trace.push_back(rec);
  }
  out.final = std::move(st);
  return out;
}

/// Runs the selected path-following variant from a start in 𝒩(η, τ₀) until
/// xᵀs ≤ ε.
template <typename Scalar>
SolveOutcome<Scalar> solve(const ConicProblem<Scalar>& problem,
                           Iterate<Scalar> start,
                           const SolverConfig<Scalar>& config) {
  StandardModel<Scalar> model(problem);
  return follow_path(model, std::move(start), config);
}

}  // namespace fsipm
