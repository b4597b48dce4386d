#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fsipm/core.hpp"

namespace fsipm {

/// min tᵀx s.t. wᵀx = 1, x ∈ 𝒦, with w ∈ (𝒦*)°.
template <typename Scalar>
struct MembershipInstance {
  Vec<Scalar> t;
  Vec<Scalar> w;
  Cone<Scalar> cone;
};

template <typename Scalar>
ConicProblem<Scalar> membership_problem(const MembershipInstance<Scalar>& inst) {
  Mat<Scalar> a = inst.w.transpose();
  Vec<Scalar> b = Vec<Scalar>::Ones(1);
  return ConicProblem<Scalar>(std::move(a), std::move(b), inst.t, inst.cone);
}

/// Well-centered start for min tᵀx s.t. wᵀx = 1 from an interior x₀ with
/// x₀ᵀw = 1 and r = ‖νw + g(x₀)‖*_{x₀} < η:
///
///   y₀ = x₀ᵀt − ν‖t − (x₀ᵀt)w‖*_{x₀}/(η − r),  s₀ = t − y₀w,  τ₀ = x₀ᵀs₀/ν.
///
/// When t is parallel to w the bound is vacuous and τ₀ = 1 is used.
template <typename Scalar>
Iterate<Scalar> init_dual_membership(const MembershipInstance<Scalar>& inst,
                                     const Vec<Scalar>& x0, Scalar eta) {
  using std::abs;
  if (!(eta > Scalar(0)) || eta > Scalar(0.25)) {
    throw Error(ErrorKind::InvalidConfig, "eta must lie in (0, 1/4]");
  }
  if (x0.size() != inst.cone.dimension() || inst.w.size() != x0.size() ||
      inst.t.size() != x0.size()) {
    throw Error(ErrorKind::DimensionMismatch, "membership instance dimensions");
  }
  if (abs(x0.dot(inst.w) - Scalar(1)) > Scalar(1e-10)) {
    throw Error(ErrorKind::PreconditionFailed, "x0'w must equal 1");
  }
  const auto e = eval(inst.cone, x0);
  const Scalar nu = e.nu;
  const Scalar r = dual_local_norm(e, Vec<Scalar>(nu * inst.w + e.gradient));
  if (!(r < eta)) {
    throw Error(ErrorKind::PreconditionFailed,
                "||nu w + g(x0)||* = " + std::to_string(double(r)) +
                    " is not below eta; use w = -g(x0)/nu");
  }
  const Scalar xt = x0.dot(inst.t);
  const Scalar numer = dual_local_norm(e, Vec<Scalar>(inst.t - xt * inst.w));
  const Scalar scale = dual_local_norm(e, inst.t);
  Scalar tau0 = numer / (eta - r);
  if (numer <= Scalar(1e-12) * scale || !(tau0 > Scalar(0))) {
    tau0 = Scalar(1);
  }
  Vec<Scalar> y(1);
  y(0) = xt - nu * tau0;
  Vec<Scalar> s = inst.t - y(0) * inst.w;
  auto problem = membership_problem(inst);
  auto it = make_iterate(problem, x0, std::move(y), std::move(s), Scalar(0));
  it.tau = x0.dot(it.s) / nu;
  return it;
}

template <typename Scalar>
struct Phase1Setup {
  ConicProblem<Scalar> problem;
  Iterate<Scalar> start;
  /// e = −g(x₀)/ν
  Vec<Scalar> e;
  /// The objective direction w of the instance being initialized.
  Vec<Scalar> w;
};

/// Auxiliary pair min νwᵀx s.t. eᵀx = 1 with e = −g(x₀)/ν, started via the
/// membership construction with target νw and radius η̃ (exact here since
/// νe + g(x₀) = 0). A start with y₀ > 0 is moved to y₀ = 0, which the
/// construction permits because any smaller y₀ stays in the neighborhood.
template <typename Scalar>
Phase1Setup<Scalar> build_phase1_problem(const Vec<Scalar>& x0,
                                         const Vec<Scalar>& w,
                                         const Cone<Scalar>& cone,
                                         Scalar eta_tilde = Scalar(0.1)) {
  const auto ev = eval(cone, x0);
  const Scalar nu = ev.nu;
  Vec<Scalar> e = -ev.gradient / nu;
  MembershipInstance<Scalar> aux{Vec<Scalar>(nu * w), e, cone};
  const Vec<Scalar> x0n = x0 / x0.dot(e);
  auto start = init_dual_membership(aux, x0n, eta_tilde);
  auto problem = membership_problem(aux);
  if (start.y(0) > Scalar(0)) {
    Vec<Scalar> y = Vec<Scalar>::Zero(1);
    Vec<Scalar> s = aux.t;
    start = make_iterate(problem, x0n, std::move(y), std::move(s), Scalar(0));
    start.tau = x0n.dot(start.s) / nu;
  }
  return {std::move(problem), std::move(start), std::move(e), w};
}

template <typename Scalar>
struct Phase1Report {
  Vec<Scalar> x;
  Scalar y{};
  Vec<Scalar> s;
  /// Target τ of the final (possibly damped) step.
  Scalar tau{};
  Scalar alpha{};
  Scalar mu{};
  Vec<Scalar> x_over_mu;
  Scalar eta_tilde{};
  long iterations = 0;
  /// ‖νw + g(x/μ)‖*_{x/μ}
  Scalar centering{};
  /// Distance of the final point at (1−ϑ)τ, relative to (1−ϑ)τ.
  Scalar damped_distance{};
  /// Admissible range of mu. Under the fixed update this is
  /// [(1 − η̃²/ν)τ, τ/(1−ϑ)]; other updates widen it to cover the τ and
  /// radius of the step that produced the last full iterate.
  Scalar bracket_lo{};
  Scalar bracket_hi{};
  std::vector<TraceRecord<Scalar>> trace;
};

/// Follows the auxiliary central path until the dual variable reaches 0,
/// damping the last Newton step so that y lands on 0 exactly. The τ-update
/// strategy comes from `config` (its eta is the radius η̃ ≤ 1/10). Under the
/// largest update, trial values whose step would overshoot y = 0 are
/// rejected, and if even the safe value is rejected the ordinary full step
/// with τ⁺ = (1−ϑ)τ is taken.
template <typename Scalar>
Phase1Report<Scalar> phase1_solve(const Phase1Setup<Scalar>& setup,
                                  const SolverConfig<Scalar>& config) {
  using std::sqrt;
  config.validate();
  const Scalar eta = config.eta;
  if (eta > Scalar(0.1)) {
    throw Error(ErrorKind::InvalidConfig, "phase 1 radius must be <= 1/10");
  }
  const auto& problem = setup.problem;
  StandardModel<Scalar> model(problem);
  const Scalar nu = model.nu();
  const Scalar vartheta = theta_fixed(nu, eta);
  if (model.distance(setup.start, setup.start.tau) >
      eta * setup.start.tau * (Scalar(1) + Scalar(1e-10))) {
    throw Error(ErrorKind::StartNotInNeighborhood, "phase 1 start");
  }

  Phase1Report<Scalar> report;
  report.eta_tilde = eta;
  Iterate<Scalar> st = setup.start;
  Scalar alpha = Scalar(0);
  Scalar final_tau = st.tau;
  bool done = st.y(0) >= Scalar(0);
  /// τ of the Newton direction that produced st, and the pre-step radius.
  Scalar prev_tau_dir = st.tau;
  Scalar prev_radius = model.distance(st, st.tau) / st.tau;

  long k = 0;
  while (!done) {
    if (k >= config.max_iterations) {
      throw Error(ErrorKind::IterationLimit, "phase 1 did not reach y = 0");
    }
    const Scalar tau = st.tau;
    auto d = model.direction(st, tau);
    const Scalar y = st.y(0);
    const Scalar y_full = y + d.dy(0);
    Iterate<Scalar> cand;
    Scalar tau_new = tau;
    TraceRecord<Scalar> rec;
    rec.iteration = k;
    rec.dx_norm = local_norm(st.eval, d.dx);
    rec.ds_norm = dual_local_norm(st.eval, d.ds);
    try {
      if (y_full >= Scalar(0)) {
        alpha = y_full > Scalar(0) ? -y / d.dy(0) : Scalar(1);
        cand = model.step(st, d, alpha);
        cand.y(0) = Scalar(0);
        cand.s = problem.c;
        cand.mu = cand.x.dot(cand.s) / nu;
        rec.damped = alpha < Scalar(1);
        rec.alpha = alpha;
        final_tau = tau;
        done = true;
      } else if (config.variant == UpdateStrategy::Largest) {
        auto r = detail::largest_update(
            model, st, config,
            [](const Iterate<Scalar>& c) { return c.y(0) < Scalar(0); });
        Scalar tau_dir = tau;
        if (r) {
          tau_new = tau_dir = r->tau;
          cand = std::move(r->candidate);
        } else {
          cand = model.step(st, d, Scalar(1));
          tau_new = tau_fixed(tau, nu, eta);
        }
        prev_radius = std::max(eta, model.distance(st, tau_dir) / tau_dir);
        prev_tau_dir = tau_dir;
      } else {
        prev_radius = std::max(eta, model.distance(st, tau) / tau);
        prev_tau_dir = tau;
        cand = model.step(st, d, Scalar(1));
        tau_new = config.variant == UpdateStrategy::Fixed
                      ? tau_fixed(tau, nu, eta)
                      : tau_adaptive(cand, nu, eta);
      }
    } catch (const Error& e) {
      throw Error(ErrorKind::NumericalFailure,
                  "phase 1 iteration " + std::to_string(k) + ": " + e.what());
    }
    if (!done) {
      cand.tau = tau_new;
      const Scalar dist = model.distance(cand, tau_new);
      if (config.invariant_checks &&
          dist > eta * tau_new * (Scalar(1) + detail::kNeighborhoodSlack<Scalar>)) {
        throw Error(ErrorKind::NumericalFailure,
                    "phase 1 iteration " + std::to_string(k) +
                        ": neighborhood after update");
      }
      rec.distance = dist;
    }
    rec.tau = done ? final_tau : tau_new;
    rec.gap = cand.x.dot(cand.s);
    rec.mu = rec.gap / nu;
    report.trace.push_back(rec);
    st = std::move(cand);
    ++k;
  }
  if (k == 0) {
    final_tau = st.tau;
  }

  report.iterations = k;
  report.alpha = alpha;
  report.tau = final_tau;
  report.x = st.x;
  report.y = st.y(0);
  report.s = st.s;
  report.mu = st.x.dot(st.s) / nu;
  report.x_over_mu = st.x / report.mu;

  const auto scaled = eval(problem.cone, report.x_over_mu);
  report.centering =
      dual_local_norm(scaled, Vec<Scalar>(nu * setup.w + scaled.gradient));
  if (!(report.centering < Scalar(0.25))) {
    throw Error(ErrorKind::NumericalFailure,
                "phase 1 result is not well centered: " +
                    std::to_string(double(report.centering)));
  }
  const Scalar slack(1e-8);
  report.bracket_lo =
      std::min((Scalar(1) - eta * eta / nu) * final_tau,
               (Scalar(1) - prev_radius * prev_radius / nu) * prev_tau_dir);
  report.bracket_hi =
      std::max(final_tau / (Scalar(1) - vartheta), prev_tau_dir);
  if (report.mu < report.bracket_lo * (Scalar(1) - slack) ||
      report.mu > report.bracket_hi * (Scalar(1) + slack)) {
    throw Error(ErrorKind::NumericalFailure,
                "phase 1 normalized gap outside its bracket");
  }
  const Scalar tau_plus = (Scalar(1) - vartheta) * final_tau;
  report.damped_distance =
      neighborhood_distance(st.eval, st.s, tau_plus) / tau_plus;
  if (report.damped_distance > Scalar(2) * eta * (Scalar(1) + slack)) {
    throw Error(ErrorKind::NumericalFailure,
                "phase 1 damped step left the 2 eta neighborhood");
  }
  return report;
}

/// Turns a phase 1 result into a start for min tᵀx s.t. wᵀx = 1.
template <typename Scalar>
Iterate<Scalar> init_after_phase1(const Phase1Report<Scalar>& report,
                                  const MembershipInstance<Scalar>& inst,
                                  Scalar eta) {
  const Vec<Scalar> x0 = report.x_over_mu / report.x_over_mu.dot(inst.w);
  return init_dual_membership(inst, x0, eta);
}

template <typename Scalar>
struct TwoPhaseStart {
  Phase1Report<Scalar> phase1;
  Iterate<Scalar> start;
};

/// Phase 1 from an interior x₀ (any scaling), then the membership start.
template <typename Scalar>
TwoPhaseStart<Scalar> two_phase_start(const MembershipInstance<Scalar>& inst,
                                      const Vec<Scalar>& x0, Scalar eta,
                                      const SolverConfig<Scalar>& phase1_config) {
  auto setup = build_phase1_problem(x0, inst.w, inst.cone, phase1_config.eta);
  auto report = phase1_solve(setup, phase1_config);
  auto start = init_after_phase1(report, inst, eta);
  return {std::move(report), std::move(start)};
}

/// Single-equality reformulation of a problem with a known bound zᵀx < U on
/// its feasible set, z ∈ (𝒦*)°. Coordinates u parametrize
/// {(x, ξ, ζ) ∈ 𝒦 × ℝ₊² : zᵀx + ξ − Uζ = 0, Ax − bζ = 0} through an
/// orthonormal kernel basis Z.
template <typename Scalar>
struct BoundedTransform {
  ConicProblem<Scalar> problem;
  NullspaceBasis<Scalar> basis;
  Index n = 0;
  Scalar bound{};
  Vec<Scalar> z;

  /// x ↦ coordinates of (x, U − zᵀx, 1).
  Vec<Scalar> lift(const Vec<Scalar>& x) const {
    Vec<Scalar> full(n + 2);
    full.head(n) = x;
    full(n) = bound - z.dot(x);
    full(n + 1) = Scalar(1);
    return basis.basis.transpose() * full;
  }

  Vec<Scalar> ambient(const Vec<Scalar>& u) const { return basis.basis * u; }

  Vec<Scalar> restrict(const Vec<Scalar>& u) const {
    return ambient(u).head(n);
  }
};

template <typename Scalar>
BoundedTransform<Scalar> transform_bounded(const ConicProblem<Scalar>& problem,
                                           const Vec<Scalar>& z, Scalar bound) {
  const Index n = problem.cols();
  const Index m = problem.rows();
  if (z.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "z must match the cone dimension");
  }
  Mat<Scalar> hom = Mat<Scalar>::Zero(m + 1, n + 2);
  hom.row(0).head(n) = z.transpose();
  hom(0, n) = Scalar(1);
  hom(0, n + 1) = -bound;
  hom.bottomLeftCorner(m, n) = problem.A;
  hom.col(n + 1).tail(m) = -problem.b;
  auto basis = nullspace(hom);
  if (basis.dimension() == 0) {
    throw Error(ErrorKind::EmptyKernel,
                "the homogeneous system has only the trivial solution");
  }
  auto cone = restricted(product<Scalar>({problem.cone, orthant<Scalar>(2)}),
                         basis);
  Vec<Scalar> c_full = Vec<Scalar>::Zero(n + 2);
  c_full.head(n) = problem.c;
  Vec<Scalar> a_full = Vec<Scalar>::Ones(n + 2);
  a_full.head(n) = z;
  Mat<Scalar> a = (basis.basis.transpose() * a_full).transpose();
  Vec<Scalar> b(1);
  b(0) = bound + Scalar(1);
  Vec<Scalar> c = basis.basis.transpose() * c_full;
  ConicProblem<Scalar> reduced(std::move(a), std::move(b), std::move(c),
                               std::move(cone));
  return {std::move(reduced), std::move(basis), n, bound, z};
}

/// Follows the central path of min −g(x₀)ᵀx s.t. Ax = b backwards
/// (τ⁺ = (1+ϑ)τ, radius η̃) from its on-path start (x₀, 0, −g(x₀)), τ = 1, until
/// (x, y, c − Aᵀy) lies in 𝒩(η, τ) for the original objective.
template <typename Scalar>
Iterate<Scalar> backwards_phase1(const ConicProblem<Scalar>& problem,
                                 const Vec<Scalar>& x0,
                                 Scalar eta_tilde = Scalar(0.2),
                                 Scalar eta = Scalar(0.25),
                                 long max_iterations = -1,
                                 long* iterations = nullptr) {
  using std::sqrt;
  if (!(eta_tilde > Scalar(0)) || eta_tilde > Scalar(1) / Scalar(3)) {
    throw Error(ErrorKind::InvalidConfig, "eta_tilde must lie in (0, 1/3]");
  }
  if (!(eta > Scalar(0)) || eta > Scalar(0.25)) {
    throw Error(ErrorKind::InvalidConfig, "eta must lie in (0, 1/4]");
  }
  const auto e0 = eval(problem.cone, x0);
  if ((problem.A * x0 - problem.b).norm() >
      Scalar(1e-9) * (Scalar(1) + problem.b.norm())) {
    throw Error(ErrorKind::PreconditionFailed, "x0 does not satisfy Ax = b");
  }
  const Scalar nu = e0.nu;
  const Scalar vartheta = theta_fixed(nu, eta_tilde);
  if (max_iterations < 0) {
    max_iterations = static_cast<long>(Scalar(500) * (sqrt(nu) + Scalar(1)));
  }
  ConicProblem<Scalar> aux(problem.A, problem.b, Vec<Scalar>(-e0.gradient),
                           problem.cone);
  StandardModel<Scalar> model(aux);
  Iterate<Scalar> st =
      make_iterate(aux, x0, Vec<Scalar>(Vec<Scalar>::Zero(problem.rows())),
                   Vec<Scalar>(-e0.gradient), Scalar(1));
  for (long k = 0;; ++k) {
    const Vec<Scalar> s = problem.c - problem.A.transpose() * st.y;
    if (neighborhood_distance(st.eval, s, st.tau) <= eta * st.tau) {
      if (iterations) {
        *iterations = k;
      }
      Iterate<Scalar> out = st;
      out.s = s;
      out.mu = out.x.dot(out.s) / nu;
      return out;
    }
    if (k >= max_iterations) {
      throw Error(ErrorKind::IterationLimit,
                  "backwards phase 1 did not reach the original neighborhood");
    }
    try {
      auto d = model.direction(st, st.tau);
      auto cand = model.step(st, d, Scalar(1));
      cand.tau = (Scalar(1) + vartheta) * st.tau;
      if (model.distance(cand, cand.tau) >
          eta_tilde * cand.tau * (Scalar(1) + detail::kNeighborhoodSlack<Scalar>)) {
        throw Error(ErrorKind::NumericalFailure,
                    "auxiliary neighborhood lost at iteration " +
                        std::to_string(k));
      }
      st = std::move(cand);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NumericalFailure) {
        throw;
      }
      throw Error(ErrorKind::NumericalFailure, e.what());
    }
  }
}

}  // namespace fsipm
