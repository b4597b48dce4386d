#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/LU>

#include "fsipm/core.hpp"

namespace fsipm {

/// Homogeneous self-dual model of a conic problem, in the variables
/// v = (y, x, ξ, θ) with slacks (s, κ):
///
///   G v − (0, s, κ, 0) = (0, 0, 0, −x̄ᵀs̄ − 1),
///
///       ⎡  0    A   −b    b̄ ⎤
///   G = ⎢ −Aᵀ   0    c   −c̄ ⎥
///       ⎢  bᵀ  −cᵀ   0    z̄ ⎥
///       ⎣ −b̄ᵀ   c̄ᵀ  −z̄    0 ⎦
///
/// with b̄ = b − Ax̄, c̄ = c − Aᵀȳ − s̄, z̄ = cᵀx̄ − bᵀȳ + 1.
template <typename Scalar>
struct Embedding {
  ConicProblem<Scalar> problem;
  Cone<Scalar> extended_cone;
  Vec<Scalar> xbar;
  Vec<Scalar> ybar;
  Vec<Scalar> sbar;
  Vec<Scalar> bbar;
  Vec<Scalar> cbar;
  Scalar zbar{};
  Mat<Scalar> G;

  Index m() const { return problem.rows(); }
  Index n() const { return problem.cols(); }
  Index size() const { return m() + n() + 2; }
  /// x̄ᵀs̄ + 1
  Scalar rhs() const { return xbar.dot(sbar) + Scalar(1); }
};

template <typename Scalar>
struct HsdState {
  Vec<Scalar> y;
  Vec<Scalar> x;
  Scalar xi{};
  Scalar theta{};
  Vec<Scalar> s;
  Scalar kappa{};
  Scalar tau{};
  /// Barrier of the extended cone at (x, ξ).
  BarrierEval<Scalar> eval;
  /// (xᵀs + ξκ)/(ν + 1)
  Scalar mu{};

  Vec<Scalar> x_ext() const {
    Vec<Scalar> v(x.size() + 1);
    v << x, xi;
    return v;
  }
  Vec<Scalar> s_ext() const {
    Vec<Scalar> v(s.size() + 1);
    v << s, kappa;
    return v;
  }
  Vec<Scalar> stacked() const {
    Vec<Scalar> v(y.size() + x.size() + 2);
    v << y, x, xi, theta;
    return v;
  }
};

template <typename Scalar>
HsdState<Scalar> make_hsd_state(const Embedding<Scalar>& emb, Vec<Scalar> y,
                                Vec<Scalar> x, Scalar xi, Scalar theta,
                                Vec<Scalar> s, Scalar kappa, Scalar tau) {
  HsdState<Scalar> st;
  st.y = std::move(y);
  st.x = std::move(x);
  st.xi = xi;
  st.theta = theta;
  st.s = std::move(s);
  st.kappa = kappa;
  st.tau = tau;
  st.eval = eval(emb.extended_cone, st.x_ext());
  st.mu = (st.x.dot(st.s) + xi * kappa) / st.eval.nu;
  return st;
}

/// Assembles the embedding with anchors x̄ (interior), ȳ and s̄ = −g(x̄), and
/// returns it with the on-path start (ȳ, x̄, 1, 1, s̄, 1) at τ = 1.
template <typename Scalar>
std::pair<Embedding<Scalar>, HsdState<Scalar>> build_embedding(
    const ConicProblem<Scalar>& problem, const Vec<Scalar>& xbar,
    const Vec<Scalar>& ybar) {
  const Index m = problem.rows();
  const Index n = problem.cols();
  if (xbar.size() != n || ybar.size() != m) {
    throw Error(ErrorKind::DimensionMismatch, "embedding anchors");
  }
  const auto e = eval(problem.cone, xbar);
  Embedding<Scalar> emb{problem, extended(problem.cone), xbar, ybar,
                        Vec<Scalar>(-e.gradient), Vec<Scalar>(), Vec<Scalar>(),
                        Scalar(0), Mat<Scalar>()};
  emb.bbar = problem.b - problem.A * xbar;
  emb.cbar = problem.c - problem.A.transpose() * ybar - emb.sbar;
  emb.zbar = problem.c.dot(xbar) - problem.b.dot(ybar) + Scalar(1);

  const Index N = m + n + 2;
  Mat<Scalar>& G = emb.G;
  G = Mat<Scalar>::Zero(N, N);
  const Index ix = m;
  const Index ixi = m + n;
  const Index ith = m + n + 1;
  G.block(0, ix, m, n) = problem.A;
  G.block(0, ixi, m, 1) = -problem.b;
  G.block(0, ith, m, 1) = emb.bbar;
  G.block(ix, 0, n, m) = -problem.A.transpose();
  G.block(ix, ixi, n, 1) = problem.c;
  G.block(ix, ith, n, 1) = -emb.cbar;
  G.block(ixi, 0, 1, m) = problem.b.transpose();
  G.block(ixi, ix, 1, n) = -problem.c.transpose();
  G(ixi, ith) = emb.zbar;
  G.block(ith, 0, 1, m) = -emb.bbar.transpose();
  G.block(ith, ix, 1, n) = emb.cbar.transpose();
  G(ith, ixi) = -emb.zbar;

  auto st = make_hsd_state(emb, ybar, xbar, Scalar(1), Scalar(1), emb.sbar,
                           Scalar(1), Scalar(1));
  return {std::move(emb), std::move(st)};
}

template <typename Scalar>
std::pair<Embedding<Scalar>, HsdState<Scalar>> build_embedding(
    const ConicProblem<Scalar>& problem) {
  return build_embedding(problem, canonical_point(problem.cone),
                         Vec<Scalar>(Vec<Scalar>::Zero(problem.rows())));
}

/// Residual of the embedding equalities, G v − (0, s, κ, 0) − (0, 0, 0, −x̄ᵀs̄ − 1).
template <typename Scalar>
Vec<Scalar> embedding_residual(const Embedding<Scalar>& emb,
                               const HsdState<Scalar>& st) {
  Vec<Scalar> r = emb.G * st.stacked();
  r.segment(emb.m(), emb.n()) -= st.s;
  r(emb.m() + emb.n()) -= st.kappa;
  r(emb.size() - 1) += emb.rhs();
  return r;
}

template <typename Scalar>
struct HsdDirection {
  Vec<Scalar> dy;
  Vec<Scalar> dx;
  Scalar dxi{};
  Scalar dtheta{};
  Vec<Scalar> ds;
  Scalar dkappa{};

  Vec<Scalar> dx_ext() const {
    Vec<Scalar> v(dx.size() + 1);
    v << dx, dxi;
    return v;
  }
  Vec<Scalar> ds_ext() const {
    Vec<Scalar> v(ds.size() + 1);
    v << ds, dkappa;
    return v;
  }
};

/// Newton step toward the τ-point of the embedding's central path:
///
///   G Δv − (0, Δs, Δκ, 0) = 0,
///   τH(x)Δx + Δs = −s − τg(x),
///   (τ/ξ²)Δξ + Δκ = −κ + τ/ξ.
///
/// The last two rows are τH̃Δx̃ + Δs̃ = −s̃ − τg̃ for the barrier f(x) − ln ξ;
/// substituting Δs̃ = (GΔv)ₓ̃ leaves the square system (G + τ·diag(0, H̃, 0))Δv.
template <typename Scalar>
HsdDirection<Scalar> hsd_newton(const Embedding<Scalar>& emb,
                                const HsdState<Scalar>& st, Scalar tau) {
  const Index m = emb.m();
  const Index n = emb.n();
  const Index N = emb.size();
  Mat<Scalar> M = emb.G;
  M.block(m, m, n + 1, n + 1) += tau * st.eval.hessian;
  Vec<Scalar> rhs = Vec<Scalar>::Zero(N);
  rhs.segment(m, n + 1) = -(st.s_ext() + tau * st.eval.gradient);

  Eigen::FullPivLU<Mat<Scalar>> lu(M);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::SingularSystem, "embedding Newton system");
  }
  Vec<Scalar> dv = lu.solve(rhs);
  // One step of iterative refinement.
  dv += lu.solve(Vec<Scalar>(rhs - M * dv));
  const Vec<Scalar> gdv = emb.G * dv;

  HsdDirection<Scalar> d;
  d.dy = dv.head(m);
  d.dx = dv.segment(m, n);
  d.dxi = dv(m + n);
  d.dtheta = dv(N - 1);
  d.ds = gdv.segment(m, n);
  d.dkappa = gdv(m + n);
  return d;
}

template <typename Scalar>
HsdState<Scalar> hsd_step(const Embedding<Scalar>& emb,
                          const HsdState<Scalar>& st,
                          const HsdDirection<Scalar>& d, Scalar alpha) {
  return make_hsd_state(emb, Vec<Scalar>(st.y + alpha * d.dy),
                        Vec<Scalar>(st.x + alpha * d.dx), st.xi + alpha * d.dxi,
                        st.theta + alpha * d.dtheta,
                        Vec<Scalar>(st.s + alpha * d.ds),
                        st.kappa + alpha * d.dkappa, st.tau);
}

/// Classification cutoffs for stopping and extraction.
template <typename Scalar>
struct HsdThresholds {
  /// Stop when ξ/max(ξ, κ, θ) falls below this.
  Scalar ratio = Scalar(1e-6);
  /// Solutions need ξ ≥ xi_min·max(1, κ).
  Scalar xi_min = Scalar(1e-6);
  /// Ray sign tests bᵀy > ray and −cᵀx > ray.
  Scalar ray = Scalar(1e-8);
};

template <typename Scalar>
class HsdModel {
 public:
  using State = HsdState<Scalar>;
  using Direction = HsdDirection<Scalar>;

  HsdModel(const Embedding<Scalar>& emb, Scalar eta,
           HsdThresholds<Scalar> thresholds = {})
      : emb_{emb},
        nu_{emb.problem.cone.nu() + Scalar(1)},
        eta_{eta},
        thresholds_{thresholds} {}

  Scalar nu() const { return nu_; }

  Direction direction(const State& st, Scalar tau) const {
    return hsd_newton(emb_, st, tau);
  }

  State step(const State& st, const Direction& d, Scalar alpha) const {
    return hsd_step(emb_, st, d, alpha);
  }

  Scalar distance(const State& st, Scalar tau) const {
    return neighborhood_distance(st.eval, st.s_ext(), tau);
  }

  Scalar gap(const State& st) const { return st.x.dot(st.s) + st.xi * st.kappa; }

  Scalar adaptive_tau(const State& st, Scalar eta) const {
    return tau_adaptive(st.eval, Vec<Scalar>(st.s_ext()), eta);
  }

  void annotate(TraceRecord<Scalar>& rec, const State& st) const {
    rec.theta = st.theta;
    rec.kappa_xi = st.kappa * st.xi;
  }

  DirectionNorms<Scalar> norms(const State& st, const Direction& d) const {
    const Vec<Scalar> dx = d.dx_ext();
    const Vec<Scalar> ds = d.ds_ext();
    return {local_norm(st.eval, dx), dual_local_norm(st.eval, ds), dx.dot(ds),
            dx.norm() * ds.norm()};
  }

  Scalar residual(const State& st) const {
    return embedding_residual(emb_, st).norm() / emb_.rhs();
  }

  Scalar gap_roundoff(const State& st, const Direction& d) const {
    const Vec<Scalar> ax = st.x_ext().cwiseAbs() + d.dx_ext().cwiseAbs();
    const Vec<Scalar> as = st.s_ext().cwiseAbs() + d.ds_ext().cwiseAbs();
    return Eigen::NumTraits<Scalar>::epsilon() * ax.dot(as);
  }

  void set_tau(State& st, Scalar tau) const { st.tau = tau; }

  std::optional<std::string> check(const State& st) const {
    using std::abs;
    using std::max;
    if (abs(st.theta - st.mu) >
        kThetaTolerance * max(abs(st.theta), abs(st.mu)) + theta_floor()) {
      return "theta = " + std::to_string(double(st.theta)) +
             " differs from mu = " + std::to_string(double(st.mu));
    }
    if (st.kappa * st.xi <
        (Scalar(1) - eta_) * st.tau * (Scalar(1) - Scalar(1e-8))) {
      return std::string("kappa xi below (1 - eta) tau");
    }
    return {};
  }

  bool classified(const State& st) const {
    using std::max;
    return st.xi / max({st.xi, st.kappa, st.theta}) < thresholds_.ratio;
  }

  static constexpr Scalar kThetaTolerance = Scalar(1e-8);

  /// Absolute roundoff floor for θ = μ: a few ulps of the starting gap.
  Scalar theta_floor() const {
    return Scalar(4) * Eigen::NumTraits<Scalar>::epsilon() * emb_.rhs();
  }

 private:
  const Embedding<Scalar>& emb_;
  Scalar nu_;
  Scalar eta_;
  HsdThresholds<Scalar> thresholds_;
};

template <typename Scalar>
struct HsdOutcome {
  PathOutcome<HsdState<Scalar>, Scalar> path;
  /// min τₖ/τₖ₋₁ over the run.
  Scalar omega = Scalar(1);
  /// 1 − (1−η)ω
  Scalar beta{};
};

/// Path following on the embedding over the extended cone (parameter ν + 1).
/// Stops when the embedding gap xᵀs + ξκ = (ν+1)μ is at most ε or when ξ is
/// negligible relative to max(ξ, κ, θ).
template <typename Scalar>
HsdOutcome<Scalar> hsd_solve(const Embedding<Scalar>& emb, HsdState<Scalar> start,
                             const SolverConfig<Scalar>& config,
                             HsdThresholds<Scalar> thresholds = {}) {
  HsdModel<Scalar> model(emb, config.eta, thresholds);
  HsdOutcome<Scalar> out;
  const Scalar tau0 = start.tau;
  out.path = follow_path(model, std::move(start), config);
  Scalar prev = tau0;
  for (const auto& rec : out.path.trace) {
    out.omega = std::min(out.omega, rec.tau / prev);
    prev = rec.tau;
  }
  out.beta = Scalar(1) - (Scalar(1) - config.eta) * out.omega;
  return out;
}

enum class HsdVerdict { Solution, PrimalInfeasible, DualInfeasible, Unclassified };

constexpr std::string_view to_string(HsdVerdict v) {
  switch (v) {
    case HsdVerdict::Solution:
      return "Solution";
    case HsdVerdict::PrimalInfeasible:
      return "PrimalInfeasible";
    case HsdVerdict::DualInfeasible:
      return "DualInfeasible";
    case HsdVerdict::Unclassified:
      return "Unclassified";
  }
  return "Unknown";
}

template <typename Scalar>
struct HsdExtraction {
  HsdVerdict verdict = HsdVerdict::Unclassified;
  /// Scaled solution for Solution, the raw ray otherwise.
  Vec<Scalar> x;
  Vec<Scalar> y;
  Vec<Scalar> s;
  Scalar primal_objective{};
  Scalar dual_objective{};
  Scalar primal_residual{};
  Scalar dual_residual{};
  Scalar xi{};
  Scalar kappa{};
  Scalar theta{};
};

/// Reads off (x/ξ, y/ξ, s/ξ) when ξ is not negligible, otherwise labels the
/// run by the signs of bᵀy (primal infeasible) and −cᵀx (dual infeasible).
template <typename Scalar>
HsdExtraction<Scalar> extract(const Embedding<Scalar>& emb,
                              const HsdState<Scalar>& st,
                              HsdThresholds<Scalar> thresholds = {}) {
  using std::max;
  const auto& p = emb.problem;
  HsdExtraction<Scalar> out;
  out.xi = st.xi;
  out.kappa = st.kappa;
  out.theta = st.theta;
  if (st.xi > Scalar(0) &&
      st.xi >= thresholds.xi_min * max(Scalar(1), st.kappa)) {
    out.verdict = HsdVerdict::Solution;
    out.x = st.x / st.xi;
    out.y = st.y / st.xi;
    out.s = st.s / st.xi;
    out.primal_objective = p.c.dot(out.x);
    out.dual_objective = p.b.dot(out.y);
    out.primal_residual =
        (p.A * out.x - p.b).norm() / (Scalar(1) + p.b.norm());
    out.dual_residual = (p.A.transpose() * out.y + out.s - p.c).norm() /
                        (Scalar(1) + p.c.norm());
    return out;
  }
  out.x = st.x;
  out.y = st.y;
  out.s = st.s;
  out.primal_objective = p.c.dot(st.x);
  out.dual_objective = p.b.dot(st.y);
  if (st.kappa > st.xi) {
    if (out.dual_objective > thresholds.ray) {
      out.verdict = HsdVerdict::PrimalInfeasible;
    } else if (-out.primal_objective > thresholds.ray) {
      out.verdict = HsdVerdict::DualInfeasible;
    }
  }
  return out;
}

}  // namespace fsipm
