#include <doctest.h>

#include <cmath>
#include <random>

#include "fsipm/core.hpp"
#include "lp_oracle.hpp"

using namespace fsipm;

namespace {

Vec<double> vec(std::initializer_list<double> v) {
  Vec<double> out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

/// A = [1 1], b = 2, c = (1, 1) over the nonnegative orthant.
ConicProblem<double> simple_lp() {
  Mat<double> a(1, 2);
  a << 1, 1;
  return {a, vec({2}), vec({1, 1}), orthant<double>(2)};
}

/// x = (1, 1), y = 1 − τ − a, s = (τ + a, τ + a).
Iterate<double> simple_start(const ConicProblem<double>& p, double tau,
                             double a = 0.0) {
  return make_iterate(p, vec({1, 1}), vec({1 - tau - a}),
                      vec({tau + a, tau + a}), tau);
}

SolverConfig<double> config(UpdateStrategy v) {
  SolverConfig<double> c;
  c.variant = v;
  return c;
}

}  // namespace

TEST_CASE("problem construction checks shapes and rank") {
  Mat<double> a(1, 2);
  a << 1, 1;
  CHECK_THROWS_AS(ConicProblem<double>(a, vec({2}), vec({1, 1, 1}),
                                       orthant<double>(2)),
                  Error);
  CHECK_THROWS_AS(ConicProblem<double>(a, vec({2, 3}), vec({1, 1}),
                                       orthant<double>(2)),
                  Error);
  Mat<double> r(2, 2);
  r << 1, 1, 2, 2;
  try {
    ConicProblem<double>(r, vec({1, 2}), vec({1, 1}), orthant<double>(2));
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankDeficient);
  }
}

TEST_CASE("neighborhood distance examples") {
  const auto e = eval(orthant<double>(2), vec({1, 1}));
  const double tau = 0.7;
  CHECK(neighborhood_distance(e, vec({tau, tau}), tau) == doctest::Approx(0.0));
  CHECK(neighborhood_distance(e, vec({tau + 0.3, tau}), tau) ==
        doctest::Approx(0.3));
  const auto f = eval(orthant<double>(3), vec({0.5, 2, 3}));
  const Vec<double> v = vec({0.1, -0.2, 0.05});
  const Vec<double> s = -tau * f.gradient + v;
  CHECK(neighborhood_distance(f, s, tau) ==
        doctest::Approx(dual_local_norm(f, v)).epsilon(1e-12));
}

TEST_CASE("newton direction on the central path is zero") {
  const auto p = simple_lp();
  const auto it = simple_start(p, 0.5);
  const auto d = newton_direction(p, it);
  CHECK(d.dx.norm() < 1e-14);
  CHECK(d.dy.norm() < 1e-14);
  CHECK(d.ds.norm() < 1e-14);
}

TEST_CASE("newton direction by hand") {
  const auto p = simple_lp();
  const double tau = 0.5, a = 0.05;
  const auto it = simple_start(p, tau, a);
  const auto d = newton_direction(p, it);
  CHECK(d.dy(0) == doctest::Approx(a).epsilon(1e-12));
  CHECK((d.ds - vec({-a, -a})).norm() < 1e-14);
  CHECK(d.dx.norm() < 1e-14);
  const auto next = take_step(p, it, d, 1.0);
  CHECK(next.y(0) == doctest::Approx(1 - tau).epsilon(1e-14));
  CHECK((next.s - vec({tau, tau})).norm() < 1e-14);
  CHECK(neighborhood_distance(next.eval, next.s, tau) < 1e-14);
}

TEST_CASE("newton direction solves the system on random problems") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    auto lp = testing::random_lp(rng, 3, 7);
    ConicProblem<double> p(lp.a, lp.b, lp.c, orthant<double>(7));
    const double tau = 0.8;
    Vec<double> y = lp.y + 0.01 * Vec<double>::Ones(3);
    Vec<double> s = lp.c - lp.a.transpose() * y;
    if (s.minCoeff() <= 0) continue;
    const auto it = make_iterate(p, lp.x, y, s, tau);
    const auto d = newton_direction(p, it);
    const double scale = tau * (1 + it.s.norm());
    CHECK((p.A * d.dx).norm() <= 1e-8 * scale);
    CHECK((p.A.transpose() * d.dy + d.ds).norm() <= 1e-8 * scale);
    CHECK((tau * it.eval.hessian * d.dx + d.ds + it.s + tau * it.eval.gradient)
              .norm() <= 1e-8 * scale);
    CHECK(std::abs(d.dx.dot(d.ds)) <= 1e-10 * (d.dx.norm() * d.ds.norm() + 1));
  }
}

TEST_CASE("take_step") {
  const auto p = simple_lp();
  const auto it = simple_start(p, 0.5, 0.05);
  NewtonDirection<double> zero{Vec<double>::Zero(2), Vec<double>::Zero(1),
                               Vec<double>::Zero(2)};
  const auto same = take_step(p, it, zero, 1.0);
  CHECK((same.x - it.x).norm() == 0.0);
  CHECK((same.s - it.s).norm() == 0.0);
  CHECK_THROWS_AS(take_step(p, it, zero, 0.0), Error);
  CHECK_THROWS_AS(take_step(p, it, zero, 1.5), Error);
}

TEST_CASE("gap identity after a full step") {
  std::mt19937_64 rng(2);
  auto lp = testing::random_lp(rng, 2, 5);
  ConicProblem<double> p(lp.a, lp.b, lp.c, orthant<double>(5));
  auto it = make_iterate(p, lp.x, lp.y, lp.s, 1.0);
  const double tau = 0.9;
  const auto d = newton_direction(p, it, tau);
  const auto next = take_step(p, it, d, 1.0);
  const double dxn = local_norm(it.eval, d.dx);
  CHECK(next.x.dot(next.s) ==
        doctest::Approx(tau * (5 - dxn * dxn)).epsilon(1e-10));
}

TEST_CASE("fixed update") {
  CHECK(tau_fixed(1.0, 4.0, 0.25) == doctest::Approx(23.0 / 24.0));
  CHECK(tau_fixed(2.0, 1.0, 0.25) == doctest::Approx(15.0 / 8.0));
  CHECK(tau_fixed(3.0, 9.0, 0.1) / 3.0 ==
        doctest::Approx(tau_fixed(0.2, 9.0, 0.1) / 0.2));
}

TEST_CASE("adaptive update on the central path") {
  CHECK(tau_adaptive(2.0, std::sqrt(2.0), 2.0, 0.25) ==
        doctest::Approx(std::sqrt(2.0) / (std::sqrt(2.0) + 0.25)).epsilon(1e-14));
  CHECK(tau_adaptive(2.0, std::sqrt(2.0), 2.0, 0.25) ==
        doctest::Approx(0.849779).epsilon(1e-6));
  const auto e = eval(orthant<double>(5), vec({1, 2, 3, 0.5, 0.25}));
  const double tau = 0.3;
  const Vec<double> s = -tau * e.gradient;
  const double t = tau_adaptive(e, s, 0.25);
  CHECK(t == doctest::Approx(tau * std::sqrt(5.0) / (std::sqrt(5.0) + 0.25))
                 .epsilon(1e-12));
}

TEST_CASE("adaptive update lands on the boundary") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  const auto e = eval(orthant<double>(6), vec({1, 2, 3, 0.5, 0.25, 4}));
  for (int k = 0; k < 20; ++k) {
    Vec<double> v(6);
    for (Index j = 0; j < 6; ++j) v(j) = normal(rng);
    v *= 0.2 / dual_local_norm(e, v);
    const Vec<double> s = -e.gradient + v;
    const double t = tau_adaptive(e, s, 0.25);
    CHECK(neighborhood_distance(e, s, t) ==
          doctest::Approx(0.25 * t).epsilon(1e-9));
    CHECK(tau_adaptive(e.x.dot(s), dual_local_norm(e, s), 6.0, 0.25) ==
          doctest::Approx(t).epsilon(1e-10));
  }
}

TEST_CASE("adaptive update rejects broken candidates") {
  CHECK_THROWS_AS(tau_adaptive(-1.0, 1.0, 2.0, 0.25), Error);
  try {
    tau_adaptive(1.0, 10.0, 2.0, 0.25);
    FAIL("expected NegativeDiscriminant");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NegativeDiscriminant);
  }
}

TEST_CASE("largest update beats the fixed rule on the simple LP") {
  const auto p = simple_lp();
  const auto it = simple_start(p, 1.0);
  const auto cfg = config(UpdateStrategy::Largest);
  const auto r = tau_largest(p, it, cfg);
  const double safe = tau_fixed(1.0, 2.0, cfg.eta);
  CHECK(r.tau <= safe);
  CHECK(r.tau < 0.9 * safe);
  CHECK(r.trials <= cfg.max_trials + 1 + cfg.refine_steps);
  CHECK(neighborhood_distance(r.candidate.eval, r.candidate.s, r.tau) <=
        cfg.eta * r.tau * (1 + 1e-10));
}

TEST_CASE("iteration bound") {
  CHECK(theoretical_iteration_bound(1.0, 1.0, 0.25, 1e-8) == 296);
  CHECK(theoretical_iteration_bound(1.0, 2.0, 0.25, 2.0) == 1);
  CHECK_THROWS_AS(theoretical_iteration_bound(1.0, 2.0, 0.25, 3.0), Error);
  const double b1 = double(theoretical_iteration_bound(1.0, 16.0, 0.25, 1e-8));
  const double b2 = double(theoretical_iteration_bound(1.0, 32.0, 0.25, 1e-8));
  const double want = (std::sqrt(32.0) + 1) / (std::sqrt(16.0) + 1) *
                      std::log(32e8) / std::log(16e8);
  CHECK(b2 / b1 == doctest::Approx(want).epsilon(0.01));
}

TEST_CASE("config validation") {
  SolverConfig<double> c;
  c.eta = 0.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c.eta = 0.25;
  c.eps = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c.eps = 1e-8;
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("solve the simple LP with every variant") {
  const auto p = simple_lp();
  long fixed_iters = 0;
  for (auto v : {UpdateStrategy::Fixed, UpdateStrategy::Adaptive,
                 UpdateStrategy::Largest}) {
    const auto out = solve(p, simple_start(p, 1.0), config(v));
    INFO(to_string(v));
    CHECK(out.status == SolveStatus::Optimal);
    CHECK(out.final.x.dot(out.final.s) <= 1e-8);
    CHECK(p.c.dot(out.final.x) == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(out.iterations() <= out.theoretical_bound);
    if (v == UpdateStrategy::Fixed) {
      fixed_iters = out.iterations();
    } else {
      CHECK(out.iterations() <= fixed_iters);
    }
    for (const auto& r : out.trace) {
      CHECK(r.distance <= 0.25 * r.tau * (1 + 1e-10));
    }
  }
}

TEST_CASE("solve returns at once when the gap is already small") {
  const auto p = simple_lp();
  auto cfg = config(UpdateStrategy::Fixed);
  cfg.eps = 10.0;
  const auto out = solve(p, simple_start(p, 1.0), cfg);
  CHECK(out.status == SolveStatus::Optimal);
  CHECK(out.iterations() == 0);
}

TEST_CASE("solve rejects a start outside the neighborhood") {
  const auto p = simple_lp();
  try {
    solve(p, simple_start(p, 1.0, 0.5), config(UpdateStrategy::Fixed));
    FAIL("expected StartNotInNeighborhood");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StartNotInNeighborhood);
  }
}

TEST_CASE("iteration limit is reported") {
  const auto p = simple_lp();
  auto cfg = config(UpdateStrategy::Fixed);
  cfg.max_iterations = 5;
  const auto out = solve(p, simple_start(p, 1.0), cfg);
  CHECK(out.status == SolveStatus::IterationLimit);
  CHECK(out.iterations() == 5);
}

TEST_CASE("random LPs agree with vertex enumeration") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<Index> mdist(1, 4);
  for (int trial = 0; trial < 20; ++trial) {
    const Index m = mdist(rng);
    const Index n = m + 1 + mdist(rng);
    auto lp = testing::random_lp(rng, m, n);
    ConicProblem<double> p(lp.a, lp.b, lp.c, orthant<double>(n));
    const double want = testing::vertex_enumeration(lp.a, lp.b, lp.c);
    long fixed_iters = 0;
    for (auto v : {UpdateStrategy::Fixed, UpdateStrategy::Adaptive,
                   UpdateStrategy::Largest}) {
      const auto out = solve(p, make_iterate(p, lp.x, lp.y, lp.s, 1.0), config(v));
      INFO("trial ", trial, " ", to_string(v), " ", out.reason);
      REQUIRE(out.status == SolveStatus::Optimal);
      CHECK(std::abs(p.c.dot(out.final.x) - want) <= 1e-6);
      CHECK(out.iterations() <= out.theoretical_bound);
      if (v == UpdateStrategy::Fixed) {
        fixed_iters = out.iterations();
      } else {
        CHECK(out.iterations() <= fixed_iters);
      }
    }
  }
}
