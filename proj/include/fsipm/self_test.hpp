#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "fsipm/barrier.hpp"

namespace fsipm {

struct SelfTestReport {
  double nu = 0.0;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

namespace detail {

template <typename Scalar>
Scalar relative_error(const Vec<Scalar>& got, const Vec<Scalar>& want) {
  return (got - want).norm() / (Scalar(1) + want.norm());
}

template <typename Scalar>
Scalar relative_error(const Mat<Scalar>& got, const Mat<Scalar>& want) {
  return (got - want).norm() / (Scalar(1) + want.norm());
}

template <typename Scalar>
Scalar relative_error(Scalar got, Scalar want) {
  using std::abs;
  return abs(got - want) / (Scalar(1) + abs(want));
}

}  // namespace detail

/// Numerically checks the barrier identities at x:
///
///   H(x)x = −g(x),  g(x)ᵀx = −ν,  g(αx) = g(x)/α,  H(αx) = H(x)/α²,
///   ‖g(x)‖*ₓ = √ν,  f(αx) = f(x) − ν ln α,
///
/// finite differences for g and H, and Dikin-ball containment. Never throws;
/// every problem found is appended to the report.
template <typename Scalar>
SelfTestReport self_test(const Cone<Scalar>& cone, const Vec<Scalar>& x,
                         std::uint64_t seed) {
  using std::log;
  using std::sqrt;

  SelfTestReport report;
  report.nu = static_cast<double>(cone.nu());
  if (cone.dimension() == 0) {
    report.failures.emplace_back("degenerate: empty coordinate space");
    return report;
  }
  auto fail = [&](const std::string& what, Scalar err) {
    report.failures.push_back(what + " (error " +
                              std::to_string(static_cast<double>(err)) + ")");
  };

  const Scalar identity_tol(1e-8);
  const Scalar fd_tol(1e-5);

  BarrierEval<Scalar> e;
  try {
    e = eval(cone, x);
  } catch (const Error& err) {
    report.failures.emplace_back(std::string("eval failed: ") + err.what());
    return report;
  }
  const Scalar nu = e.nu;
  const Index n = x.size();

  if (auto err = detail::relative_error<Scalar>(Vec<Scalar>(e.hessian * x),
                                                Vec<Scalar>(-e.gradient));
      err > identity_tol) {
    fail("H(x)x = -g(x)", err);
  }
  if (auto err = detail::relative_error<Scalar>(e.gradient.dot(x), -nu);
      err > identity_tol) {
    fail("g(x)'x = -nu", err);
  }
  if (auto err = detail::relative_error<Scalar>(
          dual_local_norm(e, e.gradient), sqrt(nu));
      err > identity_tol) {
    fail("||g(x)||* = sqrt(nu)", err);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_scale(std::log(0.1),
                                                   std::log(10.0));
  std::normal_distribution<double> normal;

  for (int trial = 0; trial < 3; ++trial) {
    const Scalar alpha = Scalar(std::exp(log_scale(rng)));
    BarrierEval<Scalar> scaled;
    try {
      scaled = eval(cone, Vec<Scalar>(alpha * x));
    } catch (const Error& err) {
      report.failures.emplace_back(
          std::string("eval at scaled point failed: ") + err.what());
      continue;
    }
    if (auto err = detail::relative_error<Scalar>(
            scaled.gradient, Vec<Scalar>(e.gradient / alpha));
        err > identity_tol) {
      fail("g(ax) = g(x)/a", err);
    }
    if (auto err = detail::relative_error<Scalar>(
            scaled.hessian, Mat<Scalar>(e.hessian / (alpha * alpha)));
        err > identity_tol) {
      fail("H(ax) = H(x)/a^2", err);
    }
    if (auto err = detail::relative_error<Scalar>(scaled.value,
                                                  e.value - nu * log(alpha));
        err > identity_tol) {
      fail("f(ax) = f(x) - nu ln a", err);
    }
  }

  // Central differences along coordinate directions.
  const Scalar h = Scalar(1e-6) * (Scalar(1) + x.norm());
  Vec<Scalar> fd_grad(n);
  Mat<Scalar> fd_hess(n, n);
  bool fd_ok = true;
  for (Index i = 0; i < n && fd_ok; ++i) {
    Vec<Scalar> xp = x;
    Vec<Scalar> xm = x;
    xp(i) += h;
    xm(i) -= h;
    try {
      const auto ep = eval(cone, xp);
      const auto em = eval(cone, xm);
      fd_grad(i) = (ep.value - em.value) / (Scalar(2) * h);
      fd_hess.col(i) = (ep.gradient - em.gradient) / (Scalar(2) * h);
    } catch (const Error& err) {
      report.failures.emplace_back(
          std::string("finite-difference probe left the cone: ") + err.what());
      fd_ok = false;
    }
  }
  if (fd_ok) {
    if (auto err = detail::relative_error<Scalar>(fd_grad, e.gradient);
        err > fd_tol) {
      fail("finite-difference gradient", err);
    }
    if (auto err = detail::relative_error<Scalar>(fd_hess, e.hessian);
        err > fd_tol) {
      fail("finite-difference Hessian", err);
    }
  }

  // u = L⁻ᵀz/‖z‖ has ‖u‖ₓ = 1.
  for (int probe = 0; probe < 20; ++probe) {
    Vec<Scalar> z(n);
    for (Index i = 0; i < n; ++i) {
      z(i) = Scalar(normal(rng));
    }
    z /= z.norm();
    Vec<Scalar> u = z;
    e.factor.lower().transpose().template triangularView<Eigen::Upper>()
        .solveInPlace(u);
    try {
      eval(cone, Vec<Scalar>(x + Scalar(0.99) * u));
    } catch (const Error&) {
      report.failures.push_back("Dikin probe " + std::to_string(probe) +
                                " left the cone");
    }
  }

  return report;
}

}  // namespace fsipm
