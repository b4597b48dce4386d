#include <doctest.h>

#include <cmath>
#include <random>

#include "fsipm/linalg.hpp"

using namespace fsipm;

namespace {

/// Q diag(λ) Qᵀ with log-uniform λ in [1, cond].
Mat<double> random_spd(std::mt19937_64& rng, Index n, double cond) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Mat<double> g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Mat<double>> qr(g);
  Mat<double> q = qr.householderQ();
  Vec<double> lambda(n);
  for (Index i = 0; i < n; ++i) lambda(i) = std::pow(cond, unit(rng));
  Mat<double> m = q * lambda.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

}  // namespace

TEST_CASE("cholesky of the identity is the identity") {
  const auto f = cholesky(Mat<double>::Identity(3, 3));
  CHECK((f.lower() - Mat<double>::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("cholesky of a 2x2 matrix") {
  Mat<double> m(2, 2);
  m << 4, 2, 2, 3;
  const auto f = cholesky(m);
  Mat<double> want(2, 2);
  want << 2, 0, 1, std::sqrt(2.0);
  CHECK((f.lower() - want).norm() < 1e-15);
  CHECK((f.reconstruct() - m).norm() <= 1e-12 * m.norm());
}

TEST_CASE("cholesky reports the failing pivot") {
  Mat<double> m(2, 2);
  m << 1, 2, 2, 1;
  try {
    cholesky(m);
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
    CHECK(e.index() == 2);
  }
}

TEST_CASE("cholesky rejects non-square and non-finite input") {
  CHECK_THROWS_AS(cholesky(Mat<double>::Ones(2, 3)), Error);
  Mat<double> m = Mat<double>::Identity(2, 2);
  m(1, 1) = std::nan("");
  CHECK_THROWS_AS(cholesky(m), Error);
}

TEST_CASE("solve_spd examples") {
  Vec<double> rhs(3);
  rhs << 1, 2, 3;
  const auto id = cholesky(Mat<double>::Identity(3, 3));
  CHECK((Vec<double>(solve_spd(id, rhs)) - rhs).norm() < 1e-15);

  Mat<double> d(2, 2);
  d << 4, 0, 0, 9;
  Vec<double> r2(2);
  r2 << 8, 27;
  Vec<double> w = solve_spd(cholesky(d), r2);
  CHECK(w(0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(w(1) == doctest::Approx(3.0).epsilon(1e-15));

  Mat<double> m(2, 2);
  m << 4, 2, 2, 3;
  r2 << 10, 8;
  w = solve_spd(cholesky(m), r2);
  CHECK(w(0) == doctest::Approx(7.0 / 4.0).epsilon(1e-14));
  CHECK(w(1) == doctest::Approx(3.0 / 2.0).epsilon(1e-14));
}

TEST_CASE("solve_spd rejects a mismatched right-hand side") {
  const auto f = cholesky(Mat<double>::Identity(3, 3));
  CHECK_THROWS_AS(solve_spd(f, Vec<double>(Vec<double>::Ones(2))), Error);
}

TEST_CASE("random SPD matrices: reconstruction and solve") {
  std::mt19937_64 rng(20260101);
  std::uniform_int_distribution<Index> dim(1, 50);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = dim(rng);
    const Mat<double> m = random_spd(rng, n, 1e6);
    const auto f = cholesky(m);
    CHECK((f.reconstruct() - m).norm() <= 1e-10 * m.norm());
    CHECK((f.lower().diagonal().array() > 0.0).all());
    const Mat<double> inv = solve_spd(f, Mat<double>::Identity(n, n));
    const Mat<double> small = random_spd(rng, n, 1e3);
    const Mat<double> sinv = solve_spd(cholesky(small), Mat<double>::Identity(n, n));
    CHECK((small * sinv - Mat<double>::Identity(n, n)).norm() <=
          1e-9 * std::sqrt(double(n)));
    CHECK(inv.allFinite());
  }
}

TEST_CASE("nullspace of a row vector") {
  Mat<double> b(1, 2);
  b << 1, 1;
  const auto z = nullspace(b);
  REQUIRE(z.dimension() == 1);
  CHECK(std::abs(std::abs(z.basis(0, 0)) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(z.basis(0, 0) + z.basis(1, 0)) < 1e-12);
}

TEST_CASE("nullspace of identity and zero") {
  CHECK(nullspace(Mat<double>(Mat<double>::Identity(2, 2))).dimension() == 0);
  const auto z = nullspace(Mat<double>(Mat<double>::Zero(1, 3)));
  CHECK(z.dimension() == 3);
  CHECK((z.basis.transpose() * z.basis - Mat<double>::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
}

TEST_CASE("nullspace properties on random matrices") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<Index> dim(1, 12);
  for (int trial = 0; trial < 100; ++trial) {
    const Index m = dim(rng);
    const Index n = dim(rng);
    const Index r = std::min<Index>(dim(rng), std::min(m, n));
    Mat<double> l(m, r), rt(r, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < r; ++j) l(i, j) = normal(rng);
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < n; ++j) rt(i, j) = normal(rng);
    const Mat<double> b = l * rt;
    const auto z = nullspace(b);
    CHECK(z.dimension() == n - numerical_rank(b));
    CHECK(numerical_rank(b) == r);
    if (z.dimension() > 0) {
      CHECK((b * z.basis).cwiseAbs().maxCoeff() <=
            1e-12 * (1.0 + b.cwiseAbs().maxCoeff()));
      CHECK((z.basis.transpose() * z.basis -
             Mat<double>::Identity(z.dimension(), z.dimension()))
                .cwiseAbs()
                .maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("cholesky is deterministic") {
  std::mt19937_64 rng(3);
  const Mat<double> m = random_spd(rng, 20, 1e4);
  CHECK((cholesky(m).lower() - cholesky(m).lower()).norm() == 0.0);
}
