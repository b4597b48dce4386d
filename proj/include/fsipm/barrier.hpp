#pragma once

#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fsipm/linalg.hpp"
#include "fsipm/moment_cone.hpp"

namespace fsipm {

template <typename Scalar>
class Cone;

/// ℝⁿ₊ with f(x) = −Σ ln xᵢ.
struct OrthantCone {
  Index dim;
};

template <typename Scalar>
struct ProductCone {
  std::vector<Cone<Scalar>> parts;
};

/// inner ∩ range(Z), parametrized by coordinates u with ambient point Z·u.
template <typename Scalar>
struct RestrictedCone {
  std::shared_ptr<const Cone<Scalar>> inner;
  NullspaceBasis<Scalar> basis;
};

/// inner × ℝ₊ with f̃(x, ξ) = f(x) − ln ξ.
template <typename Scalar>
struct ExtendedCone {
  std::shared_ptr<const Cone<Scalar>> inner;
};

template <typename Scalar>
struct MomentCone {
  std::shared_ptr<const MomentConeSpec<Scalar>> spec;
};

/// A proper cone described by its logarithmically homogeneous
/// self-concordant barrier.
template <typename Scalar>
class Cone {
 public:
  using Variant = std::variant<OrthantCone, ProductCone<Scalar>,
                               RestrictedCone<Scalar>, ExtendedCone<Scalar>,
                               MomentCone<Scalar>>;

  Cone(Variant v) : v_{std::move(v)} {}  // NOLINT

  const Variant& variant() const { return v_; }

  Index dimension() const {
    return std::visit(
        [](const auto& c) -> Index {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, OrthantCone>) {
            return c.dim;
          } else if constexpr (std::is_same_v<T, ProductCone<Scalar>>) {
            Index total = 0;
            for (const auto& p : c.parts) {
              total += p.dimension();
            }
            return total;
          } else if constexpr (std::is_same_v<T, RestrictedCone<Scalar>>) {
            return c.basis.dimension();
          } else if constexpr (std::is_same_v<T, ExtendedCone<Scalar>>) {
            return c.inner->dimension() + 1;
          } else {
            return c.spec->dimension();
          }
        },
        v_);
  }

  /// Barrier parameter ν.
  Scalar nu() const {
    return std::visit(
        [](const auto& c) -> Scalar {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, OrthantCone>) {
            return Scalar(c.dim);
          } else if constexpr (std::is_same_v<T, ProductCone<Scalar>>) {
            Scalar total(0);
            for (const auto& p : c.parts) {
              total += p.nu();
            }
            return total;
          } else if constexpr (std::is_same_v<T, RestrictedCone<Scalar>>) {
            // Logarithmic homogeneity survives restriction to a subspace, so
            // gᵀu = −ν still holds with the inner parameter.
            return c.inner->nu();
          } else if constexpr (std::is_same_v<T, ExtendedCone<Scalar>>) {
            return c.inner->nu() + Scalar(1);
          } else {
            return c.spec->nu();
          }
        },
        v_);
  }

 private:
  Variant v_;
};

template <typename Scalar = double>
Cone<Scalar> orthant(Index n) {
  return Cone<Scalar>{OrthantCone{n}};
}

template <typename Scalar>
Cone<Scalar> product(std::vector<Cone<Scalar>> parts) {
  return Cone<Scalar>{ProductCone<Scalar>{std::move(parts)}};
}

template <typename Scalar>
Cone<Scalar> restricted(Cone<Scalar> inner, NullspaceBasis<Scalar> basis) {
  if (basis.ambient_dimension() != inner.dimension()) {
    throw Error(ErrorKind::DimensionMismatch,
                "basis rows must match the inner cone dimension");
  }
  return Cone<Scalar>{RestrictedCone<Scalar>{
      std::make_shared<const Cone<Scalar>>(std::move(inner)),
      std::move(basis)}};
}

template <typename Scalar>
Cone<Scalar> extended(Cone<Scalar> inner) {
  return Cone<Scalar>{ExtendedCone<Scalar>{
      std::make_shared<const Cone<Scalar>>(std::move(inner))}};
}

template <typename Scalar>
Cone<Scalar> moment(MomentConeSpec<Scalar> spec) {
  return Cone<Scalar>{MomentCone<Scalar>{
      std::make_shared<const MomentConeSpec<Scalar>>(std::move(spec))}};
}

/// Barrier value, gradient and Hessian (with its Cholesky factor) at an
/// interior point.
template <typename Scalar>
struct BarrierEval {
  Vec<Scalar> x;
  Scalar value{};
  Vec<Scalar> gradient;
  Mat<Scalar> hessian;
  SpdFactor<Scalar> factor;
  Scalar nu{};

  Index dimension() const { return x.size(); }
};

namespace detail {

template <typename Scalar>
void raw_eval(const Cone<Scalar>& cone, const Vec<Scalar>& x, Scalar& value,
              Vec<Scalar>& grad, Mat<Scalar>& hess) {
  using std::log;
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, OrthantCone>) {
          for (Index i = 0; i < x.size(); ++i) {
            if (!(x(i) > Scalar(0))) {
              throw Error(ErrorKind::NotInterior,
                          "orthant coordinate " + std::to_string(i) +
                              " is not positive",
                          i);
            }
          }
          value = -x.array().log().sum();
          grad = -x.cwiseInverse();
          hess = x.cwiseAbs2().cwiseInverse().asDiagonal();
        } else if constexpr (std::is_same_v<T, ProductCone<Scalar>>) {
          const Index n = x.size();
          value = Scalar(0);
          grad.resize(n);
          hess = Mat<Scalar>::Zero(n, n);
          Index offset = 0;
          for (const auto& part : c.parts) {
            const Index d = part.dimension();
            Scalar v;
            Vec<Scalar> g;
            Mat<Scalar> h;
            raw_eval(part, Vec<Scalar>(x.segment(offset, d)), v, g, h);
            value += v;
            grad.segment(offset, d) = g;
            hess.block(offset, offset, d, d) = h;
            offset += d;
          }
        } else if constexpr (std::is_same_v<T, RestrictedCone<Scalar>>) {
          const auto& z = c.basis.basis;
          if (z.cols() == 0) {
            throw Error(ErrorKind::EmptyKernel,
                        "restricted cone has an empty coordinate space");
          }
          Vec<Scalar> g;
          Mat<Scalar> h;
          raw_eval(*c.inner, Vec<Scalar>(z * x), value, g, h);
          grad = z.transpose() * g;
          hess = z.transpose() * h * z;
        } else if constexpr (std::is_same_v<T, ExtendedCone<Scalar>>) {
          const Index n = x.size() - 1;
          const Scalar xi = x(n);
          if (!(xi > Scalar(0))) {
            throw Error(ErrorKind::NotInterior,
                        "homogenizing coordinate is not positive", n);
          }
          Vec<Scalar> g;
          Mat<Scalar> h;
          raw_eval(*c.inner, Vec<Scalar>(x.head(n)), value, g, h);
          value -= log(xi);
          grad.resize(n + 1);
          grad.head(n) = g;
          grad(n) = -Scalar(1) / xi;
          hess = Mat<Scalar>::Zero(n + 1, n + 1);
          hess.topLeftCorner(n, n) = h;
          hess(n, n) = Scalar(1) / (xi * xi);
        } else {
          moment_barrier(*c.spec, x, value, grad, hess);
        }
      },
      cone.variant());
}

}  // namespace detail

/// Evaluates the barrier at x. Throws NotInterior when x is not in the open
/// cone (sign test for orthants, Cholesky failure for matrix-based cones).
template <typename Scalar>
BarrierEval<Scalar> eval(const Cone<Scalar>& cone, const Vec<Scalar>& x) {
  if (x.size() != cone.dimension()) {
    throw Error(ErrorKind::DimensionMismatch,
                "point has dimension " + std::to_string(x.size()) +
                    ", cone has " + std::to_string(cone.dimension()));
  }
  BarrierEval<Scalar> out;
  out.x = x;
  out.nu = cone.nu();
  detail::raw_eval(cone, x, out.value, out.gradient, out.hessian);
  out.hessian = Scalar(0.5) * (out.hessian + out.hessian.transpose()).eval();
  try {
    out.factor = cholesky(out.hessian);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotPositiveDefinite) {
      throw Error(ErrorKind::NotInterior, "barrier Hessian is singular",
                  e.index());
    }
    throw;
  }
  return out;
}

/// ‖v‖*ₓ = √(vᵀH(x)⁻¹v)
template <typename Scalar, typename Derived>
Scalar dual_local_norm(const BarrierEval<Scalar>& e,
                       const Eigen::MatrixBase<Derived>& v) {
  return e.factor.inverse_norm(v);
}

/// ‖v‖ₓ = √(vᵀH(x)v)
template <typename Scalar, typename Derived>
Scalar local_norm(const BarrierEval<Scalar>& e,
                  const Eigen::MatrixBase<Derived>& v) {
  return e.factor.norm(v);
}

/// A point in the cone interior: ones for orthants, the normalized
/// Clenshaw–Curtis weights for the moment cone, (inner, 1) for extensions.
/// Restricted cones use the projection of the inner point, which is checked.
template <typename Scalar>
Vec<Scalar> canonical_point(const Cone<Scalar>& cone);

namespace detail {
template <typename Scalar>
Vec<Scalar> clenshaw_curtis_weights(Index degree);
}

template <typename Scalar>
Vec<Scalar> canonical_point(const Cone<Scalar>& cone) {
  return std::visit(
      [&](const auto& c) -> Vec<Scalar> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, OrthantCone>) {
          return Vec<Scalar>::Ones(c.dim);
        } else if constexpr (std::is_same_v<T, ProductCone<Scalar>>) {
          Vec<Scalar> out(cone.dimension());
          Index offset = 0;
          for (const auto& part : c.parts) {
            const Index d = part.dimension();
            out.segment(offset, d) = canonical_point(part);
            offset += d;
          }
          return out;
        } else if constexpr (std::is_same_v<T, RestrictedCone<Scalar>>) {
          Vec<Scalar> u =
              c.basis.basis.transpose() * canonical_point(*c.inner);
          eval(cone, u);
          return u;
        } else if constexpr (std::is_same_v<T, ExtendedCone<Scalar>>) {
          Vec<Scalar> out(cone.dimension());
          out.head(out.size() - 1) = canonical_point(*c.inner);
          out(out.size() - 1) = Scalar(1);
          return out;
        } else {
          Vec<Scalar> w =
              detail::clenshaw_curtis_weights<Scalar>(c.spec->dimension() - 1);
          return w / w.sum();
        }
      },
      cone.variant());
}

namespace detail {

/// Clenshaw–Curtis quadrature weights at the Chebyshev points of the second
/// kind, ordered from −1 to 1. They sum to 2.
template <typename Scalar>
Vec<Scalar> clenshaw_curtis_weights(Index degree) {
  using std::cos;
  const Scalar pi = Scalar(EIGEN_PI);
  const Index n = degree;
  Vec<Scalar> w(n + 1);
  for (Index j = 0; j <= n; ++j) {
    const Scalar theta = pi * Scalar(j) / Scalar(n);
    Scalar sum(0);
    for (Index k = 1; k <= n / 2; ++k) {
      const Scalar bk = (2 * k == n) ? Scalar(1) : Scalar(2);
      sum += bk / Scalar(4 * k * k - 1) * cos(Scalar(2 * k) * theta);
    }
    const Scalar cj = (j == 0 || j == n) ? Scalar(1) : Scalar(2);
    w(j) = cj / Scalar(n) * (Scalar(1) - sum);
  }
  // Symmetric about 0; the reversal only fixes the ordering convention.
  return w.reverse();
}

}  // namespace detail

}  // namespace fsipm
