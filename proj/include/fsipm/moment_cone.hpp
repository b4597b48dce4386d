#pragma once

#include <vector>

#include "fsipm/linalg.hpp"

namespace fsipm {

/// Dual cone of a univariate truncated quadratic module, in the interpolant
/// basis at `nodes`. A vector λ of node values is interior iff every moment
/// matrix Mᵢ(λ) = Pᵢᵀ·diag(wᵢ∘λ)·Pᵢ is positive definite.
template <typename Scalar>
struct MomentConeSpec {
  struct Block {
    /// Constraint polynomial gᵢ evaluated at the nodes.
    Vec<Scalar> weights;
    /// Multiplier basis evaluated at the nodes, (D+1) × kᵢ.
    Mat<Scalar> basis;
  };

  Vec<Scalar> nodes;
  std::vector<Block> blocks;

  Index dimension() const { return nodes.size(); }

  Scalar nu() const {
    Index total = 0;
    for (const auto& block : blocks) {
      total += block.basis.cols();
    }
    return Scalar(total);
  }
};

namespace detail {

/// f(λ) = −Σᵢ ln det Mᵢ(λ), with ∂f/∂λⱼ = −Σᵢ wᵢⱼ·Qᵢ(j,j) and
/// H(j,l) = Σᵢ wᵢⱼ·wᵢₗ·Qᵢ(j,l)², where Qᵢ = Pᵢ Mᵢ⁻¹ Pᵢᵀ.
template <typename Scalar>
void moment_barrier(const MomentConeSpec<Scalar>& spec, const Vec<Scalar>& x,
                    Scalar& value, Vec<Scalar>& grad, Mat<Scalar>& hess) {
  using std::log;
  const Index n = spec.dimension();
  value = Scalar(0);
  grad = Vec<Scalar>::Zero(n);
  hess = Mat<Scalar>::Zero(n, n);
  for (const auto& block : spec.blocks) {
    const Vec<Scalar> scaled = block.weights.cwiseProduct(x);
    Mat<Scalar> moment =
        block.basis.transpose() * scaled.asDiagonal() * block.basis;
    moment = Scalar(0.5) * (moment + moment.transpose()).eval();
    SpdFactor<Scalar> factor;
    try {
      factor = cholesky(moment);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotPositiveDefinite) {
        throw Error(ErrorKind::NotInterior,
                    "moment matrix is not positive definite");
      }
      throw;
    }
    value -= Scalar(2) * factor.lower().diagonal().array().log().sum();
    // V = L⁻¹ Pᵀ, so Q = VᵀV.
    const Mat<Scalar> v = factor.forward(block.basis.transpose());
    const Mat<Scalar> q = v.transpose() * v;
    grad -= block.weights.cwiseProduct(q.diagonal());
    hess.noalias() += (block.weights * block.weights.transpose())
                          .cwiseProduct(q.cwiseAbs2());
  }
}

}  // namespace detail

}  // namespace fsipm
