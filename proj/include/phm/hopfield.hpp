#pragma once

// Hopfield weight construction and the energy function over 3-element
// bipolar chunks. Everything here is a free function over Eigen
// expressions, so it works for any scalar type and for block views such as
// chunk_at(seq, k) without copying.

#include <Eigen/Core>

#include <compare>
#include <cstdint>

#include "phm/header_codec.hpp"

namespace phm {

template <typename Scalar>
using WeightMatrixT = Eigen::Matrix<Scalar, kChunkWidth, kChunkWidth>;
using WeightMatrix = WeightMatrixT<int>;

/// Decimal value (0..7) of a chunk read as big-endian bits with -1 -> 0.
struct WeightIndex {
  std::uint8_t value = 0;

  constexpr WeightIndex() = default;
  constexpr explicit WeightIndex(unsigned v) : value(static_cast<std::uint8_t>(v)) {}
  constexpr WeightIndex complement() const { return WeightIndex(7U - value); }
  friend constexpr auto operator<=>(WeightIndex, WeightIndex) = default;
};

inline constexpr int kPatternCount = 8;

/// S = p p^T with the diagonal cleared (no self connections).
template <typename Derived>
WeightMatrixT<typename Derived::Scalar> outer_product(const Eigen::MatrixBase<Derived>& p) {
  WeightMatrixT<typename Derived::Scalar> s = p * p.transpose();
  s.diagonal().setZero();
  return s;
}

template <typename Derived>
WeightIndex weight_index(const Eigen::MatrixBase<Derived>& p) {
  unsigned v = 0;
  for (Eigen::Index i = 0; i < kChunkWidth; ++i) v = (v << 1) | (p(i) > 0 ? 1U : 0U);
  return WeightIndex(v);
}

/// Sign of the element sum. Three bipolar values never sum to zero.
template <typename Derived>
typename Derived::Scalar sign_sum(const Eigen::MatrixBase<Derived>& p) {
  return p.sum() > 0 ? typename Derived::Scalar(1) : typename Derived::Scalar(-1);
}

/// E = -1/2 * sum_i sum_j x_i x_j w_ij (full double sum).
template <typename DerivedX, typename DerivedW>
typename DerivedX::Scalar energy(const Eigen::MatrixBase<DerivedX>& x,
                                 const Eigen::MatrixBase<DerivedW>& w) {
  return -(x.transpose() * w * x).value() / typename DerivedX::Scalar(2);
}

/// Energy at a stored pattern (and at its complement).
template <typename Scalar = int>
inline constexpr Scalar kStableEnergy = Scalar(-3);

/// Bipolar pattern whose weight_index is m.
template <typename Scalar = int>
Chunk<Scalar> pattern_of(WeightIndex m) {
  Chunk<Scalar> p;
  for (int i = 0; i < kChunkWidth; ++i) {
    p(i) = ((m.value >> (kChunkWidth - 1 - i)) & 1U) ? Scalar(1) : Scalar(-1);
  }
  return p;
}

}  // namespace phm
