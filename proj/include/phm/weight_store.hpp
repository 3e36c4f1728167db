#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "phm/hopfield.hpp"

namespace phm {

/// The eight chunk patterns reduced to their distinct weight matrices.
/// Complementary patterns (m, 7 - m) share a matrix and are told apart by
/// the sign of their element sum.
class WeightStore {
 public:
  struct Slot {
    std::uint8_t matrix = 0;  // position in matrices()
    int sign = 0;
  };

  std::span<const WeightMatrix> matrices() const { return {matrices_.data(), count_}; }
  std::size_t distinct_matrix_count() const { return count_; }

  const Slot& slot(WeightIndex m) const { return slots_[m.value]; }
  const WeightMatrix& matrix(WeightIndex m) const { return matrices_[slots_[m.value].matrix]; }
  int sign(WeightIndex m) const { return slots_[m.value].sign; }

  /// Upper-triangle sign bits of each distinct matrix, 3 bits apiece
  /// (bit set for +1), first matrix in the low bits.
  std::uint16_t packed_bits() const;
  /// Bits actually needed by packed_bits().
  std::size_t storage_bits() const { return count_ * 3; }

  /// energy(pattern_of(x), matrix(stored)), precomputed for all 64 pairs.
  int tabulated_energy(WeightIndex x, WeightIndex stored) const {
    return energy_[x.value][stored.value];
  }

  /// One chunk test: stable energy against the stored weight and the same
  /// sign of sum.
  bool chunk_matches(WeightIndex x, WeightIndex stored) const {
    return energy_[x.value][stored.value] == kStableEnergy<int> &&
           slots_[x.value].sign == slots_[stored.value].sign;
  }

  friend WeightStore build_weight_store();

 private:
  std::array<WeightMatrix, kPatternCount> matrices_{};
  std::size_t count_ = 0;
  std::array<Slot, kPatternCount> slots_{};
  std::array<std::array<int, kPatternCount>, kPatternCount> energy_{};
};

/// Enumerates all 8 patterns, storing each distinct outer product once.
WeightStore build_weight_store();

}  // namespace phm
