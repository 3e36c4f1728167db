#include "phm/weight_store.hpp"

namespace phm {

WeightStore build_weight_store() {
  WeightStore store;
  for (unsigned m = 0; m < kPatternCount; ++m) {
    const auto p = pattern_of(WeightIndex(m));
    const WeightMatrix w = outer_product(p);

    std::size_t at = 0;
    while (at < store.count_ && store.matrices_[at] != w) ++at;
    if (at == store.count_) store.matrices_[store.count_++] = w;

    store.slots_[m] = {static_cast<std::uint8_t>(at), sign_sum(p)};
  }
  for (unsigned x = 0; x < kPatternCount; ++x) {
    const auto px = pattern_of(WeightIndex(x));
    for (unsigned s = 0; s < kPatternCount; ++s) {
      store.energy_[x][s] = energy(px, store.matrix(WeightIndex(s)));
    }
  }
  return store;
}

std::uint16_t WeightStore::packed_bits() const {
  std::uint16_t bits = 0;
  for (std::size_t k = 0; k < count_; ++k) {
    const auto& w = matrices_[k];
    const unsigned tri = (w(0, 1) > 0 ? 4U : 0U) | (w(0, 2) > 0 ? 2U : 0U) | (w(1, 2) > 0 ? 1U : 0U);
    bits = static_cast<std::uint16_t>(bits | (tri << (3 * k)));
  }
  return bits;
}

}  // namespace phm
