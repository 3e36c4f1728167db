#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "phm/header_codec.hpp"
#include "phm/hopfield.hpp"
#include "phm/weight_store.hpp"

namespace phm {

struct CompiledRule {
  RuleId id = 0;
  std::array<WeightIndex, kChunkCount> weights{};
  std::array<std::int8_t, kChunkCount> signs{};
};

CompiledRule compile_rule(const Rule& rule);

/// Rules bucketed by the weight index of their first chunk. Immutable once
/// built; safe to share between threads.
class RuleGroupTable {
 public:
  RuleGroupTable() : store_(build_weight_store()) {}

  const std::vector<CompiledRule>& group(WeightIndex g) const { return groups_[g.value]; }
  const WeightStore& store() const { return store_; }
  std::size_t rule_count() const;

  friend RuleGroupTable compile_rules(std::span<const Rule> rules);

 private:
  std::array<std::vector<CompiledRule>, kPatternCount> groups_;
  WeightStore store_;
};

/// Within-group order follows input order.
RuleGroupTable compile_rules(std::span<const Rule> rules);

/// Link list of first-chunk patterns already classified, at most one entry
/// per pattern. Not synchronized: give each worker its own.
class LearningCache {
 public:
  static constexpr std::size_t kCapacity = kPatternCount;

  std::optional<WeightIndex> lookup(const ChunkPattern& pattern) const;
  /// Idempotent. Throws std::logic_error if `group` is not the pattern's
  /// weight index.
  void insert(const ChunkPattern& pattern, WeightIndex group);

  std::size_t size() const { return size_; }
  bool full() const { return size_ == kCapacity; }
  void clear() { size_ = 0; }

 private:
  struct Entry {
    ChunkPattern bits;
    WeightIndex group;
  };
  std::array<Entry, kCapacity> entries_{};
  std::size_t size_ = 0;
};

struct Classification {
  WeightIndex group;
  std::uint32_t energy_evals = 0;
  bool cache_hit = false;
};

/// Group descent 7 -> 1 on the energy function plus sign check, falling back
/// to group 0. `cache` may be null.
Classification classify_first_chunk(const ChunkPattern& x, const RuleGroupTable& table,
                                    LearningCache* cache);

struct MatchResult {
  std::optional<RuleId> rule;
  std::uint64_t energy_evals = 0;
  bool cache_hit = false;

  bool matched() const { return rule.has_value(); }
};

MatchResult match_sequence(const BipolarSequence& seq, const RuleGroupTable& table,
                           LearningCache* cache);
MatchResult match_header(const Header5Tuple& h, const RuleGroupTable& table, LearningCache* cache);

}  // namespace phm
