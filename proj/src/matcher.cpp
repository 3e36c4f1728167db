#include "phm/matcher.hpp"

#include <stdexcept>

namespace phm {

CompiledRule compile_rule(const Rule& rule) {
  CompiledRule c;
  c.id = rule.id;
  for (int k = 0; k < kChunkCount; ++k) {
    const auto chunk = chunk_at(rule.bits, k);
    c.weights[k] = weight_index(chunk);
    c.signs[k] = static_cast<std::int8_t>(sign_sum(chunk));
  }
  return c;
}

RuleGroupTable compile_rules(std::span<const Rule> rules) {
  RuleGroupTable table;
  for (const auto& r : rules) {
    auto c = compile_rule(r);
    table.groups_[c.weights[0].value].push_back(c);
  }
  return table;
}

std::size_t RuleGroupTable::rule_count() const {
  std::size_t n = 0;
  for (const auto& g : groups_) n += g.size();
  return n;
}

std::optional<WeightIndex> LearningCache::lookup(const ChunkPattern& pattern) const {
  for (std::size_t i = 0; i < size_; ++i) {
    if (entries_[i].bits == pattern) return entries_[i].group;
  }
  return std::nullopt;
}

void LearningCache::insert(const ChunkPattern& pattern, WeightIndex group) {
  if (weight_index(pattern) != group) {
    throw std::logic_error("learning cache: group " + std::to_string(group.value) +
                           " does not belong to pattern");
  }
  if (full() || lookup(pattern)) return;
  entries_[size_++] = Entry{pattern, group};
}

Classification classify_first_chunk(const ChunkPattern& x, const RuleGroupTable& table,
                                    LearningCache* cache) {
  if (cache) {
    if (auto g = cache->lookup(x)) return {*g, 0, true};
  }
  const auto& store = table.store();
  const int x_sign = sign_sum(x);
  Classification c{WeightIndex(0), 0, false};
  for (unsigned g = kPatternCount - 1; g >= 1; --g) {
    const WeightIndex gi(g);
    ++c.energy_evals;
    if (energy(x, store.matrix(gi)) == kStableEnergy<int> && x_sign == store.sign(gi)) {
      c.group = gi;
      break;
    }
  }
  if (cache) cache->insert(x, c.group);
  return c;
}

MatchResult match_sequence(const BipolarSequence& seq, const RuleGroupTable& table,
                           LearningCache* cache) {
  const ChunkPattern first = chunk_at(seq, 0);
  const auto cls = classify_first_chunk(first, table, cache);

  MatchResult result;
  result.energy_evals = cls.energy_evals;
  result.cache_hit = cls.cache_hit;

  const auto& members = table.group(cls.group);
  if (members.empty()) return result;

  std::array<WeightIndex, kChunkCount> x{};
  for (int k = 1; k < kChunkCount; ++k) x[k] = weight_index(chunk_at(seq, k));

  const auto& store = table.store();
  for (const auto& rule : members) {
    int k = 1;
    for (; k < kChunkCount; ++k) {
      ++result.energy_evals;
      if (store.tabulated_energy(x[k], rule.weights[k]) != kStableEnergy<int> ||
          store.sign(x[k]) != rule.signs[k]) {
        break;
      }
    }
    if (k == kChunkCount) {
      result.rule = rule.id;
      return result;
    }
  }
  return result;
}

MatchResult match_header(const Header5Tuple& h, const RuleGroupTable& table, LearningCache* cache) {
  return match_sequence(encode_header(h), table, cache);
}

}  // namespace phm
