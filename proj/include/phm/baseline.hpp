#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phm/header_codec.hpp"
#include "phm/matcher.hpp"

namespace phm {

enum class SearchAlgorithm { kBoyerMoore, kHorspool };

/// Single-pattern exact search with precomputed shift tables.
class PatternSearcher {
 public:
  static constexpr std::size_t npos = std::string_view::npos;

  PatternSearcher(std::string pattern, SearchAlgorithm alg);

  /// Offset of the first occurrence of the pattern in `text`, or npos.
  std::size_t find(std::string_view text) const;

  const std::string& pattern() const { return pattern_; }
  SearchAlgorithm algorithm() const { return alg_; }
  std::size_t bad_character_shift(unsigned char c) const { return bad_char_[c]; }
  std::span<const std::size_t> good_suffix_shifts() const { return good_suffix_; }

 private:
  std::size_t find_boyer_moore(std::string_view text) const;
  std::size_t find_horspool(std::string_view text) const;

  std::string pattern_;
  SearchAlgorithm alg_;
  std::array<std::size_t, 256> bad_char_{};
  std::vector<std::size_t> good_suffix_;  // Boyer-Moore only
};

struct BaselinePattern {
  RuleId id = 0;
  PatternSearcher searcher;
};

/// Rules rendered as 104-character bit text, pad bit excluded.
class BaselinePatternSet {
 public:
  explicit BaselinePatternSet(SearchAlgorithm alg = SearchAlgorithm::kBoyerMoore) : alg_(alg) {}

  void add(RuleId id, std::string bits) { patterns_.push_back({id, PatternSearcher(std::move(bits), alg_)}); }

  std::span<const BaselinePattern> patterns() const { return patterns_; }
  SearchAlgorithm algorithm() const { return alg_; }
  std::size_t size() const { return patterns_.size(); }

 private:
  SearchAlgorithm alg_;
  std::vector<BaselinePattern> patterns_;
};

BaselinePatternSet compile_baseline(std::span<const Rule> rules,
                                    SearchAlgorithm alg = SearchAlgorithm::kBoyerMoore);

/// First pattern found at offset 0 spanning the whole header text.
MatchResult baseline_match_text(std::string_view text, const BaselinePatternSet& set);
MatchResult baseline_match(const Header5Tuple& h, const BaselinePatternSet& set);

const char* to_string(SearchAlgorithm alg);
/// "boyer-moore" or "horspool"; throws std::invalid_argument otherwise.
SearchAlgorithm parse_search_algorithm(std::string_view name);

}  // namespace phm
