#include "phm/baseline.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace phm {

namespace {

using Index = std::ptrdiff_t;

// suff[i] = length of the longest suffix of x[0..i] that is also a suffix of x.
std::vector<Index> suffixes(std::string_view x) {
  const Index m = static_cast<Index>(x.size());
  std::vector<Index> suff(x.size());
  suff[m - 1] = m;
  Index g = m - 1;
  Index f = m - 1;
  for (Index i = m - 2; i >= 0; --i) {
    if (i > g && suff[i + m - 1 - f] < i - g) {
      suff[i] = suff[i + m - 1 - f];
    } else {
      if (i < g) g = i;
      f = i;
      while (g >= 0 && x[g] == x[g + m - 1 - f]) --g;
      suff[i] = f - g;
    }
  }
  return suff;
}

}  // namespace

PatternSearcher::PatternSearcher(std::string pattern, SearchAlgorithm alg)
    : pattern_(std::move(pattern)), alg_(alg) {
  const std::size_t m = pattern_.size();
  bad_char_.fill(m);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    bad_char_[static_cast<unsigned char>(pattern_[i])] = m - 1 - i;
  }
  if (alg_ != SearchAlgorithm::kBoyerMoore || m == 0) return;

  const auto suff = suffixes(pattern_);
  const Index mi = static_cast<Index>(m);
  good_suffix_.assign(m, m);
  Index j = 0;
  for (Index i = mi - 1; i >= 0; --i) {
    if (suff[i] == i + 1) {
      for (; j < mi - 1 - i; ++j) {
        if (good_suffix_[j] == m) good_suffix_[j] = static_cast<std::size_t>(mi - 1 - i);
      }
    }
  }
  for (Index i = 0; i <= mi - 2; ++i) {
    good_suffix_[mi - 1 - suff[i]] = static_cast<std::size_t>(mi - 1 - i);
  }
}

std::size_t PatternSearcher::find(std::string_view text) const {
  if (pattern_.empty()) return 0;
  if (text.size() < pattern_.size()) return npos;
  return alg_ == SearchAlgorithm::kBoyerMoore ? find_boyer_moore(text) : find_horspool(text);
}

std::size_t PatternSearcher::find_boyer_moore(std::string_view y) const {
  const Index m = static_cast<Index>(pattern_.size());
  const Index n = static_cast<Index>(y.size());
  Index j = 0;
  while (j <= n - m) {
    Index i = m - 1;
    while (i >= 0 && pattern_[i] == y[i + j]) --i;
    if (i < 0) return static_cast<std::size_t>(j);
    const Index bc = static_cast<Index>(bad_char_[static_cast<unsigned char>(y[i + j])]) - m + 1 + i;
    j += std::max(static_cast<Index>(good_suffix_[i]), bc);
  }
  return npos;
}

std::size_t PatternSearcher::find_horspool(std::string_view y) const {
  const std::size_t m = pattern_.size();
  const char last = pattern_[m - 1];
  std::size_t j = 0;
  while (j + m <= y.size()) {
    const char c = y[j + m - 1];
    if (c == last && std::memcmp(pattern_.data(), y.data() + j, m - 1) == 0) return j;
    j += bad_char_[static_cast<unsigned char>(c)];
  }
  return npos;
}

BaselinePatternSet compile_baseline(std::span<const Rule> rules, SearchAlgorithm alg) {
  BaselinePatternSet set(alg);
  for (const auto& r : rules) set.add(r.id, bit_string(decode_header(r.bits)));
  return set;
}

MatchResult baseline_match_text(std::string_view text, const BaselinePatternSet& set) {
  MatchResult result;
  for (const auto& p : set.patterns()) {
    // Equal lengths, so any hit is at offset 0 and covers the whole text.
    if (p.searcher.pattern().size() == text.size() && p.searcher.find(text) == 0) {
      result.rule = p.id;
      break;
    }
  }
  return result;
}

MatchResult baseline_match(const Header5Tuple& h, const BaselinePatternSet& set) {
  return baseline_match_text(bit_string(h), set);
}

const char* to_string(SearchAlgorithm alg) {
  return alg == SearchAlgorithm::kBoyerMoore ? "boyer-moore" : "horspool";
}

SearchAlgorithm parse_search_algorithm(std::string_view name) {
  if (name == "boyer-moore") return SearchAlgorithm::kBoyerMoore;
  if (name == "horspool") return SearchAlgorithm::kHorspool;
  throw std::invalid_argument("unknown search algorithm '" + std::string(name) + "'");
}

}  // namespace phm
