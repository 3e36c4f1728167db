#pragma once

#include <Eigen/Core>

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace phm {

inline constexpr int kHeaderBits = 104;
inline constexpr int kSequenceLength = kHeaderBits + 1;  // one trailing pad bit
inline constexpr int kChunkWidth = 3;
inline constexpr int kChunkCount = kSequenceLength / kChunkWidth;

static_assert(kSequenceLength % kChunkWidth == 0);

/// IPv4 5-tuple, fields in rule-layout order (SA, SP, DA, DP, PROT).
struct Header5Tuple {
  std::uint32_t src_addr = 0;
  std::uint16_t src_port = 0;
  std::uint32_t dst_addr = 0;
  std::uint16_t dst_port = 0;
  std::uint8_t protocol = 0;

  friend auto operator<=>(const Header5Tuple&, const Header5Tuple&) = default;
};

template <typename Scalar>
using Bipolar = Eigen::Matrix<Scalar, kSequenceLength, 1>;
template <typename Scalar>
using Chunk = Eigen::Matrix<Scalar, kChunkWidth, 1>;

using BipolarSequence = Bipolar<int>;
using ChunkPattern = Chunk<int>;
using RuleId = std::uint64_t;

struct Rule {
  RuleId id = 0;
  BipolarSequence bits;
};

/// Raised for malformed rule or trace input. `line()` is 1-based, 0 when
/// the input did not come from a file.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// True when every coefficient is -1 or +1.
template <typename Derived>
bool is_bipolar(const Eigen::MatrixBase<Derived>& v) {
  return ((v.array() == 1) || (v.array() == -1)).all();
}

/// Big-endian concatenation SA|SP|DA|DP|PROT, a zero pad bit, then 0 -> -1.
BipolarSequence encode_header(const Header5Tuple& h);

/// Inverse of encode_header. Throws std::invalid_argument for a sequence
/// that is not bipolar or whose pad element is not -1.
Header5Tuple decode_header(const BipolarSequence& seq);

/// The k-th 3-element slice; a writable/readable block expression.
template <typename Derived>
auto chunk_at(const Eigen::MatrixBase<Derived>& seq, Eigen::Index k) {
  return seq.template segment<kChunkWidth>(kChunkWidth * k);
}

/// Splits a sequence into consecutive non-overlapping triples.
template <typename Derived>
std::vector<Chunk<typename Derived::Scalar>> chunks(const Eigen::MatrixBase<Derived>& seq) {
  static_assert(Derived::ColsAtCompileTime == 1, "chunks() takes a column vector");
  if constexpr (Derived::RowsAtCompileTime != Eigen::Dynamic) {
    static_assert(Derived::RowsAtCompileTime % kChunkWidth == 0);
  }
  if (seq.size() % kChunkWidth != 0) {
    throw std::logic_error("sequence length " + std::to_string(seq.size()) +
                           " is not a multiple of 3");
  }
  std::vector<Chunk<typename Derived::Scalar>> out;
  out.reserve(static_cast<std::size_t>(seq.size() / kChunkWidth));
  for (Eigen::Index k = 0; k < seq.size() / kChunkWidth; ++k) {
    out.emplace_back(chunk_at(seq, k));
  }
  return out;
}

/// 104-character '0'/'1' rendering of the header bits (no pad).
std::string bit_string(const Header5Tuple& h);

std::string format_ipv4(std::uint32_t addr);
/// Strict dotted-quad; throws ParseError.
std::uint32_t parse_ipv4(std::string_view text, std::size_t line = 0);

/// "sa,sp,da,dp,proto"
std::string format_tuple(const Header5Tuple& h);
/// Parses the five comma-separated tuple fields; throws ParseError.
Header5Tuple parse_tuple(std::string_view text, std::size_t line = 0);

enum class RuleForm { kTuple, kRaw };

/// Accepts `id,sa,sp,da,dp,proto` or `id,B:<104 bits>`.
Rule parse_rule_line(std::string_view line, std::size_t line_no = 0);
std::string render_rule(const Rule& rule, RuleForm form = RuleForm::kTuple);

/// Reads a whole rule file, skipping blank and `#` lines. Duplicate ids or
/// duplicate bit sequences are rejected with a ParseError naming both ids.
std::vector<Rule> parse_rules(std::istream& in);
std::vector<Rule> load_rules(const std::filesystem::path& path);
void save_rules(const std::vector<Rule>& rules, const std::filesystem::path& path,
                RuleForm form = RuleForm::kTuple);

Rule make_rule(RuleId id, const Header5Tuple& h);

}  // namespace phm
