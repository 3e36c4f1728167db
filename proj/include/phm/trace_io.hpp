#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "phm/header_codec.hpp"

namespace phm {

enum class TraceFormat { kBinary, kCsv };

struct TraceFile {
  std::vector<Header5Tuple> headers;
  TraceFormat format = TraceFormat::kBinary;
};

/// Malformed trace input. position() is a byte offset for binary traces and
/// a 1-based line number for CSV.
class TraceError : public std::runtime_error {
 public:
  TraceError(std::size_t position, const std::string& what)
      : std::runtime_error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

inline constexpr std::string_view kTraceMagic = "PHT1";
inline constexpr std::size_t kTraceHeaderBytes = 12;
inline constexpr std::size_t kTraceRecordBytes = 13;

/// Format is sniffed from the leading magic bytes.
TraceFile parse_trace(std::string_view bytes);
TraceFile read_trace(const std::filesystem::path& path);

std::string serialize_trace(std::span<const Header5Tuple> headers, TraceFormat format);
void write_trace(std::span<const Header5Tuple> headers, const std::filesystem::path& path,
                 TraceFormat format);

/// mt19937_64 with portable bounded draws, so traces reproduce across
/// standard libraries (std distributions are implementation-defined).
class TraceRng {
 public:
  explicit TraceRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, n) by rejection; n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Two draws: SA|DA from the first, SP|DP|PROT from the top 40 bits of
  /// the second.
  Header5Tuple header();

 private:
  std::mt19937_64 engine_;
};

struct TraceGenSpec {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  double match_fraction = 0.1;
  std::span<const Rule> rules;
};

/// floor(count * match_fraction) copies of uniformly drawn rules, the rest
/// random headers that match no rule, then a Fisher-Yates shuffle.
TraceFile generate_trace(const TraceGenSpec& spec);

/// `count` distinct random rules with ids 1..count.
std::vector<Rule> generate_rules(std::size_t count, std::uint64_t seed);

}  // namespace phm
