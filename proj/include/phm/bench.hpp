#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "phm/baseline.hpp"
#include "phm/header_codec.hpp"

namespace phm {

enum class EngineSelector { kPhm, kBaseline, kBoth };
enum class CacheMode { kShared, kFresh };

struct BenchOptions {
  EngineSelector engine = EngineSelector::kBoth;
  unsigned repeat = 1;
  SearchAlgorithm baseline_alg = SearchAlgorithm::kBoyerMoore;
  CacheMode cache = CacheMode::kShared;
  unsigned workers = 1;
};

struct GenerateArgs {
  std::size_t count = 0;
  std::uint64_t seed = 0;
  double match_fraction = 0.1;
};

/// Parses `count=N,seed=S,match=F` (any order; seed and match optional).
GenerateArgs parse_generate_args(std::string_view text);

struct BenchConfig {
  std::filesystem::path rules_path;
  std::optional<std::filesystem::path> trace_path;
  std::optional<GenerateArgs> generate;
  std::optional<std::filesystem::path> out_path;
  BenchOptions options;
};

struct RepetitionStats {
  double elapsed_seconds = 0;
  std::uint64_t matches = 0;
  std::uint64_t energy_evals = 0;
  std::uint64_t cache_hits = 0;
};

struct EngineReport {
  std::string engine;  // "phm" or "baseline"
  std::size_t packets = 0;
  std::size_t rules = 0;
  double compile_seconds = 0;
  std::vector<RepetitionStats> repetitions;
  std::size_t cache_entries = 0;  // largest per-worker cache after the run

  bool is_phm() const { return engine == "phm"; }
  double mean_elapsed() const;
};

struct BenchReport {
  std::vector<EngineReport> engines;

  const EngineReport* find(std::string_view engine) const;
  /// Baseline mean time over PHM mean time, when both ran.
  std::optional<double> speedup() const;
};

/// Engines disagreed on a header.
class DifferentialError : public std::runtime_error {
 public:
  DifferentialError(std::size_t index, const Header5Tuple& header, const std::string& what)
      : std::runtime_error(what), index_(index), header_(header) {}
  std::size_t index() const noexcept { return index_; }
  const Header5Tuple& header() const noexcept { return header_; }

 private:
  std::size_t index_;
  Header5Tuple header_;
};

BenchReport run_benchmark(std::span<const Rule> rules, std::span<const Header5Tuple> headers,
                          const BenchOptions& options);
BenchReport run_benchmark(const BenchConfig& config);

inline constexpr std::string_view kReportCsvHeader =
    "engine,packets,rules,repetition,elapsed_seconds,matches,energy_evals,cache_hits";

std::string format_report_csv(const BenchReport& report);
void emit_csv(const BenchReport& report, const std::filesystem::path& path);

struct ReportCsvRow {
  std::string engine;
  std::size_t packets = 0;
  std::size_t rules = 0;
  unsigned repetition = 0;
  double elapsed_seconds = 0;
  std::uint64_t matches = 0;
  std::optional<std::uint64_t> energy_evals;
  std::optional<std::uint64_t> cache_hits;
};

/// Reads back format_report_csv output; throws ParseError on malformed rows.
std::vector<ReportCsvRow> parse_report_csv(std::string_view text);

}  // namespace phm
