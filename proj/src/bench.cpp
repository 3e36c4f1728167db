#include "phm/bench.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <thread>

#include "phm/matcher.hpp"
#include "phm/trace_io.hpp"

namespace phm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs fn(begin, end, worker) over contiguous shards and returns the wall
// time of the whole loop.
template <typename Fn>
double timed_sharded(std::size_t n, unsigned workers, Fn&& fn) {
  const auto t0 = Clock::now();
  if (workers <= 1) {
    fn(std::size_t{0}, n, 0U);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    const std::size_t step = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(n, w * step);
      const std::size_t end = std::min(n, begin + step);
      threads.emplace_back(fn, begin, end, w);
    }
  }
  return seconds_since(t0);
}

struct WorkerTally {
  std::uint64_t matches = 0;
  std::uint64_t energy_evals = 0;
  std::uint64_t cache_hits = 0;
};

using Outcomes = std::vector<std::optional<RuleId>>;

std::string describe(const std::optional<RuleId>& o) {
  return o ? "rule " + std::to_string(*o) : std::string("no match");
}

std::uint64_t parse_u64(std::string_view field, std::size_t line, const char* name) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line, "line " + std::to_string(line) + ": malformed " + name);
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

GenerateArgs parse_generate_args(std::string_view text) {
  GenerateArgs g;
  bool have_count = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const auto item = text.substr(start, end - start);
    start = end + 1;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("expected key=value in generator spec, got '" +
                                  std::string(item) + "'");
    }
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == "count") {
      g.count = parse_u64(value, 0, "count");
      have_count = true;
    } else if (key == "seed") {
      g.seed = parse_u64(value, 0, "seed");
    } else if (key == "match") {
      double f = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), f);
      if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size() || f < 0 || f > 1) {
        throw std::invalid_argument("match must be a number in [0, 1]");
      }
      g.match_fraction = f;
    } else {
      throw std::invalid_argument("unknown generator key '" + std::string(key) + "'");
    }
  }
  if (!have_count) throw std::invalid_argument("generator spec needs count=N");
  return g;
}

double EngineReport::mean_elapsed() const {
  if (repetitions.empty()) return 0;
  double sum = 0;
  for (const auto& r : repetitions) sum += r.elapsed_seconds;
  return sum / static_cast<double>(repetitions.size());
}

const EngineReport* BenchReport::find(std::string_view engine) const {
  for (const auto& e : engines) {
    if (e.engine == engine) return &e;
  }
  return nullptr;
}

std::optional<double> BenchReport::speedup() const {
  const auto* phm = find("phm");
  const auto* base = find("baseline");
  if (!phm || !base || phm->mean_elapsed() <= 0) return std::nullopt;
  return base->mean_elapsed() / phm->mean_elapsed();
}

BenchReport run_benchmark(std::span<const Rule> rules, std::span<const Header5Tuple> headers,
                          const BenchOptions& options) {
  if (options.repeat < 1) throw std::invalid_argument("repeat must be at least 1");
  const unsigned workers = std::max(1U, options.workers);
  const bool run_phm = options.engine != EngineSelector::kBaseline;
  const bool run_base = options.engine != EngineSelector::kPhm;
  const std::size_t n = headers.size();

  BenchReport report;
  Outcomes phm_out(run_phm ? n : 0);
  Outcomes base_out(run_base ? n : 0);

  std::optional<RuleGroupTable> table;
  std::optional<BaselinePatternSet> patterns;
  std::vector<LearningCache> caches(workers);

  if (run_phm) {
    auto& e = report.engines.emplace_back();
    e.engine = "phm";
    e.packets = n;
    e.rules = rules.size();
    const auto t0 = Clock::now();
    table.emplace(compile_rules(rules));
    e.compile_seconds = seconds_since(t0);
  }
  if (run_base) {
    auto& e = report.engines.emplace_back();
    e.engine = "baseline";
    e.packets = n;
    e.rules = rules.size();
    const auto t0 = Clock::now();
    patterns.emplace(compile_baseline(rules, options.baseline_alg));
    e.compile_seconds = seconds_since(t0);
  }

  for (unsigned rep = 0; rep < options.repeat; ++rep) {
    std::size_t slot = 0;
    if (run_phm) {
      if (options.cache == CacheMode::kFresh) {
        for (auto& c : caches) c.clear();
      }
      std::vector<WorkerTally> tally(workers);
      const double elapsed = timed_sharded(n, workers, [&](std::size_t b, std::size_t e, unsigned w) {
        auto& t = tally[w];
        auto* cache = &caches[w];
        for (std::size_t i = b; i < e; ++i) {
          const auto r = match_header(headers[i], *table, cache);
          phm_out[i] = r.rule;
          t.matches += r.matched();
          t.energy_evals += r.energy_evals;
          t.cache_hits += r.cache_hit;
        }
      });
      RepetitionStats s{elapsed, 0, 0, 0};
      for (const auto& t : tally) {
        s.matches += t.matches;
        s.energy_evals += t.energy_evals;
        s.cache_hits += t.cache_hits;
      }
      auto& e = report.engines[slot++];
      e.repetitions.push_back(s);
      for (const auto& c : caches) e.cache_entries = std::max(e.cache_entries, c.size());
    }
    if (run_base) {
      std::vector<WorkerTally> tally(workers);
      const double elapsed = timed_sharded(n, workers, [&](std::size_t b, std::size_t e, unsigned w) {
        auto& t = tally[w];
        for (std::size_t i = b; i < e; ++i) {
          const auto r = baseline_match(headers[i], *patterns);
          base_out[i] = r.rule;
          t.matches += r.matched();
        }
      });
      RepetitionStats s{elapsed, 0, 0, 0};
      for (const auto& t : tally) s.matches += t.matches;
      report.engines[slot].repetitions.push_back(s);
    }
    if (run_phm && run_base) {
      for (std::size_t i = 0; i < n; ++i) {
        if (phm_out[i] != base_out[i]) {
          throw DifferentialError(i, headers[i],
                                  "engines disagree on header " + std::to_string(i) + " (" +
                                      format_tuple(headers[i]) + "): phm " +
                                      describe(phm_out[i]) + ", baseline " +
                                      describe(base_out[i]));
        }
      }
    }
  }
  return report;
}

BenchReport run_benchmark(const BenchConfig& config) {
  const auto rules = load_rules(config.rules_path);
  std::vector<Header5Tuple> headers;
  if (config.trace_path) {
    headers = read_trace(*config.trace_path).headers;
  } else if (config.generate) {
    TraceGenSpec spec;
    spec.count = config.generate->count;
    spec.seed = config.generate->seed;
    spec.match_fraction = config.generate->match_fraction;
    spec.rules = rules;
    headers = generate_trace(spec).headers;
  } else {
    throw std::invalid_argument("either a trace path or a generator spec is required");
  }
  return run_benchmark(rules, headers, config.options);
}

std::string format_report_csv(const BenchReport& report) {
  std::string out(kReportCsvHeader);
  out += '\n';
  for (const auto& e : report.engines) {
    for (std::size_t r = 0; r < e.repetitions.size(); ++r) {
      const auto& s = e.repetitions[r];
      out += e.engine + ',' + std::to_string(e.packets) + ',' + std::to_string(e.rules) + ',' +
             std::to_string(r + 1) + ',' + format_double(s.elapsed_seconds) + ',' +
             std::to_string(s.matches) + ',';
      if (e.is_phm()) out += std::to_string(s.energy_evals);
      out += ',';
      if (e.is_phm()) out += std::to_string(s.cache_hits);
      out += '\n';
    }
  }
  return out;
}

void emit_csv(const BenchReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report " + path.string());
  out << format_report_csv(report);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<ReportCsvRow> parse_report_csv(std::string_view text) {
  std::vector<ReportCsvRow> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != kReportCsvHeader) throw ParseError(1, "line 1: unexpected report header");
      continue;
    }
    std::vector<std::string_view> f;
    std::size_t s = 0;
    for (;;) {
      const auto c = line.find(',', s);
      f.push_back(line.substr(s, c == std::string_view::npos ? std::string_view::npos : c - s));
      if (c == std::string_view::npos) break;
      s = c + 1;
    }
    if (f.size() != 8) {
      throw ParseError(line_no, "line " + std::to_string(line_no) + ": expected 8 columns");
    }
    ReportCsvRow row;
    row.engine = std::string(f[0]);
    row.packets = parse_u64(f[1], line_no, "packets");
    row.rules = parse_u64(f[2], line_no, "rules");
    row.repetition = static_cast<unsigned>(parse_u64(f[3], line_no, "repetition"));
    const auto [ptr, ec] = std::from_chars(f[4].data(), f[4].data() + f[4].size(), row.elapsed_seconds);
    if (ec != std::errc{} || ptr != f[4].data() + f[4].size()) {
      throw ParseError(line_no, "line " + std::to_string(line_no) + ": malformed elapsed_seconds");
    }
    row.matches = parse_u64(f[5], line_no, "matches");
    if (!f[6].empty()) row.energy_evals = parse_u64(f[6], line_no, "energy_evals");
    if (!f[7].empty()) row.cache_hits = parse_u64(f[7], line_no, "cache_hits");
    rows.push_back(std::move(row));
  }
  if (line_no == 0) throw ParseError(0, "empty report");
  return rows;
}

}  // namespace phm
