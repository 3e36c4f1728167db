#include "phm/trace_io.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>

namespace phm {

namespace {

std::uint64_t read_be(std::string_view bytes, std::size_t at, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v = (v << 8) | static_cast<unsigned char>(bytes[at + i]);
  return v;
}

void put_be(std::string& out, std::uint64_t v, std::size_t width) {
  for (std::size_t i = width; i-- > 0;) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

TraceFile parse_binary(std::string_view bytes) {
  if (bytes.size() < kTraceHeaderBytes) {
    throw TraceError(bytes.size(), "truncated trace header at byte " + std::to_string(bytes.size()));
  }
  const std::uint64_t count = read_be(bytes, 4, 8);
  const std::size_t body = bytes.size() - kTraceHeaderBytes;
  const std::size_t whole = body / kTraceRecordBytes;
  if (body % kTraceRecordBytes != 0 && whole < count) {
    const std::size_t at = kTraceHeaderBytes + whole * kTraceRecordBytes;
    throw TraceError(at, "truncated record " + std::to_string(whole) + " at byte " +
                             std::to_string(at));
  }
  if (whole != count || body % kTraceRecordBytes != 0) {
    throw TraceError(4, "record count " + std::to_string(count) + " does not match " +
                            std::to_string(body) + " bytes of records");
  }

  TraceFile t;
  t.format = TraceFormat::kBinary;
  t.headers.reserve(whole);
  for (std::size_t r = 0; r < whole; ++r) {
    const std::size_t at = kTraceHeaderBytes + r * kTraceRecordBytes;
    Header5Tuple h;
    h.src_addr = static_cast<std::uint32_t>(read_be(bytes, at, 4));
    h.src_port = static_cast<std::uint16_t>(read_be(bytes, at + 4, 2));
    h.dst_addr = static_cast<std::uint32_t>(read_be(bytes, at + 6, 4));
    h.dst_port = static_cast<std::uint16_t>(read_be(bytes, at + 10, 2));
    h.protocol = static_cast<std::uint8_t>(read_be(bytes, at + 12, 1));
    t.headers.push_back(h);
  }
  return t;
}

TraceFile parse_csv(std::string_view text) {
  TraceFile t;
  t.format = TraceFormat::kCsv;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#') continue;
    try {
      t.headers.push_back(parse_tuple(line, line_no));
    } catch (const ParseError& e) {
      throw TraceError(line_no, e.what());
    }
  }
  return t;
}

}  // namespace

TraceFile parse_trace(std::string_view bytes) {
  if (bytes.starts_with(kTraceMagic)) return parse_binary(bytes);
  if (bytes.size() < kTraceMagic.size() && kTraceMagic.starts_with(bytes) && !bytes.empty()) {
    throw TraceError(0, "truncated trace magic");
  }
  return parse_csv(bytes);
}

TraceFile read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace " + path.string());
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_trace(bytes);
}

std::string serialize_trace(std::span<const Header5Tuple> headers, TraceFormat format) {
  std::string out;
  if (format == TraceFormat::kCsv) {
    for (const auto& h : headers) {
      out += format_tuple(h);
      out += '\n';
    }
    return out;
  }
  out.reserve(kTraceHeaderBytes + headers.size() * kTraceRecordBytes);
  out += kTraceMagic;
  put_be(out, headers.size(), 8);
  for (const auto& h : headers) {
    put_be(out, h.src_addr, 4);
    put_be(out, h.src_port, 2);
    put_be(out, h.dst_addr, 4);
    put_be(out, h.dst_port, 2);
    put_be(out, h.protocol, 1);
  }
  return out;
}

void write_trace(std::span<const Header5Tuple> headers, const std::filesystem::path& path,
                 TraceFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trace " + path.string());
  const auto bytes = serialize_trace(headers, format);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::uint64_t TraceRng::below(std::uint64_t n) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t excess = (kMax % n + 1) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = engine_();
    if (r <= kMax - excess) return r % n;
  }
}

Header5Tuple TraceRng::header() {
  const std::uint64_t a = engine_();
  const std::uint64_t b = engine_();
  Header5Tuple h;
  h.src_addr = static_cast<std::uint32_t>(a >> 32);
  h.dst_addr = static_cast<std::uint32_t>(a);
  h.src_port = static_cast<std::uint16_t>(b >> 48);
  h.dst_port = static_cast<std::uint16_t>(b >> 32);
  h.protocol = static_cast<std::uint8_t>(b >> 24);
  return h;
}

TraceFile generate_trace(const TraceGenSpec& spec) {
  if (!(spec.match_fraction >= 0.0 && spec.match_fraction <= 1.0)) {
    throw std::invalid_argument("match_fraction must lie in [0, 1]");
  }
  const auto n_match =
      static_cast<std::size_t>(std::floor(static_cast<double>(spec.count) * spec.match_fraction));
  if (n_match > 0 && spec.rules.empty()) {
    throw std::invalid_argument("match_fraction > 0 requires a non-empty rule set");
  }

  std::set<Header5Tuple> rule_headers;
  for (const auto& r : spec.rules) rule_headers.insert(decode_header(r.bits));

  TraceRng rng(spec.seed);
  TraceFile t;
  t.format = TraceFormat::kBinary;
  t.headers.reserve(spec.count);
  for (std::size_t i = 0; i < n_match; ++i) {
    t.headers.push_back(decode_header(spec.rules[rng.below(spec.rules.size())].bits));
  }
  while (t.headers.size() < spec.count) {
    const auto h = rng.header();
    if (!rule_headers.contains(h)) t.headers.push_back(h);
  }
  for (std::size_t i = t.headers.size(); i > 1; --i) {
    std::swap(t.headers[i - 1], t.headers[rng.below(i)]);
  }
  return t;
}

std::vector<Rule> generate_rules(std::size_t count, std::uint64_t seed) {
  TraceRng rng(seed);
  std::set<Header5Tuple> seen;
  std::vector<Rule> rules;
  rules.reserve(count);
  while (rules.size() < count) {
    const auto h = rng.header();
    if (seen.insert(h).second) rules.push_back(make_rule(rules.size() + 1, h));
  }
  return rules;
}

}  // namespace phm
