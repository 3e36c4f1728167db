#include "phm/header_codec.hpp"

#include <arpa/inet.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <unordered_map>

namespace phm {

namespace {

std::string at_line(std::size_t line) {
  return line == 0 ? std::string{} : "line " + std::to_string(line) + ": ";
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(s.substr(start)));
      return out;
    }
    out.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
}

std::uint64_t parse_unsigned(std::string_view field, std::uint64_t max, const char* name,
                             std::size_t line) {
  std::uint64_t v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec == std::errc::invalid_argument || ptr != end) {
    throw ParseError(line, at_line(line) + "malformed " + name + " '" + std::string(field) + "'");
  }
  if (ec == std::errc::result_out_of_range || v > max) {
    throw ParseError(line, at_line(line) + name + " " + std::string(field) + " exceeds " +
                               std::to_string(max));
  }
  return v;
}

template <typename T>
void append_bits(BipolarSequence& seq, Eigen::Index& pos, T value, int width) {
  for (int b = width - 1; b >= 0; --b) {
    seq(pos++) = ((static_cast<std::uint64_t>(value) >> b) & 1U) ? 1 : -1;
  }
}

template <typename T>
T read_bits(const BipolarSequence& seq, Eigen::Index& pos, int width) {
  std::uint64_t v = 0;
  for (int b = 0; b < width; ++b) v = (v << 1) | (seq(pos++) > 0 ? 1U : 0U);
  return static_cast<T>(v);
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(what), line_(line) {}

BipolarSequence encode_header(const Header5Tuple& h) {
  BipolarSequence seq;
  Eigen::Index pos = 0;
  append_bits(seq, pos, h.src_addr, 32);
  append_bits(seq, pos, h.src_port, 16);
  append_bits(seq, pos, h.dst_addr, 32);
  append_bits(seq, pos, h.dst_port, 16);
  append_bits(seq, pos, h.protocol, 8);
  seq(pos) = -1;
  return seq;
}

Header5Tuple decode_header(const BipolarSequence& seq) {
  if (!is_bipolar(seq)) throw std::invalid_argument("sequence is not bipolar");
  if (seq(kHeaderBits) != -1) throw std::invalid_argument("pad element must be -1");
  Header5Tuple h;
  Eigen::Index pos = 0;
  h.src_addr = read_bits<std::uint32_t>(seq, pos, 32);
  h.src_port = read_bits<std::uint16_t>(seq, pos, 16);
  h.dst_addr = read_bits<std::uint32_t>(seq, pos, 32);
  h.dst_port = read_bits<std::uint16_t>(seq, pos, 16);
  h.protocol = read_bits<std::uint8_t>(seq, pos, 8);
  return h;
}

std::string bit_string(const Header5Tuple& h) {
  std::string out;
  out.reserve(kHeaderBits);
  auto put = [&out](std::uint64_t v, int width) {
    for (int b = width - 1; b >= 0; --b) out.push_back(((v >> b) & 1U) ? '1' : '0');
  };
  put(h.src_addr, 32);
  put(h.src_port, 16);
  put(h.dst_addr, 32);
  put(h.dst_port, 16);
  put(h.protocol, 8);
  return out;
}

std::string format_ipv4(std::uint32_t addr) {
  const in_addr a{htonl(addr)};
  char buf[INET_ADDRSTRLEN];
  inet_ntop(AF_INET, &a, buf, sizeof buf);
  return buf;
}

std::uint32_t parse_ipv4(std::string_view text, std::size_t line) {
  const std::string s(text);
  in_addr a{};
  if (inet_pton(AF_INET, s.c_str(), &a) != 1) {
    throw ParseError(line, at_line(line) + "malformed IPv4 address '" + s + "'");
  }
  return ntohl(a.s_addr);
}

std::string format_tuple(const Header5Tuple& h) {
  return format_ipv4(h.src_addr) + ',' + std::to_string(h.src_port) + ',' +
         format_ipv4(h.dst_addr) + ',' + std::to_string(h.dst_port) + ',' +
         std::to_string(h.protocol);
}

namespace {

Header5Tuple tuple_from_fields(const std::vector<std::string_view>& f, std::size_t first,
                               std::size_t line) {
  Header5Tuple h;
  h.src_addr = parse_ipv4(f[first], line);
  h.src_port = static_cast<std::uint16_t>(parse_unsigned(f[first + 1], 65535, "port", line));
  h.dst_addr = parse_ipv4(f[first + 2], line);
  h.dst_port = static_cast<std::uint16_t>(parse_unsigned(f[first + 3], 65535, "port", line));
  h.protocol = static_cast<std::uint8_t>(parse_unsigned(f[first + 4], 255, "protocol", line));
  return h;
}

}  // namespace

Header5Tuple parse_tuple(std::string_view text, std::size_t line) {
  const auto f = split(trim(text), ',');
  if (f.size() != 5) {
    throw ParseError(line, at_line(line) + "expected 5 fields, got " + std::to_string(f.size()));
  }
  return tuple_from_fields(f, 0, line);
}

Rule make_rule(RuleId id, const Header5Tuple& h) { return Rule{id, encode_header(h)}; }

Rule parse_rule_line(std::string_view line, std::size_t line_no) {
  const auto f = split(trim(line), ',');
  if (f.empty() || f[0].empty()) throw ParseError(line_no, at_line(line_no) + "missing rule id");
  const RuleId id = parse_unsigned(f[0], UINT64_MAX, "rule id", line_no);

  if (f.size() == 2 && f[1].starts_with("B:")) {
    const auto raw = f[1].substr(2);
    if (raw.size() != kHeaderBits) {
      throw ParseError(line_no, at_line(line_no) + "raw rule has " + std::to_string(raw.size()) +
                                    " bits, expected 104");
    }
    Rule r{id, BipolarSequence::Constant(-1)};
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '0' && raw[i] != '1') {
        throw ParseError(line_no, at_line(line_no) + "non-binary character '" +
                                      std::string(1, raw[i]) + "' at bit " + std::to_string(i));
      }
      r.bits(static_cast<Eigen::Index>(i)) = raw[i] == '1' ? 1 : -1;
    }
    return r;
  }
  if (f.size() != 6) {
    throw ParseError(line_no, at_line(line_no) + "expected 6 fields or id,B:<bits>, got " +
                                  std::to_string(f.size()) + " fields");
  }
  return make_rule(id, tuple_from_fields(f, 1, line_no));
}

std::string render_rule(const Rule& rule, RuleForm form) {
  const auto h = decode_header(rule.bits);
  if (form == RuleForm::kRaw) return std::to_string(rule.id) + ",B:" + bit_string(h);
  return std::to_string(rule.id) + ',' + format_tuple(h);
}

std::vector<Rule> parse_rules(std::istream& in) {
  std::vector<Rule> rules;
  std::unordered_map<RuleId, std::size_t> ids;
  std::unordered_map<std::string, RuleId> seen_bits;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    Rule r = parse_rule_line(t, line_no);
    if (auto it = ids.find(r.id); it != ids.end()) {
      throw ParseError(line_no, at_line(line_no) + "duplicate rule id " + std::to_string(r.id) +
                                    " (first seen on line " + std::to_string(it->second) + ")");
    }
    auto key = bit_string(decode_header(r.bits));
    if (auto [it, fresh] = seen_bits.emplace(std::move(key), r.id); !fresh) {
      throw ParseError(line_no, at_line(line_no) + "rule " + std::to_string(r.id) +
                                    " duplicates the header of rule " +
                                    std::to_string(it->second));
    }
    ids.emplace(r.id, line_no);
    rules.push_back(std::move(r));
  }
  return rules;
}

std::vector<Rule> load_rules(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open rule file " + path.string());
  return parse_rules(in);
}

void save_rules(const std::vector<Rule>& rules, const std::filesystem::path& path, RuleForm form) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write rule file " + path.string());
  for (const auto& r : rules) out << render_rule(r, form) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace phm
