#include <gtest/gtest.h>

#include <filesystem>

#include "oracles.hpp"
#include "phm/trace_io.hpp"

namespace phm {
namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("phm_test_" + name);
}

TEST(WriteTrace, EmptyBinaryIsTwelveBytes) {
  const auto bytes = serialize_trace({}, TraceFormat::kBinary);
  EXPECT_EQ(bytes, std::string("PHT1\0\0\0\0\0\0\0\0", 12));
  EXPECT_TRUE(parse_trace(bytes).headers.empty());
}

TEST(WriteTrace, OneZeroRecord) {
  const std::vector<Header5Tuple> one{Header5Tuple{}};
  const auto bytes = serialize_trace(one, TraceFormat::kBinary);
  ASSERT_EQ(bytes.size(), 25u);
  EXPECT_EQ(bytes.substr(0, 12), std::string("PHT1\0\0\0\0\0\0\0\1", 12));
  EXPECT_EQ(bytes.substr(12), std::string(13, '\0'));
}

TEST(WriteTrace, BigEndianFieldLayout) {
  const std::vector<Header5Tuple> one{{0x01020304U, 0x0506, 0x0708090AU, 0x0B0C, 0x0D}};
  const auto bytes = serialize_trace(one, TraceFormat::kBinary);
  EXPECT_EQ(bytes.substr(12), std::string("\1\2\3\4\5\6\7\10\11\12\13\14\15", 13));
}

TEST(WriteTrace, CsvLine) {
  const std::vector<Header5Tuple> one{{0x0A000001U, 80, 0x0A000002U, 443, 6}};
  EXPECT_EQ(serialize_trace(one, TraceFormat::kCsv), "10.0.0.1,80,10.0.0.2,443,6\n");
}

TEST(ReadTrace, AllOnesRecord) {
  const auto bytes = std::string("PHT1\0\0\0\0\0\0\0\1", 12) + std::string(13, '\xFF');
  const auto t = parse_trace(bytes);
  ASSERT_EQ(t.headers.size(), 1u);
  EXPECT_EQ(t.format, TraceFormat::kBinary);
  EXPECT_EQ(t.headers[0], (Header5Tuple{0xFFFFFFFFU, 0xFFFF, 0xFFFFFFFFU, 0xFFFF, 0xFF}));
}

TEST(ReadTrace, BinaryErrorsCarryByteOffsets) {
  const std::vector<Header5Tuple> two(2);
  auto bytes = serialize_trace(two, TraceFormat::kBinary);

  try {
    parse_trace(bytes.substr(0, 30));
    FAIL();
  } catch (const TraceError& e) {
    EXPECT_EQ(e.position(), 25u);  // second record starts there
  }

  auto wrong = bytes;
  wrong[11] = 3;
  EXPECT_THROW(parse_trace(wrong), TraceError);
  EXPECT_THROW(parse_trace(bytes + std::string(13, '\0')), TraceError);
  EXPECT_THROW(parse_trace(bytes.substr(0, 7)), TraceError);
  EXPECT_THROW(parse_trace("PH"), TraceError);
}

TEST(ReadTrace, CsvCommentsAndErrors) {
  const auto t = parse_trace("# trace\n10.0.0.1,80,10.0.0.2,443,6\n\n1.2.3.4,1,5.6.7.8,2,17\n");
  EXPECT_EQ(t.format, TraceFormat::kCsv);
  ASSERT_EQ(t.headers.size(), 2u);
  EXPECT_EQ(t.headers[1].protocol, 17);

  try {
    parse_trace("10.0.0.1,80,10.0.0.2,443,6\n10.0.0.1,80,10.0.0.2,70000,6\n");
    FAIL();
  } catch (const TraceError& e) {
    EXPECT_EQ(e.position(), 2u);
  }
}

TEST(TraceRoundTrip, BinaryIsByteIdenticalAndCsvValueIdentical) {
  TraceRng rng(123);
  std::vector<Header5Tuple> headers(10000);
  for (auto& h : headers) h = rng.header();

  const auto bin_path = temp_file("roundtrip.pht");
  write_trace(headers, bin_path, TraceFormat::kBinary);
  const auto back = read_trace(bin_path);
  EXPECT_EQ(back.headers, headers);
  EXPECT_EQ(serialize_trace(back.headers, TraceFormat::kBinary),
            serialize_trace(headers, TraceFormat::kBinary));

  const auto csv_path = temp_file("roundtrip.csv");
  write_trace(headers, csv_path, TraceFormat::kCsv);
  EXPECT_EQ(read_trace(csv_path).headers, headers);
  std::filesystem::remove(bin_path);
  std::filesystem::remove(csv_path);
}

TEST(TraceRng, BelowIsInRangeAndCoversValues) {
  TraceRng rng(1);
  std::array<int, 7> hist{};
  for (int i = 0; i < 7000; ++i) {
    const auto v = rng.below(7);
    ASSERT_LT(v, 7u);
    ++hist[v];
  }
  for (int c : hist) EXPECT_GT(c, 800);
}

TEST(TraceRng, FirstOutputsAreFrozen) {
  // std::mt19937_64 is fully specified; its 10000th output from the default
  // seed is fixed by the standard.
  std::mt19937_64 ref;
  ref.discard(9999);
  EXPECT_EQ(ref(), 9981545732273789042ULL);
}

TEST(GenerateTrace, CountZero) {
  EXPECT_TRUE(generate_trace({0, 1, 0.5, {}}).headers.empty());
}

TEST(GenerateTrace, AllMatchWhenFractionIsOne) {
  const auto rules = generate_rules(10, 2);
  const auto t = generate_trace({100, 3, 1.0, rules});
  ASSERT_EQ(t.headers.size(), 100u);
  for (const auto& h : t.headers) EXPECT_TRUE(oracle::scan(rules, h).has_value());
}

TEST(GenerateTrace, ExactMatchFraction) {
  const auto rules = generate_rules(50, 2);
  const auto t = generate_trace({1001, 4, 0.1, rules});
  std::size_t hits = 0;
  for (const auto& h : t.headers) hits += oracle::scan(rules, h).has_value();
  EXPECT_EQ(hits, 100u);
}

TEST(GenerateTrace, DeterministicForSeed) {
  const auto rules = generate_rules(20, 2);
  const auto a = generate_trace({500, 77, 0.3, rules});
  const auto b = generate_trace({500, 77, 0.3, rules});
  const auto c = generate_trace({500, 78, 0.3, rules});
  EXPECT_EQ(serialize_trace(a.headers, TraceFormat::kBinary),
            serialize_trace(b.headers, TraceFormat::kBinary));
  EXPECT_NE(a.headers, c.headers);
}

TEST(GenerateTrace, Errors) {
  EXPECT_THROW(generate_trace({10, 1, 0.5, {}}), std::invalid_argument);
  const auto rules = generate_rules(2, 2);
  EXPECT_THROW(generate_trace({10, 1, 1.5, rules}), std::invalid_argument);
  EXPECT_THROW(generate_trace({10, 1, -0.1, rules}), std::invalid_argument);
  // floor(10 * 0.05) = 0 matches, so no rules are needed.
  EXPECT_EQ(generate_trace({10, 1, 0.05, {}}).headers.size(), 10u);
}

TEST(GenerateRules, DistinctWithSequentialIds) {
  const auto rules = generate_rules(1000, 9);
  std::set<std::string> bits;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    EXPECT_EQ(rules[i].id, i + 1);
    bits.insert(oracle::sequence_text(rules[i].bits));
  }
  EXPECT_EQ(bits.size(), 1000u);
}

}  // namespace
}  // namespace phm
