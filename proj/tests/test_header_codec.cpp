#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "phm/header_codec.hpp"
#include "phm/trace_io.hpp"

namespace phm {
namespace {

TEST(EncodeHeader, AllZeroTupleIsAllMinusOne) {
  const auto seq = encode_header(Header5Tuple{});
  EXPECT_EQ(seq.size(), kSequenceLength);
  EXPECT_TRUE((seq.array() == -1).all());
}

TEST(EncodeHeader, SingleHighBitOfSourceAddress) {
  Header5Tuple h;
  h.src_addr = 0x80000000U;
  const auto seq = encode_header(h);
  EXPECT_EQ(seq(0), 1);
  EXPECT_TRUE((seq.tail(kSequenceLength - 1).array() == -1).all());
}

TEST(EncodeHeader, WorkedTupleMatchesFrozenExpansion) {
  const Header5Tuple h{0xC0A80101U, 80, 0x0A000001U, 443, 6};
  // Frozen from an independent per-field binary expansion.
  const std::string expected =
      "110000001010100000000001000000010000000001010000000010100000000000000000000000010000000"
      "110111011000001100";
  ASSERT_EQ(expected.size(), 105u);
  EXPECT_EQ(oracle::sequence_text(encode_header(h)), expected);
  EXPECT_EQ(oracle::expand_bits(h), expected);

  const std::array<int, kChunkCount> frozen_indices{6, 0, 1, 2, 4, 0, 0, 1, 0, 0, 2, 0,
                                                    0, 1, 2, 0, 0, 2, 4, 0, 0, 0, 0, 0,
                                                    0, 0, 2, 0, 0, 6, 7, 3, 0, 1, 4};
  const auto cs = chunks(encode_header(h));
  ASSERT_EQ(cs.size(), static_cast<std::size_t>(kChunkCount));
  for (int k = 0; k < kChunkCount; ++k) {
    const int v = (cs[k](0) > 0) * 4 + (cs[k](1) > 0) * 2 + (cs[k](2) > 0);
    EXPECT_EQ(v, frozen_indices[k]) << "chunk " << k;
  }
}

TEST(EncodeHeader, RandomTuplesAgreeWithOracleAndDecode) {
  TraceRng rng(42);
  for (int i = 0; i < 2000; ++i) {
    const auto h = rng.header();
    const auto seq = encode_header(h);
    EXPECT_EQ(oracle::sequence_text(seq), oracle::expand_bits(h));
    EXPECT_EQ(seq(kHeaderBits), -1);
    EXPECT_TRUE(is_bipolar(seq));
    EXPECT_EQ(decode_header(seq), h);
  }
}

TEST(EncodeHeader, DistinctTuplesGiveDistinctSequences) {
  TraceRng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const auto a = rng.header();
    auto b = a;
    // Flip one random bit of one field.
    switch (rng.below(5)) {
      case 0: b.src_addr ^= 1U << rng.below(32); break;
      case 1: b.src_port ^= static_cast<std::uint16_t>(1U << rng.below(16)); break;
      case 2: b.dst_addr ^= 1U << rng.below(32); break;
      case 3: b.dst_port ^= static_cast<std::uint16_t>(1U << rng.below(16)); break;
      default: b.protocol ^= static_cast<std::uint8_t>(1U << rng.below(8)); break;
    }
    EXPECT_NE(encode_header(a), encode_header(b));
  }
}

TEST(DecodeHeader, RejectsBadPadAndNonBipolar) {
  auto seq = encode_header(Header5Tuple{});
  seq(kHeaderBits) = 1;
  EXPECT_THROW(decode_header(seq), std::invalid_argument);
  seq(kHeaderBits) = -1;
  seq(3) = 0;
  EXPECT_THROW(decode_header(seq), std::invalid_argument);
}

TEST(Chunks, AllMinusOne) {
  const auto cs = chunks(BipolarSequence::Constant(-1));
  ASSERT_EQ(cs.size(), 35u);
  for (const auto& c : cs) EXPECT_EQ(c, ChunkPattern::Constant(-1));
}

TEST(Chunks, FirstChunkAndPartitionProperty) {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    BipolarSequence seq;
    for (Eigen::Index i = 0; i < seq.size(); ++i) seq(i) = (gen() & 1U) ? 1 : -1;
    seq.head<3>() << 1, 1, -1;
    const auto cs = chunks(seq);
    EXPECT_EQ(cs.front(), ChunkPattern(1, 1, -1));
    BipolarSequence joined;
    for (int k = 0; k < kChunkCount; ++k) joined.segment<3>(3 * k) = cs[k];
    EXPECT_EQ(joined, seq);
  }
}

TEST(Chunks, DynamicLengthNotMultipleOfThreeIsCorruption) {
  Eigen::VectorXi v = Eigen::VectorXi::Constant(104, -1);
  EXPECT_THROW(chunks(v), std::logic_error);
}

TEST(ParseRuleLine, AllZeroTuple) {
  const auto r = parse_rule_line("1,0.0.0.0,0,0.0.0.0,0,0");
  EXPECT_EQ(r.id, 1u);
  EXPECT_TRUE((r.bits.array() == -1).all());
}

TEST(ParseRuleLine, AllOneTuple) {
  const auto r = parse_rule_line("7,255.255.255.255,65535,255.255.255.255,65535,255");
  EXPECT_EQ(r.id, 7u);
  EXPECT_TRUE((r.bits.head(kHeaderBits).array() == 1).all());
  EXPECT_EQ(r.bits(kHeaderBits), -1);
}

TEST(ParseRuleLine, FirstChunkOf192) {
  const auto r = parse_rule_line("3,192.168.1.1,80,10.0.0.1,443,6");
  EXPECT_EQ(ChunkPattern(chunk_at(r.bits, 0)), ChunkPattern(1, 1, -1));
}

TEST(ParseRuleLine, RawFormMatchesTupleForm) {
  const Header5Tuple h{0xC0A80101U, 80, 0x0A000001U, 443, 6};
  const auto raw = parse_rule_line("9,B:" + bit_string(h));
  EXPECT_EQ(raw.id, 9u);
  EXPECT_EQ(raw.bits, encode_header(h));
}

TEST(ParseRuleLine, Errors) {
  auto line_of = [](const std::string& s) {
    try {
      parse_rule_line(s, 17);
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find("line 17"), std::string::npos) << e.what();
      return e.line();
    }
    ADD_FAILURE() << "no error for '" << s << "'";
    return std::size_t{0};
  };
  EXPECT_EQ(line_of("1,10.0.0.1,65536,10.0.0.2,1,6"), 17u);   // port > 65535
  EXPECT_EQ(line_of("1,10.0.0.1,1,10.0.0.2,1,256"), 17u);     // protocol > 255
  EXPECT_EQ(line_of("1,10.0.0.256,1,10.0.0.2,1,6"), 17u);     // bad octet
  EXPECT_EQ(line_of("1,10.0.0.1,x,10.0.0.2,1,6"), 17u);       // non-numeric
  EXPECT_EQ(line_of("1,10.0.0.1,1,10.0.0.2,1"), 17u);         // field count
  EXPECT_EQ(line_of("1,B:0101"), 17u);                        // raw length
  EXPECT_EQ(line_of("1,B:" + std::string(103, '0') + "2"), 17u);  // non-0/1
  EXPECT_EQ(line_of("x,10.0.0.1,1,10.0.0.2,1,6"), 17u);       // id
}

TEST(RenderRule, RoundTripsBothForms) {
  const auto rules = generate_rules(300, 77);
  for (const auto& r : rules) {
    for (auto form : {RuleForm::kTuple, RuleForm::kRaw}) {
      const auto back = parse_rule_line(render_rule(r, form));
      EXPECT_EQ(back.id, r.id);
      EXPECT_EQ(back.bits, r.bits);
    }
  }
}

TEST(ParseRules, SkipsCommentsAndBlankLines) {
  std::istringstream in("# header rules\n\n1,10.0.0.1,80,10.0.0.2,443,6\n   \n# end\n2,B:" +
                        std::string(104, '1') + "\n");
  const auto rules = parse_rules(in);
  ASSERT_EQ(rules.size(), 2u);
  EXPECT_EQ(rules[1].id, 2u);
}

TEST(ParseRules, DuplicateBitsNameBothIds) {
  std::istringstream in("4,10.0.0.1,80,10.0.0.2,443,6\n9,B:" +
                        bit_string(Header5Tuple{0x0A000001U, 80, 0x0A000002U, 443, 6}) + "\n");
  try {
    parse_rules(in);
    FAIL() << "duplicate accepted";
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(msg.find("rule 9"), std::string::npos) << msg;
    EXPECT_NE(msg.find("rule 4"), std::string::npos) << msg;
  }
}

TEST(ParseRules, DuplicateIdsRejected) {
  std::istringstream in("4,10.0.0.1,80,10.0.0.2,443,6\n4,10.0.0.1,80,10.0.0.2,443,17\n");
  EXPECT_THROW(parse_rules(in), ParseError);
}

}  // namespace
}  // namespace phm
