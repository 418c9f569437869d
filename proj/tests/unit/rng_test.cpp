#include "switchexit/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

namespace switchexit {
namespace {

using Counter = Philox4x32::Counter;

// Known-answer vectors published with the Random123 reference implementation.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(Philox4x32::encrypt(Counter{0, 0, 0, 0}, {0, 0}),
            (Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::encrypt(Counter{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                {0xffffffff, 0xffffffff}),
            (Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::encrypt(Counter{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                {0xa4093822, 0x299f31d0}),
            (Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox, UsableAtCompileTime) {
  constexpr Counter out = Philox4x32::encrypt(Counter{0, 0, 0, 0}, {0, 0});
  static_assert(out[0] == 0x6627e8d5u);
}

TEST(RandomStream, Deterministic) {
  RandomStream a(42, 7);
  RandomStream b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(RandomStream, StreamsAndSeedsDiffer) {
  RandomStream base(42, 7);
  RandomStream other_stream(42, 8);
  RandomStream other_seed(43, 7);
  int same_stream = 0;
  int same_seed = 0;
  for (int i = 0; i < 100; ++i) {
    const auto v = base();
    same_stream += v == other_stream();
    same_seed += v == other_seed();
  }
  EXPECT_EQ(same_stream, 0);
  EXPECT_EQ(same_seed, 0);
}

TEST(RandomStream, FirstOutputsComeFromBlockZero) {
  RandomStream s(0, 0);
  const Counter block0 = Philox4x32::encrypt(Counter{0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(s(), (std::uint64_t{block0[1]} << 32) | block0[0]);
  EXPECT_EQ(s(), (std::uint64_t{block0[3]} << 32) | block0[2]);
  EXPECT_EQ(s.blocks_used(), 1u);
  s();
  EXPECT_EQ(s.blocks_used(), 2u);
}

TEST(RandomStream, HighSeedBitsMatter) {
  RandomStream lo(1, 0);
  RandomStream hi((std::uint64_t{1} << 32) | 1, 0);
  EXPECT_NE(lo(), hi());
}

TEST(StreamId, PurposesAreDisjoint) {
  EXPECT_NE(stream_id(StreamPurpose::kPath, 5), stream_id(StreamPurpose::kMartingale, 5));
  EXPECT_EQ(stream_id(StreamPurpose::kPath, 5) >> 56, 1u);
  EXPECT_EQ(stream_id(StreamPurpose::kLimitSample, 0) >> 56, 3u);
}

TEST(RandomStream, UniformOpenInterval) {
  RandomStream s(1, 1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // Mean of U(0,1) has standard error 1/sqrt(12 n).
  EXPECT_NEAR(sum / n, 0.5, 4.0 / std::sqrt(12.0 * n));
}

TEST(RandomStream, ExponentialMoments) {
  RandomStream s(2, 2);
  const double rate = 3.0;
  const int n = 200000;
  double sum = 0.0;
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = s.exponential(rate);
    ASSERT_GT(e, 0.0);
    sum += e;
    sum2 += e * e;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 1.0 / rate, 4.0 * (1.0 / rate) / std::sqrt(n));
  EXPECT_NEAR(sum2 / n - mean * mean, 1.0 / (rate * rate), 0.02 / (rate * rate));
}

TEST(RandomStream, NormalMoments) {
  RandomStream s(3, 3);
  const int n = 200000;
  double sum = 0.0;
  double sum2 = 0.0;
  int below_one = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    sum2 += z * z;
    below_one += z <= 1.0;
  }
  EXPECT_NEAR(sum / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(sum2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
  const double p = 0.841344746068542948585;
  EXPECT_NEAR(static_cast<double>(below_one) / n, p, 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST(RandomStream, SignBalanced) {
  RandomStream s(4, 4);
  const int n = 100000;
  int plus = 0;
  for (int i = 0; i < n; ++i) {
    const int v = s.sign();
    ASSERT_TRUE(v == 1 || v == -1);
    plus += v == 1;
  }
  EXPECT_NEAR(static_cast<double>(plus) / n, 0.5, 4.0 * 0.5 / std::sqrt(n));
}

TEST(RandomStream, WorksWithStandardDistributions) {
  RandomStream s(5, 5);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  std::shuffle(v.begin(), v.end(), s);
  EXPECT_EQ(std::set<int>(v.begin(), v.end()).size(), 50u);
}

}  // namespace
}  // namespace switchexit
