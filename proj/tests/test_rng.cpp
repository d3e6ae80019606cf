#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "randopt/rng.hpp"

using randopt::RngStream;

TEST(Rng, MatchesSplitMix64ReferenceOutputs) {
  // Published SplitMix64 outputs for seed 0.
  RngStream rng(0);
  EXPECT_EQ(rng.next_u64(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next_u64(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng.next_u64(), 0x06C45D188009454FULL);
}

TEST(Rng, SameKeySameStream) {
  RngStream a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_EQ(a.counter(), 100u);
}

TEST(Rng, SplitIsDeterministicAndDistinct) {
  const RngStream root(7);
  RngStream a = root.split(3), b = root.split(3), c = root.split(4);
  EXPECT_EQ(a.key(), b.key());
  EXPECT_NE(a.key(), c.key());
  EXPECT_NE(a.key(), root.key());
  std::set<std::uint64_t> keys;
  for (std::uint64_t i = 0; i < 1000; ++i) keys.insert(root.split(i).key());
  EXPECT_EQ(keys.size(), 1000u);
}

TEST(Rng, SplitIgnoresParentPosition) {
  RngStream a(9), b(9);
  b.next_u64();
  EXPECT_EQ(a.split(1).key(), b.split(1).key());
}

TEST(Rng, UniformMoments) {
  RngStream rng(1);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 0.005);
  EXPECT_NEAR(s2 / n - (s / n) * (s / n), 1.0 / 12.0, 0.002);
}

TEST(Rng, NormalMoments) {
  RngStream rng(2);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Rng, UniformIndexCoversRange) {
  RngStream rng(3);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.uniform_index(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  EXPECT_THROW(rng.uniform_index(0), randopt::InvalidArgument);
}

TEST(Rng, BernoulliFrequency) {
  RngStream rng(4);
  int hits = 0;
  for (int i = 0; i < 100000; ++i) hits += rng.bernoulli(0.3);
  EXPECT_NEAR(hits / 1e5, 0.3, 0.005);
  RngStream one(5);
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(one.bernoulli(1.0));
}

TEST(Rng, UnitVectorHasUnitNorm) {
  RngStream rng(5);
  for (int n : {1, 2, 10}) EXPECT_NEAR(rng.unit_vector(n).norm(), 1.0, 1e-14);
}

TEST(Rng, SampleWithoutReplacement) {
  RngStream rng(6);
  const auto idx = rng.sample_without_replacement(20, 8);
  ASSERT_EQ(idx.size(), 8u);
  std::set<std::size_t> uniq(idx.begin(), idx.end());
  EXPECT_EQ(uniq.size(), 8u);
  for (auto i : idx) EXPECT_LT(i, 20u);
  const auto all = rng.sample_without_replacement(5, 5);
  EXPECT_EQ(std::set<std::size_t>(all.begin(), all.end()).size(), 5u);
  EXPECT_THROW(rng.sample_without_replacement(3, 4), randopt::InvalidArgument);
}
