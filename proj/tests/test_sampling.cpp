#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "skysample/error.hpp"
#include "skysample/sampling.hpp"
#include "test_support.hpp"

namespace skysample {
namespace {

using testing::random_records;
using testing::TempDir;

class SamplingTest : public ::testing::Test {
 protected:
  void SetUp() override {
    RelationHeader h;
    h.n = 5000;
    h.d = 2;
    write_relation(random_records(5000, 2, 17), h, dir_ / "s.skyr");
  }
  Relation open() const { return Relation::open(dir_ / "s.skyr"); }
  TempDir dir_;
};

TEST(FloydSubset, Limits) {
  SplitMix64 rng(1);
  const auto all = floyd_subset(50, 50, rng);
  ASSERT_EQ(all.size(), 50u);
  for (std::uint64_t i = 0; i < 50; ++i) EXPECT_EQ(all[i], i);
  EXPECT_TRUE(floyd_subset(50, 0, rng).empty());
  EXPECT_THROW(floyd_subset(5, 6, rng), ContractViolation);
}

TEST(FloydSubset, MarginalFrequencyIsMOverN) {
  // Exact marginal is m/n = 1/4; binomial sd over 20000 draws is ~0.003.
  SplitMix64 rng(123);
  std::vector<int> hits(8, 0);
  const int draws = 20000;
  for (int k = 0; k < draws; ++k) {
    for (auto i : floyd_subset(8, 2, rng)) ++hits[i];
  }
  for (int h : hits) EXPECT_NEAR(static_cast<double>(h) / draws, 0.25, 0.02);
}

TEST(FloydSubset, PairsAreUniform) {
  // All C(6,2) = 15 pairs equally likely: chi-square with 14 dof.
  SplitMix64 rng(77);
  std::map<std::pair<std::uint64_t, std::uint64_t>, int> counts;
  const int draws = 30000;
  for (int k = 0; k < draws; ++k) {
    const auto s = floyd_subset(6, 2, rng);
    ++counts[{s[0], s[1]}];
  }
  ASSERT_EQ(counts.size(), 15u);
  const double expected = draws / 15.0;
  double chi2 = 0.0;
  for (const auto& [pair, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 36.12);  // 99.9th percentile, 14 dof
}

TEST_F(SamplingTest, ExhaustiveAndEmpty) {
  const auto rel = open();
  IoCounter io;
  const auto full = sample_without_replacement(rel, 5000, 3, io);
  ASSERT_EQ(full.source_indices.size(), 5000u);
  EXPECT_EQ(full.source_indices.front(), 0u);
  EXPECT_EQ(full.source_indices.back(), 4999u);
  EXPECT_EQ(io.pages_read, rel.header().data_pages());
  IoCounter io0;
  EXPECT_TRUE(sample_without_replacement(rel, 0, 3, io0).records.empty());
  EXPECT_EQ(io0.pages_read, 0u);
  EXPECT_THROW(sample_without_replacement(rel, 5001, 3, io0), ContractViolation);
}

TEST_F(SamplingTest, SortedDistinctDeterministicAndPageBounded) {
  const auto rel = open();
  const std::uint64_t data_pages = rel.header().data_pages();
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const std::uint64_t m = seed * 37;
    IoCounter io;
    const auto s = sample_without_replacement(rel, m, seed, io);
    ASSERT_EQ(s.records.size(), m);
    EXPECT_FALSE(s.replacement);
    EXPECT_TRUE(std::adjacent_find(s.source_indices.begin(), s.source_indices.end(),
                                   std::greater_equal<>()) == s.source_indices.end());
    for (std::size_t i = 0; i < m; ++i) EXPECT_EQ(s.records[i].index(), s.source_indices[i]);
    std::set<std::uint64_t> pages;
    for (auto i : s.source_indices) pages.insert(rel.header().page_of(i));
    EXPECT_EQ(io.pages_read, pages.size());
    EXPECT_LE(io.pages_read, std::min(m, data_pages) + 1);

    IoCounter again;
    EXPECT_EQ(sample_without_replacement(rel, m, seed, again).source_indices, s.source_indices);
  }
}

TEST_F(SamplingTest, IncrementalBatchesAreDisjointAndExhaustive) {
  const auto rel = open();
  IncrementalSampler sampler(rel, 5);
  IoCounter io;
  std::set<std::uint64_t> seen;
  for (std::uint64_t m : {100u, 100u, 200u, 400u, 800u, 1600u}) {
    const auto s = sampler.draw(m, io);
    ASSERT_EQ(s.records.size(), m);
    for (auto i : s.source_indices) EXPECT_TRUE(seen.insert(i).second) << "index drawn twice";
  }
  EXPECT_EQ(sampler.remaining(), 5000u - 3200u);
  EXPECT_THROW(sampler.draw(1801, io), ContractViolation);
  sampler.draw(1800, io);
  EXPECT_EQ(sampler.remaining(), 0u);
}

TEST_F(SamplingTest, IncrementalMarginalIsUniform) {
  TempDir dir;
  RelationHeader h;
  h.n = 10;
  h.d = 1;
  write_relation(random_records(10, 1, 3), h, dir / "ten.skyr");
  const auto rel = Relation::open(dir / "ten.skyr");
  std::vector<int> hits(10, 0);
  const int trials = 20000;
  for (int k = 0; k < trials; ++k) {
    IncrementalSampler sampler(rel, static_cast<std::uint64_t>(k) + 1);
    IoCounter io;
    sampler.draw(2, io);
    for (auto i : sampler.draw(3, io).source_indices) ++hits[i];
  }
  // Second batch alone is a uniform 3-subset: marginal 0.3, sd ~0.0032.
  for (int h2 : hits) EXPECT_NEAR(static_cast<double>(h2) / trials, 0.3, 0.015);
}

}  // namespace
}  // namespace skysample
