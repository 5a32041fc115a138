#include <gtest/gtest.h>

#include "skysample/coverage.hpp"
#include "skysample/dominance.hpp"
#include "skysample/skyline.hpp"
#include "test_support.hpp"

namespace skysample {
namespace {

using testing::random_records;
using testing::TempDir;

TEST(CoverageOracle, MatchesBruteForceDominatedCount) {
  TempDir dir;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const std::uint32_t d = 1 + seed % 5;
    const auto t = random_records(800, d, seed, seed % 3 == 0 ? 5 : 0);
    RelationHeader h;
    h.n = t.size();
    h.d = d;
    const auto path = dir / ("c" + std::to_string(seed));
    write_relation(t, h, path);
    const auto rel = Relation::open(path);
    IoCounter io;
    const auto oracle = CoverageOracle::load(rel, io);

    // Approximations: a sub-sample's skyline, the exact skyline, and nothing.
    const Records sub(t.begin(), t.begin() + 40);
    for (const auto& approx :
         {brute_force_skyline(sub).members, brute_force_skyline(t).members, Records{}}) {
      const auto expected = dominated_count(approx, t);
      EXPECT_EQ(oracle.dominated_count(approx), expected);
      IoCounter sio;
      const auto streamed = streaming_true_error(rel, approx, sio);
      EXPECT_EQ(streamed.dominated_count, expected);
      EXPECT_EQ(sio.pages_read, rel.header().data_pages());
      EXPECT_DOUBLE_EQ(oracle.error_of(approx).error, true_error(approx, t).error);
    }
  }
}

}  // namespace
}  // namespace skysample
