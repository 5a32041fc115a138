#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "skysample/harmonic.hpp"

namespace skysample {
namespace {

// H_{1,n} and H_{2,n} = (H_n^2 + H_n^(2)) / 2 in closed form, independent of
// the nested recurrence.
double h1(std::uint64_t n) {
  long double s = 0;
  for (std::uint64_t i = 1; i <= n; ++i) s += 1.0L / i;
  return static_cast<double>(s);
}
double h2(std::uint64_t n) {
  long double a = 0, b = 0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    a += 1.0L / i;
    b += 1.0L / (static_cast<long double>(i) * i);
  }
  return static_cast<double>((a * a + b) / 2);
}

TEST(Harmonic, BaseCase) {
  for (std::uint64_t n : {1u, 2u, 10u, 1000u}) EXPECT_EQ(harmonic(0, n), 1.0);
  EXPECT_EQ(harmonic(0, 100'000'000), 1.0);
}

TEST(Harmonic, SmallValues) {
  EXPECT_DOUBLE_EQ(harmonic(1, 4), 25.0 / 12.0);
  EXPECT_DOUBLE_EQ(harmonic(2, 3), 85.0 / 36.0);
  EXPECT_DOUBLE_EQ(harmonic(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(harmonic(5, 1), 1.0);
}

TEST(Harmonic, RecurrenceMatchesClosedForms) {
  for (std::uint64_t n : {7u, 100u, 12345u, 1'000'000u}) {
    EXPECT_NEAR(harmonic_recurrence(1, n), h1(n), 1e-12 * h1(n));
    EXPECT_NEAR(harmonic_recurrence(2, n), h2(n), 1e-12 * h2(n));
  }
}

TEST(Harmonic, TwoTermExpansionWithinOnePercentAtOrderTwo) {
  const double exact = harmonic_recurrence(2, 1'000'000);
  EXPECT_LT(std::abs(harmonic_two_term(2, 1'000'000) - exact) / exact, 0.01);
}

TEST(Harmonic, FullExpansionTracksRecurrence) {
  for (unsigned k = 1; k <= 7; ++k) {
    const double exact = harmonic_recurrence(k, 10'000'000);
    EXPECT_LT(std::abs(harmonic_asymptotic(k, 10'000'000) - exact) / exact, 1e-5) << "k=" << k;
  }
}

TEST(Harmonic, ContinuousAcrossBranchSwitch) {
  for (unsigned k = 1; k <= 4; ++k) {
    const double below = harmonic(k, kHarmonicExactLimit);
    const double above = harmonic(k, kHarmonicExactLimit + 1);
    EXPECT_GE(above, below);
    EXPECT_LT((above - below) / below, 1e-5);
  }
}

TEST(Harmonic, MonotoneInOrderAndCount) {
  for (unsigned k = 0; k < 5; ++k) {
    EXPECT_LT(harmonic(k, 50), harmonic(k + 1, 50));
    if (k > 0) EXPECT_LT(harmonic(k, 50), harmonic(k, 51));
  }
}

}  // namespace
}  // namespace skysample
