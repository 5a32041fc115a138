#pragma once

#include <cstdint>
#include <numbers>

namespace skysample {

inline constexpr double kEulerGamma = 0.5772156649;
inline constexpr std::uint64_t kHarmonicExactLimit = 10'000'000;

/// Higher-order harmonic numbers: H_{0,n} = 1 and
/// H_{k,n} = sum_{i=1..n} H_{k-1,i} / i.
///
/// H_{d-1,n} is the expected skyline size of n points with independent,
/// distinct-valued attributes. Uses the recurrence for n <= 10^7 and
/// harmonic_asymptotic() above that.
double harmonic(unsigned k, std::uint64_t n);

/// Recurrence only, O(k·n) time and O(k) memory.
double harmonic_recurrence(unsigned k, std::uint64_t n);

/// Leading two terms (ln n)^k/k! + gamma (ln n)^(k-1)/(k-1)!.
/// Within 1% of the recurrence for k <= 2 once n >= 10^6; the dropped
/// O((ln n)^(k-2)) term makes it worse for larger k.
double harmonic_two_term(unsigned k, std::uint64_t n);

/// sum_{j=0..k} c_j (ln n)^(k-j) / (k-j)!, where c_j are the Taylor
/// coefficients of Gamma(1 - z) (c_0 = 1, c_1 = gamma). Starts with the two
/// leading terms above and is accurate to O(1/n) relative for every k.
double harmonic_asymptotic(unsigned k, std::uint64_t n);

}  // namespace skysample
