#pragma once

#include <cstdint>
#include <span>

#include "skysample/tuple.hpp"

namespace skysample {

/// a ≺ b: a is no worse on every attribute and strictly better on one.
bool dominates(const TupleRecord& a, const TupleRecord& b);

/// a ⪯ b: a ≺ b or the two carry exactly equal values.
bool dominates_or_equal(const TupleRecord& a, const TupleRecord& b);

// Unchecked kernels over raw value spans of equal length.
bool dominates_unchecked(std::span<const double> a, std::span<const double> b) noexcept;
bool covers_unchecked(std::span<const double> a, std::span<const double> b) noexcept;

/// Number of records in `all` covered (⪯) by at least one member of `q`.
/// Brute force O(|q|·n) reference; an empty `q` covers nothing.
std::uint64_t dominated_count(std::span<const TupleRecord> q,
                              std::span<const TupleRecord> all);

/// DN-based error of an approximate skyline against the full relation.
struct ErrorReport {
  std::uint64_t dominated_count = 0;
  std::uint64_t total = 0;
  double error = 0.0;
};

/// (n − DN(approx)) / n. Throws ContractViolation on an empty relation.
ErrorReport true_error(std::span<const TupleRecord> approx,
                       std::span<const TupleRecord> all);

/// No member strictly dominates another.
bool is_antichain(std::span<const TupleRecord> q);

}  // namespace skysample
