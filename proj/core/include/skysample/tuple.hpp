#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace skysample {

/// A d-dimensional point with its ordinal position in the source relation.
///
/// Values are finite and non-empty; construction rejects NaN and infinities so
/// that dominance stays a strict partial order. Orientation is minimization:
/// smaller is better on every attribute.
class TupleRecord {
 public:
  TupleRecord(std::uint64_t index, std::vector<double> values);

  std::uint64_t index() const noexcept { return index_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t dimension() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// Value equality; the index is ignored.
  bool same_values(const TupleRecord& other) const noexcept {
    return values_ == other.values_;
  }

  friend bool operator==(const TupleRecord&, const TupleRecord&) = default;

 private:
  std::uint64_t index_;
  std::vector<double> values_;
};

using Records = std::vector<TupleRecord>;

/// Sorted indices of a record set, the canonical form for comparing skylines.
std::vector<std::uint64_t> index_set(std::span<const TupleRecord> records);

/// Throws ContractViolation unless every record has dimension `d`.
void require_dimension(std::span<const TupleRecord> records, std::size_t d);

}  // namespace skysample
