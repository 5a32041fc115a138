#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skysample/dominance.hpp"
#include "skysample/storage.hpp"

namespace skysample {

/// In-memory copy of a relation for repeated DN(approx, T) evaluation.
///
/// Same answer as dominated_count() but members are tried in ascending
/// coordinate-sum order: a member whose sum exceeds the tuple's sum cannot
/// cover it, so uncovered tuples stop early and covered tuples usually hit a
/// low-sum member first.
class CoverageOracle {
 public:
  CoverageOracle(std::vector<double> flat, std::uint32_t d);
  static CoverageOracle load(const Relation& rel, IoCounter& io);

  std::uint64_t size() const noexcept { return n_; }
  std::uint32_t dimension() const noexcept { return d_; }

  std::uint64_t dominated_count(std::span<const TupleRecord> approx) const;
  ErrorReport error_of(std::span<const TupleRecord> approx) const;

 private:
  std::vector<double> flat_;
  std::vector<double> sums_;
  std::uint32_t d_;
  std::uint64_t n_;
};

/// Single streaming pass over the relation, O(|approx|) memory.
ErrorReport streaming_true_error(const Relation& rel, std::span<const TupleRecord> approx,
                                 IoCounter& io);

}  // namespace skysample
