#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skysample/rng.hpp"
#include "skysample/storage.hpp"

namespace skysample {

/// A without-replacement subset of a relation, in ascending index order.
struct Sample {
  Records records;
  std::vector<std::uint64_t> source_indices;
  std::uint64_t seed = 0;
  bool replacement = false;
};

/// Floyd's algorithm: a uniform m-subset of {0, …, n−1}, returned sorted.
/// Throws ContractViolation if m > n.
std::vector<std::uint64_t> floyd_subset(std::uint64_t n, std::uint64_t m, SplitMix64& rng);

/// Fetches sorted, distinct indices page by page; each distinct page touched
/// is charged once.
Records fetch_records(const Relation& rel, std::span<const std::uint64_t> sorted_indices,
                      IoCounter& io);

/// Uniform m-subset of the relation. Deterministic in `seed`.
Sample sample_without_replacement(const Relation& rel, std::uint64_t m, std::uint64_t seed,
                                  IoCounter& io);

/// Draws successive batches that are disjoint from everything drawn before,
/// so the union of all batches is itself a uniform without-replacement sample.
class IncrementalSampler {
 public:
  IncrementalSampler(const Relation& rel, std::uint64_t seed);

  /// Next `m` fresh records. Throws ContractViolation if fewer remain.
  Sample draw(std::uint64_t m, IoCounter& io);

  std::uint64_t drawn() const noexcept { return taken_.size(); }
  std::uint64_t remaining() const noexcept { return rel_->size() - taken_.size(); }

 private:
  const Relation* rel_;
  SplitMix64 rng_;
  std::uint64_t seed_;
  std::vector<std::uint64_t> taken_;  // sorted
};

}  // namespace skysample
