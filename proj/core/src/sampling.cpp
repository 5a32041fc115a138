#include "skysample/sampling.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "skysample/error.hpp"

namespace skysample {

std::vector<std::uint64_t> floyd_subset(std::uint64_t n, std::uint64_t m, SplitMix64& rng) {
  if (m > n) {
    throw ContractViolation("cannot draw " + std::to_string(m) + " of " + std::to_string(n) +
                            " without replacement");
  }
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(m);
  for (std::uint64_t j = n - m; j < n; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> out(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

Records fetch_records(const Relation& rel, std::span<const std::uint64_t> sorted_indices,
                      IoCounter& io) {
  const auto& h = rel.header();
  Records out;
  out.reserve(sorted_indices.size());
  std::vector<std::byte> page;
  std::uint64_t loaded = UINT64_MAX;
  for (std::uint64_t index : sorted_indices) {
    if (index >= h.n) throw ContractViolation("index " + std::to_string(index) + " >= n");
    const std::uint64_t p = h.page_of(index);
    if (p != loaded) {
      if (loaded == UINT64_MAX || p != loaded + 1) ++io.seeks;
      rel.read_page(p, page, io);
      loaded = p;
    }
    out.push_back(rel.decode(page, index - p * h.records_per_page(), index));
  }
  return out;
}

Sample sample_without_replacement(const Relation& rel, std::uint64_t m, std::uint64_t seed,
                                  IoCounter& io) {
  SplitMix64 rng(seed);
  Sample s;
  s.seed = seed;
  s.source_indices = floyd_subset(rel.size(), m, rng);
  s.records = fetch_records(rel, s.source_indices, io);
  return s;
}

IncrementalSampler::IncrementalSampler(const Relation& rel, std::uint64_t seed)
    : rel_(&rel), rng_(seed), seed_(seed) {}

Sample IncrementalSampler::draw(std::uint64_t m, IoCounter& io) {
  if (m > remaining()) {
    throw ContractViolation("only " + std::to_string(remaining()) + " undrawn records left, asked for " +
                            std::to_string(m));
  }
  // Uniform m-subset of the ranks of undrawn records, then map rank r to the
  // r-th undrawn index by walking both sorted lists.
  const auto ranks = floyd_subset(remaining(), m, rng_);
  std::vector<std::uint64_t> fresh;
  fresh.reserve(m);
  std::size_t skipped = 0;  // taken_ entries below the candidate index
  for (std::uint64_t r : ranks) {
    std::uint64_t candidate = r + skipped;
    while (skipped < taken_.size() && taken_[skipped] <= candidate) {
      ++skipped;
      candidate = r + skipped;
    }
    fresh.push_back(candidate);
  }

  Sample s;
  s.seed = seed_;
  s.records = fetch_records(*rel_, fresh, io);
  s.source_indices = fresh;

  std::vector<std::uint64_t> merged;
  merged.reserve(taken_.size() + fresh.size());
  std::merge(taken_.begin(), taken_.end(), fresh.begin(), fresh.end(), std::back_inserter(merged));
  taken_ = std::move(merged);
  return s;
}

}  // namespace skysample
