#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "skysample/tuple.hpp"

namespace skysample {

enum class Engine { kBnl, kSfs, kDc, kBrute };

std::string_view engine_name(Engine e) noexcept;
std::optional<Engine> parse_engine(std::string_view name) noexcept;

/// An antichain of input records plus how it was obtained.
struct SkylineResult {
  Records members;
  Engine algorithm = Engine::kBrute;
  std::uint64_t comparisons = 0;  // dominance tests performed
  std::uint64_t duration_ns = 0;
};

/// Pull-based source of records, consumed once.
class RecordStream {
 public:
  virtual ~RecordStream() = default;
  /// Returns std::nullopt once exhausted.
  virtual std::optional<TupleRecord> next() = 0;
};

/// Stream over an in-memory sequence; the sequence must outlive the stream.
class SpanStream final : public RecordStream {
 public:
  explicit SpanStream(std::span<const TupleRecord> records) : records_(records) {}
  std::optional<TupleRecord> next() override {
    if (pos_ == records_.size()) return std::nullopt;
    return records_[pos_++];
  }

 private:
  std::span<const TupleRecord> records_;
  std::size_t pos_ = 0;
};

/// O(n²) reference: every record not strictly dominated by another.
/// Exact duplicates of a non-dominated value are all kept.
SkylineResult brute_force_skyline(std::span<const TupleRecord> records);

/// Block-nested-loops with a window of at most `window_capacity` records.
/// Records that do not fit are spilled to an anonymous temporary file and
/// re-read in later passes. Throws IoError if the spill file fails.
SkylineResult bnl_skyline(RecordStream& input, std::size_t window_capacity);
SkylineResult bnl_skyline(std::span<const TupleRecord> records, std::size_t window_capacity);

/// Sort-filter-skyline: sort by coordinate sum, then a single filter pass.
SkylineResult sfs_skyline(RecordStream& input);
SkylineResult sfs_skyline(std::span<const TupleRecord> records);

/// Divide and conquer: halve, recurse, combine with merge_skyline.
SkylineResult dc_skyline(std::span<const TupleRecord> records);

/// Skyline of the union of two antichains.
SkylineResult merge_skyline(const SkylineResult& a, const SkylineResult& b);

/// Dispatch on `engine`. BNL uses a window sized to the input.
SkylineResult compute_skyline(Engine engine, std::span<const TupleRecord> records);

}  // namespace skysample
