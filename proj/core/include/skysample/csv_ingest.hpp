#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "skysample/storage.hpp"

namespace skysample {

struct CsvIngestOptions {
  /// 0-based source columns to keep, in order; empty keeps all.
  std::vector<std::size_t> columns;
  /// Per kept column: multiply by -1, turning a maximized criterion into a
  /// minimized one. Empty means no negation.
  std::vector<bool> negate;
  bool has_header = false;
  std::uint32_t tuple_bytes = kDefaultTupleBytes;
  std::uint32_t page_bytes = kDefaultPageBytes;
};

/// Converts a comma-separated text file into a relation file.
/// Throws DataIntegrityError naming the 1-based line on an unparsable or
/// non-finite cell or a row with the wrong column count.
RelationHeader ingest_csv(const std::filesystem::path& csv, const CsvIngestOptions& options,
                          const std::filesystem::path& out);

}  // namespace skysample
