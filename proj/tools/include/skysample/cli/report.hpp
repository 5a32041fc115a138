#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace skysample::cli {

/// One configuration of a baseline experiment, aggregated over its trials.
struct BenchRow {
  std::string relation;
  std::string distribution;  // empty when unknown
  std::uint64_t n = 0;
  std::uint32_t d = 0;
  std::uint64_t m = 0;
  std::uint32_t trials = 0;
  std::uint64_t seed = 0;
  std::string engine;
  double mean_error = 0.0;
  std::optional<double> stddev_error;  // present iff trials >= 2
  double predicted_error = 0.0;
  double estimated_error = 0.0;
  double mean_pages_read = 0.0;
  double mean_wall_nanos = 0.0;

  bool operator==(const BenchRow&) const = default;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  bool operator==(const BenchReport&) const = default;
};

/// CSV column order. Stable: scripts index by position.
inline constexpr std::array<std::string_view, 14> kBenchColumns = {
    "relation",  "distribution",  "n",               "d",
    "m",         "trials",        "seed",            "engine",
    "mean_error", "stddev_error", "predicted_error", "estimated_error",
    "mean_pages_read", "mean_wall_nanos"};

/// RFC-4180 CSV with a header row. Doubles use the shortest representation
/// that round-trips; a missing stddev is an empty field.
void write_csv(std::ostream& out, const BenchReport& report);

/// Inverse of write_csv. Throws DataIntegrityError on a malformed document or
/// a header that differs from kBenchColumns.
BenchReport read_csv(std::istream& in);

/// Array of objects keyed by column name; a missing stddev is null.
nlohmann::ordered_json to_json(const BenchReport& report);
BenchReport from_json(const nlohmann::json& j);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace skysample::cli
