#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skysample/cli/report.hpp"
#include "skysample/coverage.hpp"
#include "skysample/skyline.hpp"
#include "skysample/storage.hpp"

namespace skysample::cli {

/// True error of an approximate skyline. Small relations are cached in
/// memory; larger ones are rescanned per query. Oracle page reads are never
/// charged to the experiment.
class TrueErrorOracle {
 public:
  /// Relations with n·d above this many doubles use the streaming path.
  static constexpr std::uint64_t kInMemoryLimit = std::uint64_t{1} << 27;

  explicit TrueErrorOracle(const Relation& rel);
  ErrorReport operator()(std::span<const TupleRecord> approx) const;

 private:
  const Relation* rel_;
  std::optional<CoverageOracle> memory_;
};

struct BaselineConfig {
  std::uint64_t m = 0;
  std::uint32_t trials = 20;
  std::uint64_t seed = 1;
  Engine engine = Engine::kDc;
  unsigned jobs = 1;
};

struct BaselineTrial {
  double error = 0.0;
  std::uint64_t skyline_size = 0;
  std::uint64_t pages_read = 0;
  std::uint64_t wall_nanos = 0;
};

/// Trial t samples with derive_seed(seed, t); the result is indexed by t and
/// independent of `jobs`.
std::vector<BaselineTrial> run_baseline_trials(const Relation& rel, const TrueErrorOracle& oracle,
                                               const BaselineConfig& config);

struct Summary {
  double mean = 0.0;
  std::optional<double> stddev;  // sample stddev; absent for fewer than 2 values
};

Summary summarize(std::span<const double> values);

/// Runs the trials and aggregates them into one report row.
BenchRow baseline_row(const Relation& rel, const TrueErrorOracle& oracle,
                      const BaselineConfig& config, std::string relation_name);

/// "distribution" from the generator sidecar next to `relation`, or empty.
std::string sidecar_distribution(const std::string& relation);

}  // namespace skysample::cli
