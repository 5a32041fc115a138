#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include "skysample/storage.hpp"

namespace skysample {

enum class Distribution { kIndependent, kCorrelated, kAnticorrelated };

std::string_view distribution_name(Distribution d) noexcept;
std::optional<Distribution> parse_distribution(std::string_view name) noexcept;

struct GenSpec {
  std::uint64_t n = 0;
  std::uint32_t d = 2;
  Distribution distribution = Distribution::kIndependent;
  /// Pearson correlation of attributes 1-2; defaults to +0.5 / -0.5.
  std::optional<double> target_pcc;
  std::uint64_t seed = 1;
  /// Quantize every value to floor(v·bins)/bins when non-zero.
  std::uint32_t bins = 0;
  std::uint32_t tuple_bytes = kDefaultTupleBytes;
  std::uint32_t page_bytes = kDefaultPageBytes;

  double effective_pcc() const;
  void validate() const;
};

/// Normal-copula correlation whose uniform marginals have Pearson
/// correlation `target`: rho_N = 2 sin(pi · target / 6).
double copula_normal_correlation(double target);

/// Streams a synthetic relation to `out` (O(1) memory) and echoes the
/// generation parameters to `out` + ".json".
RelationHeader generate(const GenSpec& spec, const std::filesystem::path& out);

/// Sample Pearson correlation of attributes i and j (0-based) in one pass.
/// Throws DataIntegrityError if either attribute has zero variance.
double measured_pcc(const Relation& rel, std::uint32_t i, std::uint32_t j, IoCounter& io);

}  // namespace skysample
