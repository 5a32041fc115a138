#include "skysample/tuple.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skysample/error.hpp"

namespace skysample {

TupleRecord::TupleRecord(std::uint64_t index, std::vector<double> values)
    : index_(index), values_(std::move(values)) {
  if (values_.empty()) {
    throw ContractViolation("tuple " + std::to_string(index_) + " has no attributes");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw ContractViolation("tuple " + std::to_string(index_) + " has a non-finite value");
    }
  }
}

std::vector<std::uint64_t> index_set(std::span<const TupleRecord> records) {
  std::vector<std::uint64_t> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.index());
  std::sort(out.begin(), out.end());
  return out;
}

void require_dimension(std::span<const TupleRecord> records, std::size_t d) {
  for (const auto& r : records) {
    if (r.dimension() != d) {
      throw ContractViolation("dimension mismatch: expected " + std::to_string(d) + ", tuple " +
                              std::to_string(r.index()) + " has " +
                              std::to_string(r.dimension()));
    }
  }
}

}  // namespace skysample
