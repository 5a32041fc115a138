#include "skysample/dominance.hpp"

#include <string>

#include "skysample/error.hpp"

namespace skysample {

namespace {

void check_pair(const TupleRecord& a, const TupleRecord& b) {
  if (a.dimension() != b.dimension()) {
    throw ContractViolation("dimension mismatch: " + std::to_string(a.dimension()) + " vs " +
                            std::to_string(b.dimension()));
  }
}

}  // namespace

bool dominates_unchecked(std::span<const double> a, std::span<const double> b) noexcept {
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    strict |= a[i] < b[i];
  }
  return strict;
}

bool covers_unchecked(std::span<const double> a, std::span<const double> b) noexcept {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

bool dominates(const TupleRecord& a, const TupleRecord& b) {
  check_pair(a, b);
  return dominates_unchecked(a.values(), b.values());
}

bool dominates_or_equal(const TupleRecord& a, const TupleRecord& b) {
  check_pair(a, b);
  // Componentwise <= is exactly "strictly dominates or equal".
  return covers_unchecked(a.values(), b.values());
}

std::uint64_t dominated_count(std::span<const TupleRecord> q, std::span<const TupleRecord> all) {
  if (q.empty() || all.empty()) return 0;
  const std::size_t d = q.front().dimension();
  require_dimension(q, d);
  require_dimension(all, d);
  std::uint64_t count = 0;
  for (const auto& t : all) {
    for (const auto& member : q) {
      if (covers_unchecked(member.values(), t.values())) {
        ++count;
        break;
      }
    }
  }
  return count;
}

ErrorReport true_error(std::span<const TupleRecord> approx, std::span<const TupleRecord> all) {
  if (all.empty()) throw ContractViolation("true_error: empty relation");
  ErrorReport report;
  report.total = all.size();
  report.dominated_count = dominated_count(approx, all);
  report.error = static_cast<double>(report.total - report.dominated_count) /
                 static_cast<double>(report.total);
  return report;
}

bool is_antichain(std::span<const TupleRecord> q) {
  if (q.empty()) return true;
  require_dimension(q, q.front().dimension());
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (i != j && dominates_unchecked(q[i].values(), q[j].values())) return false;
    }
  }
  return true;
}

}  // namespace skysample
