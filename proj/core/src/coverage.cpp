#include "skysample/coverage.hpp"

#include <algorithm>
#include <numeric>

#include "skysample/error.hpp"

namespace skysample {

namespace {

double row_sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Approximation members laid out flat and sorted by coordinate sum.
struct SortedMembers {
  std::vector<double> values;
  std::vector<double> sums;
  std::size_t d = 0;

  SortedMembers(std::span<const TupleRecord> approx, std::size_t dim) : d(dim) {
    require_dimension(approx, d);
    std::vector<std::size_t> order(approx.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> raw(approx.size());
    for (std::size_t i = 0; i < approx.size(); ++i) raw[i] = row_sum(approx[i].values());
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return raw[a] < raw[b]; });
    values.reserve(approx.size() * d);
    for (std::size_t i : order) {
      const auto v = approx[i].values();
      values.insert(values.end(), v.begin(), v.end());
      sums.push_back(raw[i]);
    }
  }

  // A member with a larger sum cannot be componentwise <= the tuple.
  bool covers(std::span<const double> t, double t_sum) const noexcept {
    for (std::size_t k = 0; k < sums.size(); ++k) {
      if (sums[k] > t_sum) return false;
      const double* q = values.data() + k * d;
      bool ok = true;
      for (std::size_t i = 0; i < d; ++i) {
        if (q[i] > t[i]) {
          ok = false;
          break;
        }
      }
      if (ok) return true;
    }
    return false;
  }
};

}  // namespace

CoverageOracle::CoverageOracle(std::vector<double> flat, std::uint32_t d)
    : flat_(std::move(flat)), d_(d), n_(d == 0 ? 0 : flat_.size() / d) {
  if (d_ == 0 || flat_.size() % d_ != 0) throw ContractViolation("coverage: bad flat layout");
  sums_.resize(n_);
  for (std::uint64_t i = 0; i < n_; ++i) {
    sums_[i] = row_sum(std::span<const double>(flat_.data() + i * d_, d_));
  }
}

CoverageOracle CoverageOracle::load(const Relation& rel, IoCounter& io) {
  return CoverageOracle(read_all_flat(rel, io), rel.dimension());
}

std::uint64_t CoverageOracle::dominated_count(std::span<const TupleRecord> approx) const {
  if (approx.empty()) return 0;
  const SortedMembers members(approx, d_);
  std::uint64_t covered = 0;
  for (std::uint64_t i = 0; i < n_; ++i) {
    if (members.covers(std::span<const double>(flat_.data() + i * d_, d_), sums_[i])) ++covered;
  }
  return covered;
}

ErrorReport CoverageOracle::error_of(std::span<const TupleRecord> approx) const {
  if (n_ == 0) throw ContractViolation("true_error: empty relation");
  ErrorReport r;
  r.total = n_;
  r.dominated_count = dominated_count(approx);
  r.error = static_cast<double>(n_ - r.dominated_count) / static_cast<double>(n_);
  return r;
}

ErrorReport streaming_true_error(const Relation& rel, std::span<const TupleRecord> approx,
                                 IoCounter& io) {
  const auto& h = rel.header();
  if (h.n == 0) throw ContractViolation("true_error: empty relation");
  const std::size_t d = rel.dimension();
  const SortedMembers members(approx, d);
  ErrorReport r;
  r.total = h.n;
  std::vector<std::byte> page;
  std::vector<double> t(d);
  ++io.seeks;
  for (std::uint64_t p = 0; p < h.data_pages(); ++p) {
    rel.read_page(p, page, io);
    const std::uint64_t first = p * h.records_per_page();
    const std::uint64_t last = std::min<std::uint64_t>(h.n, first + h.records_per_page());
    for (std::uint64_t i = first; i < last; ++i) {
      rel.decode_into(page, i - first, t);
      if (members.covers(t, row_sum(t))) ++r.dominated_count;
    }
  }
  r.error = static_cast<double>(r.total - r.dominated_count) / static_cast<double>(r.total);
  return r;
}

}  // namespace skysample
