#include "skysample/skyline.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstdio>
#include <memory>
#include <numeric>
#include <string>

#include "skysample/dominance.hpp"
#include "skysample/error.hpp"

namespace skysample {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point start) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
}

// Anonymous temporary file holding (index, d values) records for BNL overflow.
class SpillFile {
 public:
  explicit SpillFile(std::size_t d) : d_(d), file_(std::tmpfile(), &std::fclose) {
    if (!file_) throw IoError("bnl: cannot create spill file");
  }

  void write(const TupleRecord& r) {
    const std::uint64_t index = r.index();
    if (std::fwrite(&index, sizeof index, 1, file_.get()) != 1 ||
        std::fwrite(r.values().data(), sizeof(double), d_, file_.get()) != d_) {
      throw IoError("bnl: spill write failed");
    }
    ++count_;
  }

  void rewind() {
    if (std::fflush(file_.get()) != 0) throw IoError("bnl: spill flush failed");
    std::rewind(file_.get());
  }

  std::optional<TupleRecord> read() {
    std::uint64_t index = 0;
    if (std::fread(&index, sizeof index, 1, file_.get()) != 1) {
      if (std::ferror(file_.get())) throw IoError("bnl: spill read failed");
      return std::nullopt;
    }
    std::vector<double> values(d_);
    if (std::fread(values.data(), sizeof(double), d_, file_.get()) != d_) {
      throw IoError("bnl: truncated spill record");
    }
    return TupleRecord(index, std::move(values));
  }

  std::uint64_t count() const noexcept { return count_; }

 private:
  std::size_t d_;
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> file_;
  std::uint64_t count_ = 0;
};

class SpillStream final : public RecordStream {
 public:
  explicit SpillStream(SpillFile& f) : file_(&f) { file_->rewind(); }
  std::optional<TupleRecord> next() override { return file_->read(); }

 private:
  SpillFile* file_;
};

struct WindowEntry {
  TupleRecord record;
  // Spill writes that happened in the current pass before this entry was
  // inserted; those tuples were never compared against it.
  std::uint64_t spilled_before = 0;
  // For entries carried into a new pass: confirmed once this many input
  // tuples of the pass have been processed.
  std::uint64_t confirm_after = 0;
  bool carried = false;
};

SkylineResult finish(Records members, Engine engine, std::uint64_t comparisons,
                     Clock::time_point start) {
  SkylineResult r;
  r.members = std::move(members);
  r.algorithm = engine;
  r.comparisons = comparisons;
  r.duration_ns = elapsed_ns(start);
  return r;
}

// Positions into `records` forming the skyline of `records[lo, hi)`.
std::vector<std::size_t> dc_recurse(std::span<const TupleRecord> records, std::size_t lo,
                                    std::size_t hi, std::uint64_t& comparisons) {
  if (hi - lo == 1) return {lo};
  const std::size_t mid = lo + (hi - lo) / 2;
  auto left = dc_recurse(records, lo, mid, comparisons);
  auto right = dc_recurse(records, mid, hi, comparisons);

  auto survivors = [&](const std::vector<std::size_t>& from, const std::vector<std::size_t>& against,
                       std::vector<std::size_t>& out) {
    for (std::size_t p : from) {
      bool dominated = false;
      for (std::size_t q : against) {
        ++comparisons;
        if (dominates_unchecked(records[q].values(), records[p].values())) {
          dominated = true;
          break;
        }
      }
      if (!dominated) out.push_back(p);
    }
  };
  std::vector<std::size_t> merged;
  merged.reserve(left.size() + right.size());
  survivors(left, right, merged);
  survivors(right, left, merged);
  return merged;
}

}  // namespace

std::string_view engine_name(Engine e) noexcept {
  switch (e) {
    case Engine::kBnl: return "bnl";
    case Engine::kSfs: return "sfs";
    case Engine::kDc: return "dc";
    case Engine::kBrute: return "brute";
  }
  return "unknown";
}

std::optional<Engine> parse_engine(std::string_view name) noexcept {
  for (Engine e : {Engine::kBnl, Engine::kSfs, Engine::kDc, Engine::kBrute}) {
    if (engine_name(e) == name) return e;
  }
  return std::nullopt;
}

SkylineResult brute_force_skyline(std::span<const TupleRecord> records) {
  const auto start = Clock::now();
  if (!records.empty()) require_dimension(records, records.front().dimension());
  std::uint64_t comparisons = 0;
  Records members;
  for (const auto& t : records) {
    bool dominated = false;
    for (const auto& other : records) {
      ++comparisons;
      if (dominates_unchecked(other.values(), t.values())) {
        dominated = true;
        break;
      }
    }
    if (!dominated) members.push_back(t);
  }
  return finish(std::move(members), Engine::kBrute, comparisons, start);
}

SkylineResult bnl_skyline(RecordStream& input, std::size_t window_capacity) {
  if (window_capacity == 0) throw ContractViolation("bnl: window capacity must be >= 1");
  const auto start = Clock::now();
  std::uint64_t comparisons = 0;
  Records output;
  std::vector<WindowEntry> window;
  window.reserve(window_capacity);

  std::unique_ptr<SpillFile> previous_spill;
  std::size_t d = 0;
  RecordStream* source = &input;
  std::unique_ptr<SpillStream> spill_source;

  for (;;) {
    std::unique_ptr<SpillFile> spill;
    std::uint64_t processed = 0;

    auto release_confirmed = [&] {
      for (std::size_t i = 0; i < window.size();) {
        if (window[i].carried && window[i].confirm_after <= processed) {
          output.push_back(std::move(window[i].record));
          window[i] = std::move(window.back());
          window.pop_back();
        } else {
          ++i;
        }
      }
    };

    while (auto rec = source->next()) {
      if (d == 0) d = rec->dimension();
      if (rec->dimension() != d) throw ContractViolation("bnl: dimension mismatch in input");

      bool dominated = false;
      for (std::size_t i = 0; i < window.size();) {
        ++comparisons;
        const auto w = window[i].record.values();
        if (dominates_unchecked(w, rec->values())) {
          dominated = true;
          break;
        }
        if (dominates_unchecked(rec->values(), w)) {
          window[i] = std::move(window.back());
          window.pop_back();
        } else {
          ++i;
        }
      }
      if (!dominated) {
        if (window.size() < window_capacity) {
          const std::uint64_t stamp = spill ? spill->count() : 0;
          window.push_back(WindowEntry{std::move(*rec), stamp, 0, false});
        } else {
          if (!spill) spill = std::make_unique<SpillFile>(d);
          spill->write(*rec);
        }
      }
      ++processed;
      release_confirmed();
    }
    release_confirmed();

    // Entries inserted before the first spill have seen every tuple.
    for (std::size_t i = 0; i < window.size();) {
      if (window[i].spilled_before == 0) {
        output.push_back(std::move(window[i].record));
        window[i] = std::move(window.back());
        window.pop_back();
      } else {
        window[i].carried = true;
        window[i].confirm_after = window[i].spilled_before;
        window[i].spilled_before = 0;
        ++i;
      }
    }

    if (!spill || spill->count() == 0) break;
    previous_spill = std::move(spill);
    spill_source = std::make_unique<SpillStream>(*previous_spill);
    source = spill_source.get();
  }
  assert(window.empty());
  return finish(std::move(output), Engine::kBnl, comparisons, start);
}

SkylineResult bnl_skyline(std::span<const TupleRecord> records, std::size_t window_capacity) {
  SpanStream stream(records);
  return bnl_skyline(stream, window_capacity);
}

SkylineResult sfs_skyline(RecordStream& input) {
  Records all;
  while (auto rec = input.next()) all.push_back(std::move(*rec));
  return sfs_skyline(all);
}

SkylineResult sfs_skyline(std::span<const TupleRecord> records) {
  const auto start = Clock::now();
  if (records.empty()) return finish({}, Engine::kSfs, 0, start);
  require_dimension(records, records.front().dimension());

  struct Keyed {
    double score;
    std::size_t pos;
  };
  std::vector<Keyed> order;
  order.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto v = records[i].values();
    order.push_back({std::accumulate(v.begin(), v.end(), 0.0), i});
  }
  // Float summation is monotone, so a dominator never scores higher; equal
  // scores fall back to lexicographic values, which a dominator also wins.
  std::sort(order.begin(), order.end(), [&](const Keyed& a, const Keyed& b) {
    if (a.score != b.score) return a.score < b.score;
    const auto va = records[a.pos].values();
    const auto vb = records[b.pos].values();
    if (!std::equal(va.begin(), va.end(), vb.begin())) {
      return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end());
    }
    return records[a.pos].index() < records[b.pos].index();
  });

  std::uint64_t comparisons = 0;
  std::vector<std::size_t> window;
  for (const auto& k : order) {
    const auto t = records[k.pos].values();
    bool dominated = false;
    for (std::size_t w : window) {
      ++comparisons;
      if (dominates_unchecked(records[w].values(), t)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) {
#ifndef NDEBUG
      for (std::size_t w : window) {
        assert(!dominates_unchecked(t, records[w].values()) && "sfs: sort order not monotone");
      }
#endif
      window.push_back(k.pos);
    }
  }
  Records members;
  members.reserve(window.size());
  for (std::size_t w : window) members.push_back(records[w]);
  return finish(std::move(members), Engine::kSfs, comparisons, start);
}

SkylineResult dc_skyline(std::span<const TupleRecord> records) {
  const auto start = Clock::now();
  if (records.empty()) return finish({}, Engine::kDc, 0, start);
  require_dimension(records, records.front().dimension());
  std::uint64_t comparisons = 0;
  const auto positions = dc_recurse(records, 0, records.size(), comparisons);
  Records members;
  members.reserve(positions.size());
  for (std::size_t p : positions) members.push_back(records[p]);
  return finish(std::move(members), Engine::kDc, comparisons, start);
}

SkylineResult merge_skyline(const SkylineResult& a, const SkylineResult& b) {
  const auto start = Clock::now();
  if (!a.members.empty() && !b.members.empty() &&
      a.members.front().dimension() != b.members.front().dimension()) {
    throw ContractViolation("merge_skyline: dimension mismatch");
  }
  std::uint64_t comparisons = 0;
  Records merged;
  merged.reserve(a.members.size() + b.members.size());
  auto keep = [&](const Records& from, const Records& against) {
    for (const auto& p : from) {
      bool dominated = false;
      for (const auto& q : against) {
        ++comparisons;
        if (dominates_unchecked(q.values(), p.values())) {
          dominated = true;
          break;
        }
      }
      if (!dominated) merged.push_back(p);
    }
  };
  keep(a.members, b.members);
  keep(b.members, a.members);
  return finish(std::move(merged), a.algorithm, comparisons, start);
}

SkylineResult compute_skyline(Engine engine, std::span<const TupleRecord> records) {
  switch (engine) {
    case Engine::kBnl: return bnl_skyline(records, std::max<std::size_t>(1, records.size()));
    case Engine::kSfs: return sfs_skyline(records);
    case Engine::kDc: return dc_skyline(records);
    case Engine::kBrute: return brute_force_skyline(records);
  }
  throw ContractViolation("unknown engine");
}

}  // namespace skysample
