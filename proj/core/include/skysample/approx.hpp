#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "skysample/skyline.hpp"
#include "skysample/storage.hpp"

namespace skysample {

// ---------------------------------------------------------------------------
// Baseline: skyline of one uniform sample.

/// Engine skyline of a without-replacement sample of m records.
/// Throws ContractViolation unless 1 <= m <= n.
SkylineResult baseline(const Relation& rel, std::uint64_t m, Engine engine,
                       std::uint64_t seed, IoCounter& io);

// ---------------------------------------------------------------------------
// Monte-Carlo error verification.

/// ceil(18 (ln log2 n + ln(1/delta)) / epsilon): the verification sample size
/// for which an approximation with error above epsilon passes the 2ε/3
/// threshold with probability below delta / log2 n.
std::uint64_t required_verification_size(std::uint64_t n, double epsilon, double delta);

/// Fraction of a fresh sample of min(s_v, n) records not covered (⪯) by
/// `approx`.
double verify_error(std::span<const TupleRecord> approx, const Relation& rel,
                    std::uint64_t s_v, std::uint64_t seed, IoCounter& io);

// ---------------------------------------------------------------------------
// DOUBLE: sample doubling until the verified error is at most 2ε/3.

struct ApproxParams {
  double epsilon = 0.1;
  double delta = 0.1;
  std::uint64_t s_initial = 0;  // 0 means "use s_v"
  Engine engine = Engine::kDc;

  void validate() const;
};

/// Named ε presets (delta is left to the caller).
struct DoublePreset {
  std::string_view name;
  double epsilon;
};
inline constexpr DoublePreset kDoublePresets[] = {
    {"double1", 0.1}, {"double2", 0.01}, {"double3", 0.001}};

enum class Termination {
  kVerified,   // eps_hat <= 2ε/3
  kExhausted,  // doubling would exceed n; fell back to the exact skyline
};

std::string_view termination_name(Termination t) noexcept;

struct DoubleRound {
  std::uint32_t round = 0;  // 1-based
  std::uint64_t m = 0;
  std::uint64_t skyline_size = 0;
  double eps_hat = 0.0;
  std::uint64_t verify_sample_size = 0;
  std::uint64_t pages_read = 0;  // charged during this round
};

struct DoubleTrace {
  std::vector<DoubleRound> rounds;
  std::uint64_t final_m = 0;
  bool terminated = false;
  Termination reason = Termination::kVerified;
  double epsilon = 0.0;
  double delta = 0.0;
};

struct DoubleResult {
  SkylineResult skyline;
  DoubleTrace trace;
};

/// Runs DOUBLE. Requires n >= 2. Each verification draws an independent
/// sample; the growing sample is drawn without replacement across rounds.
DoubleResult double_skyline(const Relation& rel, const ApproxParams& params,
                            std::uint64_t seed, IoCounter& io);

/// One JSON object per round, newline-separated. Field names:
/// round, m, skyline_size, eps_hat, s_v, pages_read, and on the last line
/// additionally final_m, terminated, reason.
void write_trace_jsonl(std::ostream& out, const DoubleTrace& trace);

// ---------------------------------------------------------------------------
// Closed-form error predictors.

struct ErrorPrediction {
  std::uint64_t d = 0;
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  double predicted_mean = 0.0;  // (n-m)/(n(m+1)) · H_{d-1,m+1}
  double bound_sum = 0.0;       // (n-m)/(n(m+1)) · sum_{i<d} ln(m+1)^i / i!
};

/// Expected baseline error under component independence. Requires
/// 1 <= m < n and d >= 1.
ErrorPrediction predict_error(std::uint64_t d, std::uint64_t m, std::uint64_t n);

/// Distribution-free prediction from an observed sample skyline:
/// (n-m)/n · skyline_size/m.
double estimate_error_from_sample(std::uint64_t sample_skyline_size, std::uint64_t m,
                                  std::uint64_t n);

/// Replaces every attribute by rank/n (ascending, rank 0 = smallest). Tied
/// values share the lowest rank of their group, so per-attribute order and
/// equality, and hence every dominance relation, are preserved exactly.
Records rank_transform(std::span<const TupleRecord> records);

}  // namespace skysample
