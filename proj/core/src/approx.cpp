#include "skysample/approx.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include <json.hpp>

#include "skysample/dominance.hpp"
#include "skysample/error.hpp"
#include "skysample/harmonic.hpp"
#include "skysample/rng.hpp"
#include "skysample/sampling.hpp"

namespace skysample {

namespace {

bool in_open_unit(double x) { return x > 0.0 && x < 1.0; }

// Stream ids for derive_seed(); the growing sample and each verification
// draw from independent generators.
constexpr std::uint64_t kGrowthStream = 0;
constexpr std::uint64_t kVerifyStreamBase = 1;

}  // namespace

SkylineResult baseline(const Relation& rel, std::uint64_t m, Engine engine, std::uint64_t seed,
                       IoCounter& io) {
  if (m < 1 || m > rel.size()) {
    throw ContractViolation("baseline: need 1 <= m <= n, got m = " + std::to_string(m) +
                            ", n = " + std::to_string(rel.size()));
  }
  const Sample s = sample_without_replacement(rel, m, seed, io);
  return compute_skyline(engine, s.records);
}

std::uint64_t required_verification_size(std::uint64_t n, double epsilon, double delta) {
  if (n < 2) throw ContractViolation("verification size needs n >= 2");
  if (!in_open_unit(epsilon) || !in_open_unit(delta)) {
    throw ContractViolation("epsilon and delta must lie in (0, 1)");
  }
  const double log2n = std::log2(static_cast<double>(n));
  const double raw = 18.0 * (std::log(log2n) + std::log(1.0 / delta)) / epsilon;
  return static_cast<std::uint64_t>(std::ceil(raw));
}

double verify_error(std::span<const TupleRecord> approx, const Relation& rel, std::uint64_t s_v,
                    std::uint64_t seed, IoCounter& io) {
  if (s_v == 0) throw ContractViolation("verify_error: s_v must be >= 1");
  if (rel.size() == 0) throw ContractViolation("verify_error: empty relation");
  require_dimension(approx, rel.dimension());
  const std::uint64_t size = std::min<std::uint64_t>(s_v, rel.size());
  const Sample v = sample_without_replacement(rel, size, seed, io);
  std::uint64_t uncovered = 0;
  for (const auto& t : v.records) {
    const bool covered = std::any_of(approx.begin(), approx.end(), [&](const TupleRecord& q) {
      return covers_unchecked(q.values(), t.values());
    });
    if (!covered) ++uncovered;
  }
  return static_cast<double>(uncovered) / static_cast<double>(size);
}

void ApproxParams::validate() const {
  if (!in_open_unit(epsilon)) throw ContractViolation("epsilon must lie in (0, 1)");
  if (!in_open_unit(delta)) throw ContractViolation("delta must lie in (0, 1)");
}

std::string_view termination_name(Termination t) noexcept {
  return t == Termination::kVerified ? "verified" : "exhausted";
}

DoubleResult double_skyline(const Relation& rel, const ApproxParams& params, std::uint64_t seed,
                            IoCounter& io) {
  params.validate();
  const std::uint64_t n = rel.size();
  if (n < 2) throw ContractViolation("DOUBLE needs n >= 2");
  const auto start = std::chrono::steady_clock::now();

  const std::uint64_t s_v = required_verification_size(n, params.epsilon, params.delta);
  const std::uint64_t s_initial = params.s_initial == 0 ? s_v : params.s_initial;
  const double threshold = 2.0 * params.epsilon / 3.0;

  DoubleResult out;
  auto& trace = out.trace;
  trace.epsilon = params.epsilon;
  trace.delta = params.delta;

  IncrementalSampler sampler(rel, derive_seed(seed, kGrowthStream));
  std::uint64_t comparisons = 0;
  SkylineResult sky;
  sky.algorithm = params.engine;
  std::uint64_t m = 0;
  std::uint32_t round = 0;

  for (;;) {
    ++round;
    const std::uint64_t pages_before = io.pages_read;
    // Round 1 draws s_I; later rounds draw m fresh records, doubling m. If
    // that would need more records than exist, take all that remain: the
    // sample becomes the relation and the skyline is exact.
    std::uint64_t batch = round == 1 ? s_initial : m;
    const bool exhausted = batch > sampler.remaining();
    if (exhausted) batch = sampler.remaining();

    const Sample s = sampler.draw(batch, io);
    SkylineResult part = compute_skyline(params.engine, s.records);
    comparisons += part.comparisons;
    if (round == 1) {
      sky = std::move(part);
    } else {
      sky = merge_skyline(sky, part);
      comparisons += sky.comparisons;
    }
    m += batch;

    const double eps_hat =
        verify_error(sky.members, rel, s_v, derive_seed(seed, kVerifyStreamBase + round), io);
    trace.rounds.push_back(DoubleRound{round, m, sky.members.size(), eps_hat, std::min(s_v, n),
                                       io.pages_read - pages_before});
    if (exhausted || m == n) {
      trace.reason = eps_hat <= threshold && !exhausted ? Termination::kVerified
                                                        : Termination::kExhausted;
      break;
    }
    if (eps_hat <= threshold) {
      trace.reason = Termination::kVerified;
      break;
    }
  }
  trace.final_m = m;
  trace.terminated = true;

  out.skyline = std::move(sky);
  out.skyline.algorithm = params.engine;
  out.skyline.comparisons = comparisons;
  out.skyline.duration_ns = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start)
          .count());
  return out;
}

void write_trace_jsonl(std::ostream& out, const DoubleTrace& trace) {
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    const auto& r = trace.rounds[i];
    nlohmann::ordered_json j;
    j["round"] = r.round;
    j["m"] = r.m;
    j["skyline_size"] = r.skyline_size;
    j["eps_hat"] = r.eps_hat;
    j["s_v"] = r.verify_sample_size;
    j["pages_read"] = r.pages_read;
    if (i + 1 == trace.rounds.size()) {
      j["final_m"] = trace.final_m;
      j["terminated"] = trace.terminated;
      j["reason"] = termination_name(trace.reason);
    }
    out << j.dump() << '\n';
  }
}

ErrorPrediction predict_error(std::uint64_t d, std::uint64_t m, std::uint64_t n) {
  if (d < 1) throw ContractViolation("predict_error: d must be >= 1");
  if (m < 1 || m >= n) throw ContractViolation("predict_error: need 1 <= m < n");
  const double factor = static_cast<double>(n - m) /
                        (static_cast<double>(n) * static_cast<double>(m + 1));
  const double log_m1 = std::log(static_cast<double>(m + 1));
  double series = 0.0;
  double term = 1.0;  // ln(m+1)^i / i!
  for (std::uint64_t i = 0; i < d; ++i) {
    series += term;
    term *= log_m1 / static_cast<double>(i + 1);
  }
  ErrorPrediction p;
  p.d = d;
  p.m = m;
  p.n = n;
  p.predicted_mean = std::clamp(factor * harmonic(static_cast<unsigned>(d - 1), m + 1), 0.0, 1.0);
  p.bound_sum = std::clamp(factor * series, 0.0, 1.0);
  return p;
}

double estimate_error_from_sample(std::uint64_t sample_skyline_size, std::uint64_t m,
                                  std::uint64_t n) {
  if (m == 0) throw ContractViolation("estimate_error_from_sample: m must be >= 1");
  if (sample_skyline_size > m) throw ContractViolation("skyline larger than its sample");
  if (m > n) throw ContractViolation("sample larger than relation");
  return static_cast<double>(n - m) / static_cast<double>(n) *
         static_cast<double>(sample_skyline_size) / static_cast<double>(m);
}

Records rank_transform(std::span<const TupleRecord> records) {
  if (records.empty()) return {};
  const std::size_t d = records.front().dimension();
  require_dimension(records, d);
  const std::size_t n = records.size();
  std::vector<std::vector<double>> values(n, std::vector<double>(d));
  std::vector<std::size_t> order(n);
  for (std::size_t a = 0; a < d; ++a) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return records[x][a] < records[y][a]; });
    std::size_t group_rank = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (r > 0 && records[order[r]][a] != records[order[r - 1]][a]) group_rank = r;
      values[order[r]][a] = static_cast<double>(group_rank) / static_cast<double>(n);
    }
  }
  Records out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(records[i].index(), std::move(values[i]));
  return out;
}

}  // namespace skysample
