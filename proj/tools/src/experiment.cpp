#include "skysample/cli/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "skysample/approx.hpp"
#include "skysample/error.hpp"
#include "skysample/rng.hpp"

namespace skysample::cli {

TrueErrorOracle::TrueErrorOracle(const Relation& rel) : rel_(&rel) {
  if (rel.size() * rel.dimension() <= kInMemoryLimit) {
    IoCounter untracked;
    memory_.emplace(CoverageOracle::load(rel, untracked));
  }
}

ErrorReport TrueErrorOracle::operator()(std::span<const TupleRecord> approx) const {
  if (memory_) return memory_->error_of(approx);
  IoCounter untracked;
  return streaming_true_error(*rel_, approx, untracked);
}

std::vector<BaselineTrial> run_baseline_trials(const Relation& rel, const TrueErrorOracle& oracle,
                                               const BaselineConfig& config) {
  if (config.trials == 0) throw ContractViolation("trials must be at least 1");
  std::vector<BaselineTrial> out(config.trials);
  std::atomic<std::uint32_t> next{0};
  auto worker = [&] {
    for (std::uint32_t t = next++; t < config.trials; t = next++) {
      IoCounter io;
      const auto start = std::chrono::steady_clock::now();
      const auto sky = baseline(rel, config.m, config.engine, derive_seed(config.seed, t), io);
      const auto stop = std::chrono::steady_clock::now();
      out[t].error = oracle(sky.members).error;
      out[t].skyline_size = sky.members.size();
      out[t].pages_read = io.pages_read;
      out[t].wall_nanos = static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
    }
  };
  const unsigned jobs = std::clamp(config.jobs, 1u, config.trials);
  if (jobs == 1) {
    worker();
  } else {
    // Exceptions in workers are rethrown on the calling thread.
    std::vector<std::exception_ptr> failures(jobs);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        try {
          worker();
        } catch (...) {
          failures[w] = std::current_exception();
          next = config.trials;
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }
  return out;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (double v : values) {
    ++k;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  s.mean = mean;
  if (k >= 2) s.stddev = std::sqrt(m2 / static_cast<double>(k - 1));
  return s;
}

BenchRow baseline_row(const Relation& rel, const TrueErrorOracle& oracle,
                      const BaselineConfig& config, std::string relation_name) {
  const auto trials = run_baseline_trials(rel, oracle, config);
  std::vector<double> errors;
  double estimated = 0.0;
  double pages = 0.0;
  double nanos = 0.0;
  for (const auto& t : trials) {
    errors.push_back(t.error);
    estimated += estimate_error_from_sample(t.skyline_size, config.m, rel.size());
    pages += static_cast<double>(t.pages_read);
    nanos += static_cast<double>(t.wall_nanos);
  }
  const double count = static_cast<double>(trials.size());
  const auto summary = summarize(errors);

  BenchRow row;
  row.distribution = sidecar_distribution(relation_name);
  row.relation = std::move(relation_name);
  row.n = rel.size();
  row.d = rel.dimension();
  row.m = config.m;
  row.trials = config.trials;
  row.seed = config.seed;
  row.engine = std::string(engine_name(config.engine));
  row.mean_error = summary.mean;
  row.stddev_error = summary.stddev;
  row.predicted_error =
      config.m < rel.size() ? predict_error(rel.dimension(), config.m, rel.size()).predicted_mean
                            : 0.0;
  row.estimated_error = estimated / count;
  row.mean_pages_read = pages / count;
  row.mean_wall_nanos = nanos / count;
  return row;
}

std::string sidecar_distribution(const std::string& relation) {
  std::ifstream in(relation + ".json");
  if (!in) return {};
  const auto j = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object() || !j.contains("distribution") || !j["distribution"].is_string()) return {};
  return j["distribution"].get<std::string>();
}

}  // namespace skysample::cli
