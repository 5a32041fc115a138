#include "skysample/datagen.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include <json.hpp>

#include "skysample/error.hpp"
#include "skysample/rng.hpp"

namespace skysample {

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

std::string_view distribution_name(Distribution d) noexcept {
  switch (d) {
    case Distribution::kIndependent: return "independent";
    case Distribution::kCorrelated: return "correlated";
    case Distribution::kAnticorrelated: return "anticorrelated";
  }
  return "unknown";
}

std::optional<Distribution> parse_distribution(std::string_view name) noexcept {
  for (auto d : {Distribution::kIndependent, Distribution::kCorrelated, Distribution::kAnticorrelated}) {
    if (distribution_name(d) == name) return d;
  }
  if (name == "anti-correlated") return Distribution::kAnticorrelated;
  return std::nullopt;
}

double GenSpec::effective_pcc() const {
  if (target_pcc) return *target_pcc;
  switch (distribution) {
    case Distribution::kCorrelated: return 0.5;
    case Distribution::kAnticorrelated: return -0.5;
    case Distribution::kIndependent: break;
  }
  return 0.0;
}

void GenSpec::validate() const {
  if (d < 1) throw ContractViolation("generate: d must be >= 1");
  if (distribution != Distribution::kIndependent && d < 2) {
    throw ContractViolation("generate: correlated distributions need d >= 2");
  }
  const double pcc = effective_pcc();
  if (!(pcc > -1.0 && pcc < 1.0)) throw ContractViolation("generate: pcc must lie in (-1, 1)");
  RelationHeader h;
  h.d = d;
  h.tuple_bytes = tuple_bytes;
  h.page_bytes = page_bytes;
  h.validate();
}

double copula_normal_correlation(double target) {
  return 2.0 * std::sin(std::numbers::pi * target / 6.0);
}

RelationHeader generate(const GenSpec& spec, const std::filesystem::path& out) {
  spec.validate();
  RelationHeader header;
  header.n = spec.n;
  header.d = spec.d;
  header.tuple_bytes = spec.tuple_bytes;
  header.page_bytes = spec.page_bytes;

  const bool copula = spec.distribution != Distribution::kIndependent;
  const double rho = copula ? copula_normal_correlation(spec.effective_pcc()) : 0.0;
  const double rho_c = std::sqrt(1.0 - rho * rho);

  SplitMix64 rng(spec.seed);
  RelationWriter writer(out, header, /*expect_n=*/true);
  std::vector<double> row(spec.d);
  for (std::uint64_t i = 0; i < spec.n; ++i) {
    std::uint32_t a = 0;
    if (copula) {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      row[0] = normal_cdf(z1);
      row[1] = normal_cdf(rho * z1 + rho_c * z2);
      a = 2;
    }
    for (; a < spec.d; ++a) row[a] = rng.uniform();
    if (spec.bins > 0) {
      for (double& v : row) v = std::min(std::floor(v * spec.bins), spec.bins - 1.0) / spec.bins;
    }
    writer.append(row);
  }
  const RelationHeader written = writer.finish();

  nlohmann::ordered_json sidecar;
  sidecar["n"] = spec.n;
  sidecar["d"] = spec.d;
  sidecar["distribution"] = distribution_name(spec.distribution);
  sidecar["target_pcc"] = spec.effective_pcc();
  sidecar["normal_correlation"] = rho;
  sidecar["seed"] = spec.seed;
  sidecar["bins"] = spec.bins;
  sidecar["tuple_bytes"] = spec.tuple_bytes;
  sidecar["page_bytes"] = spec.page_bytes;
  sidecar["generator"] = "splitmix64";
  std::ofstream meta(out.string() + ".json", std::ios::trunc);
  if (!meta) throw IoError("cannot write sidecar for " + out.string());
  meta << sidecar.dump(2) << '\n';
  if (!meta) throw IoError("cannot write sidecar for " + out.string());
  return written;
}

double measured_pcc(const Relation& rel, std::uint32_t i, std::uint32_t j, IoCounter& io) {
  if (rel.size() < 2) throw ContractViolation("measured_pcc: need n >= 2");
  if (i >= rel.dimension() || j >= rel.dimension()) {
    throw ContractViolation("measured_pcc: attribute out of range");
  }
  // Welford-style running co-moments.
  double mean_x = 0.0, mean_y = 0.0, m2x = 0.0, m2y = 0.0, cxy = 0.0;
  std::uint64_t k = 0;
  RelationScan scan(rel, io);
  while (auto r = scan.next()) {
    const double x = (*r)[i];
    const double y = (*r)[j];
    ++k;
    const double dx = x - mean_x;
    mean_x += dx / static_cast<double>(k);
    const double dy = y - mean_y;
    mean_y += dy / static_cast<double>(k);
    m2x += dx * (x - mean_x);
    m2y += dy * (y - mean_y);
    cxy += dx * (y - mean_y);
  }
  if (m2x <= 0.0 || m2y <= 0.0) throw DataIntegrityError("measured_pcc: zero-variance attribute");
  return cxy / std::sqrt(m2x * m2y);
}

}  // namespace skysample
