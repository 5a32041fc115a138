#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "skysample/datagen.hpp"
#include "skysample/storage.hpp"

namespace skysample::bench {

/// Generated relations shared across benchmarks, keyed by (dist, n, d).
/// Files live under the system temp directory and are reused between runs.
inline const Relation& relation(Distribution dist, std::uint64_t n, std::uint32_t d) {
  static std::map<std::string, Relation> cache;
  const std::string name = "skysample-bench-" + std::string(distribution_name(dist)) + "-" +
                           std::to_string(n) + "-" + std::to_string(d) + ".skyr";
  if (auto it = cache.find(name); it != cache.end()) return it->second;
  const auto path = std::filesystem::temp_directory_path() / name;
  if (!std::filesystem::exists(path)) {
    GenSpec spec;
    spec.n = n;
    spec.d = d;
    spec.distribution = dist;
    spec.seed = 2024;
    generate(spec, path);
  }
  return cache.emplace(name, Relation::open(path)).first->second;
}

inline const Records& records(Distribution dist, std::uint64_t n, std::uint32_t d) {
  static std::map<std::string, Records> cache;
  const std::string key =
      std::string(distribution_name(dist)) + std::to_string(n) + "/" + std::to_string(d);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  IoCounter io;
  return cache.emplace(key, read_all(relation(dist, n, d), io)).first->second;
}

}  // namespace skysample::bench
