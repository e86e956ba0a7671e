#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>

namespace mphs {

// Seed used by every randomized suite in the library. Reading it from the
// environment (MPHS_SEED, default 0) keeps randomized checks reproducible:
// identical seed implies identical draws and therefore identical reports.
inline std::uint64_t global_seed() {
  if (const char* env = std::getenv("MPHS_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env) return static_cast<std::uint64_t>(v);
  }
  return 0;
}

// Deterministic 64-bit generator. Distinct streams are derived by mixing a
// caller-chosen tag into the seed so independent suites do not share draws.
inline std::mt19937_64 make_rng(std::uint64_t stream_tag = 0) {
  std::seed_seq seq{global_seed(), stream_tag};
  return std::mt19937_64(seq);
}

}  // namespace mphs
