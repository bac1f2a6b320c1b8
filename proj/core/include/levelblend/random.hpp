#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace levelblend {

using Rng = std::mt19937_64;

/// Mixes a base seed with a label and an index into an independent stream seed.
/// Every seeded operation in the toolkit derives its randomness through this, so
/// one top-level seed fixes the whole pipeline.
std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t base, std::string_view label, std::uint64_t index = 0) {
  return Rng(derive_seed(base, label, index));
}

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Standard normal via Box-Muller on uniform01 (portable, unlike std::normal_distribution).
double standard_normal(Rng& rng);

/// Uniform integer in [0, n) by rejection, portable across standard libraries.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

}  // namespace levelblend
