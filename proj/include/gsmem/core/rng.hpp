// Copyright Contributors to the GSMem Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gsmem {

using Rng = std::mt19937_64;

// FNV-1a, used to derive reproducible per-label / per-purpose seeds.
inline uint64_t fnv1a(std::string_view s, uint64_t seed = 14695981039346656037ull) {
  uint64_t h = seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  // splitmix64 finalizer over the pair; keeps derived streams decorrelated.
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace gsmem
