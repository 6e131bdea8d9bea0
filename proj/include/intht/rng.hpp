#pragma once

// Deterministic seeding utilities.  All randomness in the library flows
// through std::mt19937_64 (whose output sequence is fixed by the standard)
// plus the hand-rolled transforms below, so identical seeds give identical
// results on every platform.

#include <cstdint>
#include <random>
#include <vector>

namespace intht {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Combine a master seed with stream tags (iteration, repetition, role, ...)
// into an independent child seed.
inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
  uint64_t s = seed;
  uint64_t z = splitmix64(s);
  s ^= z + a;
  z = splitmix64(s);
  s ^= z + b;
  z = splitmix64(s);
  s ^= z + c;
  return splitmix64(s);
}

inline std::mt19937_64 make_rng(uint64_t seed) { return std::mt19937_64(seed); }

// Uniform double in [0, 1).  53-bit mantissa path, engine-agnostic.
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform double in [lo, hi).
inline double uniform_real(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * uniform01(g);
}

// Uniform integer in [0, n) without implementation-defined distributions.
inline uint64_t uniform_index(std::mt19937_64& g, uint64_t n) {
  // Rejection sampling on the top bits; unbiased and deterministic.
  uint64_t mask = n - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    uint64_t v = g() & mask;
    if (v < n) return v;
  }
}

inline int rademacher(std::mt19937_64& g) { return (g() >> 63) ? 1 : -1; }

// Partial Fisher-Yates: first m entries of a random permutation of [0, n).
inline void sample_without_replacement(std::mt19937_64& g, uint64_t n, uint64_t m,
                                       std::vector<uint32_t>& out, std::vector<uint32_t>& scratch) {
  scratch.resize(n);
  for (uint64_t i = 0; i < n; ++i) scratch[i] = static_cast<uint32_t>(i);
  out.resize(m);
  for (uint64_t i = 0; i < m; ++i) {
    uint64_t j = i + uniform_index(g, n - i);
    std::swap(scratch[i], scratch[j]);
    out[i] = scratch[i];
  }
}

}  // namespace intht
