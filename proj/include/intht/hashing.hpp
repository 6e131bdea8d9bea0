#pragma once

// Pairwise-independent bucket/sign hash pair used by the count-sketch layer.
// Degree-1 polynomials over the Mersenne prime 2^61 - 1, reduced mod the
// bucket count (resp. mod 2 for the sign).  Coefficients are drawn from a
// seeded generator, so a (seed, b) pair fully determines the functions.

#include <cstdint>

namespace intht {

class HashPair {
 public:
  HashPair() = default;
  HashPair(uint64_t seed, uint32_t buckets);
  // Separate seeds for the bucket and sign polynomials, so callers can share
  // bucket placement across sketches while keeping signs independent.
  HashPair(uint64_t bucket_seed, uint64_t sign_seed, uint32_t buckets);

  uint32_t bucket(uint32_t i) const { return static_cast<uint32_t>(eval(a1_, c1_, i) % b_); }
  double sign(uint32_t i) const { return (eval(a2_, c2_, i) & 1u) ? 1.0 : -1.0; }
  uint32_t buckets() const { return b_; }

 private:
  static constexpr uint64_t kPrime = (uint64_t(1) << 61) - 1;

  static uint64_t eval(uint64_t a, uint64_t c, uint64_t x) {
    unsigned __int128 t = static_cast<unsigned __int128>(a) * x + c;
    uint64_t lo = static_cast<uint64_t>(t & kPrime);
    uint64_t hi = static_cast<uint64_t>(t >> 61);
    uint64_t r = lo + hi;
    if (r >= kPrime) r -= kPrime;
    return r;
  }

  uint64_t a1_ = 1, c1_ = 0, a2_ = 1, c2_ = 0;
  uint32_t b_ = 1;
};

}  // namespace intht
