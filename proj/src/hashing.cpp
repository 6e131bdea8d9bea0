#include "intht/hashing.hpp"

#include <stdexcept>

#include "intht/rng.hpp"

namespace intht {

HashPair::HashPair(uint64_t seed, uint32_t buckets) : b_(buckets) {
  if (buckets == 0) throw std::invalid_argument("hash needs at least one bucket");
  std::mt19937_64 g = make_rng(seed);
  a1_ = 1 + uniform_index(g, kPrime - 1);  // a in [1, p-1]
  c1_ = uniform_index(g, kPrime);
  a2_ = 1 + uniform_index(g, kPrime - 1);
  c2_ = uniform_index(g, kPrime);
}

HashPair::HashPair(uint64_t bucket_seed, uint64_t sign_seed, uint32_t buckets) : b_(buckets) {
  if (buckets == 0) throw std::invalid_argument("hash needs at least one bucket");
  std::mt19937_64 g = make_rng(bucket_seed);
  a1_ = 1 + uniform_index(g, kPrime - 1);
  c1_ = uniform_index(g, kPrime);
  std::mt19937_64 gs = make_rng(sign_seed);
  a2_ = 1 + uniform_index(gs, kPrime - 1);
  c2_ = uniform_index(gs, kPrime);
}

}  // namespace intht
