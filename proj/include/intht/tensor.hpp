#pragma once

// Sparse symmetric coefficient tensors in canonical coordinates: entries are
// stored once per sorted index tuple (i <= j, resp. i <= j <= k), order-2
// tuples padded with a trailing 0.  The model value is the single-count sum
// value * x_i * x_j [* x_k] over stored entries.

#include <array>
#include <cstdint>
#include <map>
#include <vector>

namespace intht {

using Index3 = std::array<uint32_t, 3>;

// Entries this small are treated as structural zeros and never stored.
constexpr double kZeroEps = 1e-300;

Index3 canonical_index(uint32_t i, uint32_t j);              // order 2: {min, max, 0}
Index3 canonical_index(uint32_t i, uint32_t j, uint32_t k);  // order 3: sorted
Index3 canonicalize(const Index3& idx, int order);

struct SparseTensor {
  int order = 2;
  uint32_t p = 0;
  std::map<Index3, double> entries;

  SparseTensor() = default;
  SparseTensor(int ord, uint32_t dim) : order(ord), p(dim) {}

  void set(const Index3& idx, double v);  // canonicalizes; drops |v| < kZeroEps
  double get(const Index3& idx) const;
  size_t nnz() const { return entries.size(); }
  double norm_f() const;
};

// Largest k entries of the item list by absolute value; ties broken toward
// the lexicographically smaller index.  Indices must already be canonical and
// distinct; values below kZeroEps never survive.
SparseTensor hard_threshold(std::vector<std::pair<Index3, double>> items, int order, uint32_t p,
                            size_t k);

// || a - b ||_F over the union support.
double frob_distance(const SparseTensor& a, const SparseTensor& b);

// |supp(a)| overlap metrics against a reference support.
double support_precision(const SparseTensor& est, const SparseTensor& truth);
double support_recall(const SparseTensor& est, const SparseTensor& truth);
bool same_support(const SparseTensor& a, const SparseTensor& b);

}  // namespace intht
