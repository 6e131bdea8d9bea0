#pragma once

// Count-sketch of vectors and of implicit factor products.  The gradient of
// the squared loss over a batch is norm * sum_i u_i * x_i (x) x_i [(x) x_i];
// it is kept in factored form (weights + sample columns) and only ever
// sketched or evaluated entrywise, never materialized at p^2 scale outside
// tests and the exact-mode baseline.

#include <cstdint>
#include <vector>

#include "intht/fft.hpp"
#include "intht/hashing.hpp"

namespace intht {

struct ColMatrix {
  size_t rows = 0, cols = 0;
  std::vector<double> data;  // column-major

  ColMatrix() = default;
  ColMatrix(size_t r, size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double* col(size_t j) { return data.data() + j * rows; }
  const double* col(size_t j) const { return data.data() + j * rows; }
  double& at(size_t i, size_t j) { return data[j * rows + i]; }
  double at(size_t i, size_t j) const { return data[j * rows + i]; }
};

// buckets[h(j)] += s(j) * x[j], features visited in ascending order.
void count_sketch(const double* x, size_t p, const HashPair& hp, double* buckets);

// Same, keeping only features with keep[j] != 0 (row masking by skipping
// entries; masked panels are never materialized).
void count_sketch_masked(const double* x, size_t p, const uint8_t* keep, const HashPair& hp,
                         double* buckets);

// Factored gradient estimate.  Column i of the left panel is
// w[i] * x_i, of the right panel(s) x_i, where x_i is batch column i
// (an optional index vector maps batch positions to columns of X).
struct GradientFactors {
  const ColMatrix* X = nullptr;
  const std::vector<uint32_t>* idx = nullptr;  // nullptr: batch is all columns
  std::vector<double> w;
  double norm = 1.0;
  int order = 2;

  size_t batch_size() const { return idx ? idx->size() : (X ? X->cols : 0); }
  const double* sample(size_t i) const { return X->col(idx ? (*idx)[i] : i); }
  size_t dim() const { return X ? X->rows : 0; }
};

// Count-sketch of A * B^T under the composite hash
// h(i,j) = (h1(i) + h2(j)) mod b with sign s1(i) * s2(j):
// sum over columns (ascending) of conv(cs(a_i, h1), cs(b_i, h2)).
// Both hash pairs must share the bucket count b; the result has length b.
std::vector<double> compressed_product(const ColMatrix& A, const ColMatrix& B,
                                       const HashPair& h1, const HashPair& h2);

// Order-3 analogue: composite hash (h1 + h2 + h3) mod b, triple sign,
// accumulated via triple circular convolution.
std::vector<double> compressed_product3(const ColMatrix& A, const ColMatrix& B, const ColMatrix& C,
                                        const HashPair& h1, const HashPair& h2, const HashPair& h3);

// Dense materialization of the factored product (oracle / exact baseline).
// Order 2: p x p matrix; order 3: p^3 values in index order (i, j, k).
ColMatrix materialize_product(const GradientFactors& f);
std::vector<double> materialize_product3(const GradientFactors& f);

}  // namespace intht
