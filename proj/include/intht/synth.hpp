#pragma once

// Planted-model problem generators.  A ground-truth coefficient tensor with K
// canonical entries is sampled over the admissible tuple universe, features
// are drawn i.i.d. per regime, and responses are exact (noiseless) model
// evaluations.  Coordinate p-1 is always the constant 1, which turns tuples
// touching it into linear terms.
//
// uniform regime: coordinates 0..p-2 are sqrt(3) * Uniform(-1, 1) — scaled to
// unit variance so a fixed step size keeps a scale-free contraction rate —
// and entry values are uniform on [-20,-10] u [10,20] with a fair-coin sign.
// bernoulli regime: +/-1 fair-coin features and +/-1 entry values.

#include <cstdint>
#include <string>
#include <vector>

#include "intht/sketch.hpp"
#include "intht/tensor.hpp"

namespace intht {

enum class Regime { uniform, bernoulli };

std::string regime_name(Regime r);
Regime parse_regime(const std::string& s);

struct DataSet {
  uint32_t p = 0;
  uint32_t n = 0;
  uint32_t K = 0;
  int order = 2;
  Regime regime = Regime::uniform;
  uint64_t seed = 0;
  ColMatrix X;            // p x n, one sample per column
  std::vector<double> y;  // n responses
  SparseTensor theta;     // planted coefficients
};

// Admissible index tuples: strictly increasing tuples by default (pairs with
// the constant coordinate act as linear terms; order 3 additionally admits
// (i, p-1, p-1) so linear terms exist there too).  include_diagonal widens to
// all canonical tuples with repeats.
std::vector<Index3> support_universe(uint32_t p, int order, bool include_diagonal);

DataSet gen_uniform(uint32_t n, uint32_t p, uint32_t K, int order, uint64_t seed,
                    bool include_diagonal = false);
DataSet gen_bernoulli(uint32_t n, uint32_t p, uint32_t K, uint64_t seed,
                      bool include_diagonal = false);

// Single-count model value sum_e theta_e * prod(x at e).
double evaluate_model(const SparseTensor& theta, const double* x);

// Versioned plain-text round trip (17 significant digits).
void save_dataset(const DataSet& ds, const std::string& path);
DataSet load_dataset(const std::string& path);

}  // namespace intht
