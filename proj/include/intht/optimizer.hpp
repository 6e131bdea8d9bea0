#pragma once

// Iterative hard-thresholding solver for sparse interaction models.  Each
// iteration estimates the batch gradient's heavy entries (compressed-sketch
// extraction, or an exact dense scan as the reference mode), restricts the
// gradient to those entries plus the current support, takes a step, and
// hard-thresholds back to the sparsity budget.  The variance-reduced variant
// anchors each outer round at a full-data gradient sketch and adds sketched
// batch corrections, reusing the round's code table and hashes.

#include <cstdint>
#include <vector>

#include "intht/atee.hpp"
#include "intht/config.hpp"
#include "intht/synth.hpp"
#include "intht/tensor.hpp"

namespace intht {

// u_i = model(theta, x_i) - y_i for each batch position.
void residuals(const SparseTensor& theta, const DataSet& ds, const std::vector<uint32_t>& batch,
               std::vector<double>& u);

// Gradient entries at the given canonical tuples: g_e = norm * sum_i w_i * prod(x_i at e).
std::vector<double> gradient_on_support(const GradientFactors& f, const std::vector<Index3>& S);

// Exact heavy-entry oracle over the full (asymmetric) product: the k_top
// largest |entries| of norm * A * B^T, ties toward smaller (row, col).
// Returns exactly k_top index tuples.
std::vector<Index3> exact_top_extract(const GradientFactors& f, size_t k_top);

// Same selection over canonical coordinates (i <= j [<= k]), which is what
// the solver's exact mode uses.
std::vector<Index3> exact_top_canonical(const GradientFactors& f, size_t k_top);

struct IterateRecord {
  uint32_t t = 0;
  double frob_error = 0;
  double support_precision = 0;
  double support_recall = 0;
  size_t atee_set_size = 0;  // |extracted set| before the support union
  double wall_ms = 0;
};

struct RunResult {
  SparseTensor theta;
  std::vector<IterateRecord> records;
  uint32_t iters_run = 0;
  int first_below_tol = -1;  // first t with frob_error < 1e-3 * ||theta*||_F
  double final_frob = 0;
  bool success = false;      // supp(H_K(theta)) == supp(theta*)
  double wall_ms_total = 0;
};

RunResult intht_run(const RunConfig& cfg, const DataSet& ds);
RunResult intht_vr_run(const RunConfig& cfg, const DataSet& ds);

// Dispatches on cfg.mode.
RunResult run_solver(const RunConfig& cfg, const DataSet& ds);

}  // namespace intht
