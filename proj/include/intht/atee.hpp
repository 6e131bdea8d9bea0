#pragma once

// Adaptive-threshold entry extraction: recover the positions of the large
// entries of an implicit gradient matrix (1/m) * A * B^T (or the order-3
// analogue) from d independent compressed sketches.  Each repetition sketches
// the product once per code-table row with that row's mask applied to one
// factor panel; buckets exceeding delta/2 contribute a 1-bit, and the bit
// pattern down a bucket column decodes to the (row, col) index pair of the
// heavy entry.  Majority voting across repetitions rejects collision noise.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "intht/codes.hpp"
#include "intht/sketch.hpp"

namespace intht {

using Index3 = std::array<uint32_t, 3>;  // order-2 tuples use {i, j, 0}

struct AteeParams {
  uint32_t b = 360;   // output budget; sketch width rounds up to a power of two
  uint32_t d = 3;     // repetitions (majority vote)
  double delta = 1.0; // exceedance threshold, gradient-entry units
  uint32_t k_top = 0; // requested number of entries (caps votes; 0 = no cap below b)
  CodeScheme scheme = CodeScheme::plain_binary;
  uint32_t rep = 3;        // repetition-code copies when scheme == repetition
  bool hash_reuse = false; // share bucket hashes across repetitions (signs stay fresh)

  uint32_t b_eff() const;  // sketch width actually used (next power of two)
};

// d repetitions of an (order*l) x b_eff sketch of the implicit product.
struct SketchBank {
  uint32_t d = 0;
  uint32_t rows = 0;   // order * table.l
  uint32_t b_eff = 0;
  std::vector<double> s;  // d * rows * b_eff, repetition-major then row-major

  double* rep_row(uint32_t t, uint32_t r) {
    return s.data() + (static_cast<size_t>(t) * rows + r) * b_eff;
  }
  const double* rep_row(uint32_t t, uint32_t r) const {
    return s.data() + (static_cast<size_t>(t) * rows + r) * b_eff;
  }
};

// Bucket/sign hash pairs for repetition t, one per tensor axis.  With
// hash_reuse the bucket polynomials are derived once and shared by all
// repetitions while the sign polynomials stay per-repetition.
std::vector<HashPair> derive_hashes(const AteeParams& prm, uint64_t seed, uint32_t t, int order);

// Fused sketch kernel: for every repetition and code-table row r, accumulates
// the compressed product with row r's mask applied to axis r/l.  Columns are
// accumulated in ascending order in both variants, so the OpenMP build is
// bit-identical to the serial reference.
SketchBank build_sketch_bank(const GradientFactors& f, const IndexCodeTable& table,
                             const AteeParams& prm, uint64_t seed);
SketchBank build_sketch_bank_serial(const GradientFactors& f, const IndexCodeTable& table,
                                    const AteeParams& prm, uint64_t seed);

// Elementwise sum, used by the variance-reduced solver to combine the sketch
// of the anchor gradient with the sketch of the correction term.
void add_bank(SketchBank& dst, const SketchBank& src);

struct DecodedVotes {
  uint32_t d = 0;
  std::map<Index3, uint32_t> counts;  // per-repetition-deduplicated vote counts
};

// Threshold, decode and vote.  Index tuples come out as written by the code
// table (row half first), without symmetry canonicalization.
DecodedVotes decode_bank(const SketchBank& bank, const IndexCodeTable& table,
                         const AteeParams& prm, int order);

// Tuples with vote count >= d/2, capped at `cap` by (votes desc, index asc),
// returned in ascending index order.
std::vector<Index3> majority_filter(const DecodedVotes& votes, size_t cap);

// Full pipeline on an implicit factor representation.
std::vector<Index3> atee_extract(const GradientFactors& f, const AteeParams& prm, uint64_t seed);

// a-priori parameter guidance -------------------------------------------------

struct TheoryBounds {
  double L = 1.0;      // restricted smoothness constant
  double omega = 1.0;  // entrywise bound on the optimum
  double G = 0.0;      // gradient norm at the optimum
  double c = 4.0;      // failure-rate control (guarantee holds w.p. >= 1 - 2/c)
  double nu = 0.0;     // hard-thresholding distortion (diagnostics only)
  double rho = 0.0;
};

// Hard-thresholding distortion constants: rho = min{K, D-k} / (k - K + min{K, D-k})
// for a K-sparse target, budget k, ambient coordinate count D, and
// nu = 1 + (rho + sqrt((4 + rho) * rho)) / 2.
double ht_rho(size_t K, size_t k, size_t D);
double ht_distortion(double rho);

// Frobenius bound on any restricted gradient within the radius: 2*L*sqrt(k)*omega + G.
double gradient_norm_bound(const TheoryBounds& tb, uint32_t k);

// Default exceedance threshold so that entries above it are recoverable:
// gradient_norm_bound / sqrt(2 * k_top).
double default_delta(const TheoryBounds& tb, uint32_t k, uint32_t k_top);

struct ParamReport {
  double min_b = 0;           // 432 * g^2 / delta^2
  uint32_t min_d = 0;         // ceil(48 * ln(2 * c * k_top))
  uint32_t min_d_relaxed = 0; // ceil(48 * ln(2 * c * k_top / 2)), alternate reading
  bool b_ok = false;
  bool d_ok = false;  // against the relaxed bound
  std::string text() const;
};

// Checks b and d against the recovery guarantees for a gradient of Frobenius
// norm at most g.  Advisory only.  min_d follows the literal reading of the
// repetition bound (log of 2*c*k_top); the check itself and min_d_relaxed use
// the k_top/2 reading, which matches recovering a top-2k set of size k_top.
ParamReport validate_params(const AteeParams& prm, double g, const TheoryBounds& tb);

}  // namespace intht
