#include "intht/atee.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "intht/fft.hpp"
#include "intht/rng.hpp"

namespace intht {

namespace {

constexpr uint64_t kBucketTag = 0x5b7a3c1d;
constexpr uint64_t kSignTag = 0x2fd49e61;

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Per-thread workspace for the per-column phase of the bank builder.
struct ColScratch {
  std::vector<double> time;       // (order * (l + 1)) real sketch vectors of length b
  std::vector<double> base_spec;  // order spectra (re|im), order-3 pair products
  std::vector<double> sre, sim;   // fft scratch

  ColScratch(int order, uint32_t l, uint32_t b)
      : time(static_cast<size_t>(order) * (l + 1) * b),
        base_spec(static_cast<size_t>(order) * 2 * b),
        sre(b),
        sim(b) {}
};

// acc[k] += x[k] * y[k] over split complex arrays of length b.
void cmul_acc(const double* xre, const double* xim, const double* yre, const double* yim,
              double* are, double* aim, uint32_t b) {
  for (uint32_t k = 0; k < b; ++k) {
    are[k] += xre[k] * yre[k] - xim[k] * yim[k];
    aim[k] += xre[k] * yim[k] + xim[k] * yre[k];
  }
}

// out = x * y (no accumulate).
void cmul(const double* xre, const double* xim, const double* yre, const double* yim, double* ore,
          double* oim, uint32_t b) {
  for (uint32_t k = 0; k < b; ++k) {
    ore[k] = xre[k] * yre[k] - xim[k] * yim[k];
    oim[k] = xre[k] * yim[k] + xim[k] * yre[k];
  }
}

// Shared implementation; `parallel` only toggles the OpenMP clauses, the
// arithmetic order is identical either way (and hence so is the output).
SketchBank build_bank_impl(const GradientFactors& f, const IndexCodeTable& table,
                           const AteeParams& prm, uint64_t seed, bool parallel) {
  const int order = f.order;
  if (order != 2 && order != 3) throw std::invalid_argument("sketch bank: order must be 2 or 3");
  const uint32_t l = table.l;
  const uint32_t rows = static_cast<uint32_t>(order) * l;
  const uint32_t b = prm.b_eff();
  const size_t m = f.batch_size();
  const size_t p = f.dim();
  if (table.p != p) throw std::invalid_argument("sketch bank: code table dimension mismatch");

  SketchBank bank;
  bank.d = prm.d;
  bank.rows = rows;
  bank.b_eff = b;
  bank.s.assign(static_cast<size_t>(prm.d) * rows * b, 0.0);

  const FftPlan plan(b);
  const size_t spec = 2 * static_cast<size_t>(b);            // one (re|im) spectrum
  const uint32_t nspec = rows + (order == 2 ? 2u : 3u);      // per-column slots
  const uint32_t nreal = static_cast<uint32_t>(order) * (l + 1);  // real vectors to transform
  constexpr size_t kBlock = 32;

  std::vector<double> blockbuf(kBlock * nspec * spec);
  std::vector<double> acc(static_cast<size_t>(rows) * spec);
  std::vector<ColScratch> scratch;
  const int nthreads = parallel ? max_threads() : 1;
  scratch.reserve(nthreads);
  for (int i = 0; i < nthreads; ++i) scratch.emplace_back(order, l, b);

  for (uint32_t t = 0; t < prm.d; ++t) {
    std::vector<HashPair> hp = derive_hashes(prm, seed, t, order);
    std::fill(acc.begin(), acc.end(), 0.0);

    for (size_t c0 = 0; c0 < m; c0 += kBlock) {
      const size_t cnt = std::min(kBlock, m - c0);

      // Phase A: per-column sketches and spectra (columns independent).
#pragma omp parallel for schedule(static) if (parallel)
      for (size_t cc = 0; cc < cnt; ++cc) {
#ifdef _OPENMP
        ColScratch& ws = scratch[parallel ? omp_get_thread_num() : 0];
#else
        ColScratch& ws = scratch[0];
#endif
        const size_t i = c0 + cc;
        const double* x = f.sample(i);
        double* colbuf = blockbuf.data() + cc * nspec * spec;
        std::fill(ws.time.begin(), ws.time.end(), 0.0);

        for (int a = 0; a < order; ++a) {
          const HashPair& h = hp[a];
          const double scale = a == 0 ? f.norm * f.w[i] : 1.0;
          double* base = ws.time.data() + static_cast<size_t>(a) * b;
          double* masked = ws.time.data() + (static_cast<size_t>(order) + a * l) * b;
          for (size_t j = 0; j < p; ++j) {
            const uint32_t q = h.bucket(static_cast<uint32_t>(j));
            const double v = h.sign(static_cast<uint32_t>(j)) * scale * x[j];
            base[q] += v;
            for (uint32_t g = 0; g < l; ++g)
              if (table.mask(g)[j]) masked[static_cast<size_t>(g) * b + q] += v;
          }
        }

        // Transform everything; bases pack together with the masked rows.
        auto dst_re = [&](uint32_t tv) -> double* {
          if (tv < static_cast<uint32_t>(order)) {
            if (order == 2) return colbuf + (rows + tv) * spec;  // base slots
            return ws.base_spec.data() + tv * spec;              // order 3: local
          }
          return colbuf + (tv - order) * spec;  // masked slot a*l+g
        };
        for (uint32_t tv = 0; tv + 1 < nreal; tv += 2) {
          double* r0 = dst_re(tv);
          double* r1 = dst_re(tv + 1);
          real_fft_pair(plan, ws.time.data() + static_cast<size_t>(tv) * b,
                        ws.time.data() + static_cast<size_t>(tv + 1) * b, r0, r0 + b, r1, r1 + b,
                        ws.sre.data(), ws.sim.data());
        }
        if (nreal % 2) {
          double* r0 = dst_re(nreal - 1);
          std::memcpy(ws.sre.data(), ws.time.data() + static_cast<size_t>(nreal - 1) * b,
                      sizeof(double) * b);
          std::fill(ws.sim.begin(), ws.sim.end(), 0.0);
          plan.fft(ws.sre.data(), ws.sim.data(), false);
          std::memcpy(r0, ws.sre.data(), sizeof(double) * b);
          std::memcpy(r0 + b, ws.sim.data(), sizeof(double) * b);
        }

        if (order == 3) {
          // Pair products of the base spectra shared by all rows of one axis.
          const double* b0 = ws.base_spec.data();
          const double* b1 = b0 + spec;
          const double* b2 = b1 + spec;
          double* p12 = colbuf + (rows + 0) * spec;
          double* p02 = colbuf + (rows + 1) * spec;
          double* p01 = colbuf + (rows + 2) * spec;
          cmul(b1, b1 + b, b2, b2 + b, p12, p12 + b, b);
          cmul(b0, b0 + b, b2, b2 + b, p02, p02 + b, b);
          cmul(b0, b0 + b, b1, b1 + b, p01, p01 + b, b);
        }
      }

      // Phase B: accumulate into per-row spectra, columns in ascending order.
#pragma omp parallel for schedule(static) if (parallel)
      for (uint32_t r = 0; r < rows; ++r) {
        const uint32_t a = r / l;
        const uint32_t partner = order == 2 ? rows + (1 - a) : rows + a;
        double* are = acc.data() + static_cast<size_t>(r) * spec;
        for (size_t cc = 0; cc < cnt; ++cc) {
          const double* colbuf = blockbuf.data() + cc * nspec * spec;
          const double* ms = colbuf + static_cast<size_t>(r) * spec;
          const double* ps = colbuf + static_cast<size_t>(partner) * spec;
          cmul_acc(ms, ms + b, ps, ps + b, are, are + b, b);
        }
      }
    }

    // Back to bucket space; row pairs share one inverse transform
    // (IFFT(X + iY) = x + iy for spectra of real vectors).
#pragma omp parallel for schedule(static) if (parallel)
    for (uint32_t r = 0; r < rows; r += 2) {
      const double* xre = acc.data() + static_cast<size_t>(r) * spec;
      const double* xim = xre + b;
      if (r + 1 < rows) {
        const double* yre = acc.data() + static_cast<size_t>(r + 1) * spec;
        const double* yim = yre + b;
        std::vector<double> zre(b), zim(b);
        for (uint32_t k = 0; k < b; ++k) {
          zre[k] = xre[k] - yim[k];
          zim[k] = xim[k] + yre[k];
        }
        plan.fft(zre.data(), zim.data(), true);
        std::memcpy(bank.rep_row(t, r), zre.data(), sizeof(double) * b);
        std::memcpy(bank.rep_row(t, r + 1), zim.data(), sizeof(double) * b);
      } else {
        std::vector<double> zre(xre, xre + b), zim(xim, xim + b);
        plan.fft(zre.data(), zim.data(), true);
        std::memcpy(bank.rep_row(t, r), zre.data(), sizeof(double) * b);
      }
    }
  }
  return bank;
}

}  // namespace

uint32_t AteeParams::b_eff() const {
  if (b == 0) throw std::invalid_argument("atee: b must be positive");
  return static_cast<uint32_t>(next_pow2(b));
}

std::vector<HashPair> derive_hashes(const AteeParams& prm, uint64_t seed, uint32_t t, int order) {
  std::vector<HashPair> hp;
  hp.reserve(order);
  const uint32_t b = prm.b_eff();
  for (int a = 0; a < order; ++a) {
    const uint64_t bucket_rep = prm.hash_reuse ? 0 : t + 1;
    hp.emplace_back(mix_seed(seed, kBucketTag, bucket_rep, a + 1),
                    mix_seed(seed, kSignTag, t + 1, a + 1), b);
  }
  return hp;
}

SketchBank build_sketch_bank(const GradientFactors& f, const IndexCodeTable& table,
                             const AteeParams& prm, uint64_t seed) {
  return build_bank_impl(f, table, prm, seed, true);
}

SketchBank build_sketch_bank_serial(const GradientFactors& f, const IndexCodeTable& table,
                                    const AteeParams& prm, uint64_t seed) {
  return build_bank_impl(f, table, prm, seed, false);
}

void add_bank(SketchBank& dst, const SketchBank& src) {
  if (dst.s.size() != src.s.size() || dst.rows != src.rows || dst.b_eff != src.b_eff)
    throw std::invalid_argument("add_bank: shape mismatch");
  for (size_t i = 0; i < dst.s.size(); ++i) dst.s[i] += src.s[i];
}

DecodedVotes decode_bank(const SketchBank& bank, const IndexCodeTable& table,
                         const AteeParams& prm, int order) {
  const uint32_t l = table.l;
  const uint32_t rows = bank.rows;
  const uint32_t b = bank.b_eff;
  if (rows != static_cast<uint32_t>(order) * l)
    throw std::invalid_argument("decode: bank/table row mismatch");

  DecodedVotes votes;
  votes.d = bank.d;
  std::vector<uint8_t> bits(static_cast<size_t>(rows) * b);
  std::vector<uint8_t> col(rows);
  for (uint32_t t = 0; t < bank.d; ++t) {
    binarify(bank.rep_row(t, 0), rows, b, prm.delta, bits.data());
    std::set<Index3> seen;  // one vote per index per repetition
    for (uint32_t q = 0; q < b; ++q) {
      bool any = false;
      for (uint32_t r = 0; r < rows; ++r) {
        col[r] = bits[static_cast<size_t>(r) * b + q];
        any = any || col[r];
      }
      if (!any) continue;  // empty bucket: nothing to decode
      Index3 idx{0, 0, 0};
      bool ok = true;
      for (int a = 0; a < order && ok; ++a) {
        auto v = decode_half(table, col.data() + static_cast<size_t>(a) * l);
        if (!v)
          ok = false;
        else
          idx[a] = *v;
      }
      if (ok) seen.insert(idx);
    }
    for (const Index3& idx : seen) ++votes.counts[idx];
  }
  return votes;
}

std::vector<Index3> majority_filter(const DecodedVotes& votes, size_t cap) {
  std::vector<std::pair<Index3, uint32_t>> kept;
  for (const auto& [idx, c] : votes.counts)
    if (2ull * c >= votes.d) kept.emplace_back(idx, c);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (kept.size() > cap) kept.resize(cap);
  std::vector<Index3> out;
  out.reserve(kept.size());
  for (const auto& [idx, c] : kept) out.push_back(idx);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Index3> atee_extract(const GradientFactors& f, const AteeParams& prm, uint64_t seed) {
  const IndexCodeTable table =
      build_code_table(static_cast<uint32_t>(f.dim()), prm.scheme, prm.rep);
  const SketchBank bank = build_sketch_bank(f, table, prm, seed);
  const DecodedVotes votes = decode_bank(bank, table, prm, f.order);
  return majority_filter(votes, prm.b);
}

double gradient_norm_bound(const TheoryBounds& tb, uint32_t k) {
  return 2.0 * tb.L * std::sqrt(static_cast<double>(k)) * tb.omega + tb.G;
}

double default_delta(const TheoryBounds& tb, uint32_t k, uint32_t k_top) {
  if (k_top == 0) throw std::invalid_argument("default_delta: k_top must be positive");
  return gradient_norm_bound(tb, k) / std::sqrt(2.0 * k_top);
}

std::string ParamReport::text() const {
  std::ostringstream os;
  os << "min_b=" << min_b << " (" << (b_ok ? "ok" : "LOW") << ")"
     << " min_d=" << min_d << " min_d_relaxed=" << min_d_relaxed << " ("
     << (d_ok ? "ok" : "LOW") << ")";
  return os.str();
}

double ht_rho(size_t K, size_t k, size_t D) {
  const double w = static_cast<double>(std::min(K, D - k));
  return w / (static_cast<double>(k) - static_cast<double>(K) + w);
}

double ht_distortion(double rho) { return 1.0 + (rho + std::sqrt((4.0 + rho) * rho)) / 2.0; }

ParamReport validate_params(const AteeParams& prm, double g, const TheoryBounds& tb) {
  if (prm.delta <= 0) throw std::invalid_argument("validate: delta must be positive");
  ParamReport rep;
  rep.min_b = 432.0 * g * g / (prm.delta * prm.delta);
  const double kt = std::max<uint32_t>(prm.k_top, 1);
  rep.min_d = static_cast<uint32_t>(std::ceil(48.0 * std::log(2.0 * tb.c * kt)));
  rep.min_d_relaxed = static_cast<uint32_t>(std::ceil(48.0 * std::log(tb.c * kt)));
  rep.b_ok = prm.b_eff() >= rep.min_b;
  rep.d_ok = prm.d >= rep.min_d_relaxed;
  return rep;
}

}  // namespace intht
