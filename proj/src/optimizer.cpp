#include "intht/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "intht/rng.hpp"

namespace intht {

namespace {

constexpr uint64_t kBatchTag = 0xba7c;
constexpr uint64_t kAteeTag = 0xa7ee;
constexpr uint64_t kVrHashTag = 0x6a54;
constexpr uint64_t kVrBatchTag = 0x6a55;
constexpr uint64_t kVrPickTag = 0x6a56;
constexpr double kConvergedFrac = 1e-3;  // "converged" = frob below this * ||theta*||

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

double tuple_product(const double* x, const Index3& e, int order) {
  double v = x[e[0]] * x[e[1]];
  if (order == 3) v *= x[e[2]];
  return v;
}

std::vector<uint32_t> draw_batch(uint32_t n, uint32_t m, uint64_t seed) {
  std::vector<uint32_t> batch;
  if (m == n) {
    batch.resize(n);
    std::iota(batch.begin(), batch.end(), 0u);
    return batch;
  }
  std::mt19937_64 g = make_rng(seed);
  std::vector<uint32_t> scratch;
  sample_without_replacement(g, n, m, batch, scratch);
  return batch;
}

// Pending metrics shared by both solvers.
void push_record(std::vector<IterateRecord>& records, uint32_t t, const SparseTensor& theta,
                 const SparseTensor& truth, size_t ext_size, double wall) {
  IterateRecord r;
  r.t = t;
  r.frob_error = frob_distance(theta, truth);
  r.support_precision = support_precision(theta, truth);
  r.support_recall = support_recall(theta, truth);
  r.atee_set_size = ext_size;
  r.wall_ms = wall;
  records.push_back(r);
}

void finalize(RunResult& res, const RunConfig& cfg, const DataSet& ds) {
  const double tol = kConvergedFrac * ds.theta.norm_f();
  for (const IterateRecord& r : res.records)
    if (r.frob_error < tol) {
      res.first_below_tol = static_cast<int>(r.t);
      break;
    }
  res.final_frob = frob_distance(res.theta, ds.theta);
  std::vector<std::pair<Index3, double>> items(res.theta.entries.begin(),
                                               res.theta.entries.end());
  const SparseTensor hk = hard_threshold(std::move(items), ds.order, ds.p, cfg.K);
  res.success = same_support(hk, ds.theta);
  res.wall_ms_total = 0;
  for (const IterateRecord& r : res.records) res.wall_ms_total += r.wall_ms;
}

}  // namespace

void residuals(const SparseTensor& theta, const DataSet& ds, const std::vector<uint32_t>& batch,
               std::vector<double>& u) {
  u.resize(batch.size());
#pragma omp parallel for schedule(static)
  for (size_t i = 0; i < batch.size(); ++i)
    u[i] = evaluate_model(theta, ds.X.col(batch[i])) - ds.y[batch[i]];
}

std::vector<double> gradient_on_support(const GradientFactors& f, const std::vector<Index3>& S) {
  std::vector<double> g(S.size(), 0.0);
  const size_t m = f.batch_size();
#pragma omp parallel for schedule(static)
  for (size_t e = 0; e < S.size(); ++e) {
    double s = 0;
    for (size_t i = 0; i < m; ++i) s += f.w[i] * tuple_product(f.sample(i), S[e], f.order);
    g[e] = f.norm * s;
  }
  return g;
}

namespace {

// Select the k_top largest-|value| items, ties toward smaller index.
std::vector<Index3> select_top(std::vector<std::pair<Index3, double>>& items, size_t k_top) {
  if (k_top > items.size())
    throw std::invalid_argument("top extraction: k_top exceeds the coordinate count");
  const auto cmp = [](const auto& a, const auto& b) {
    const double ma = std::fabs(a.second), mb = std::fabs(b.second);
    if (ma != mb) return ma > mb;
    return a.first < b.first;
  };
  std::nth_element(items.begin(), items.begin() + k_top, items.end(), cmp);
  std::sort(items.begin(), items.begin() + k_top, cmp);
  std::vector<Index3> out;
  out.reserve(k_top);
  for (size_t i = 0; i < k_top; ++i) out.push_back(items[i].first);
  return out;
}

}  // namespace

std::vector<Index3> exact_top_extract(const GradientFactors& f, size_t k_top) {
  const uint32_t p = static_cast<uint32_t>(f.dim());
  std::vector<std::pair<Index3, double>> items;
  if (f.order == 2) {
    const ColMatrix M = materialize_product(f);
    items.reserve(static_cast<size_t>(p) * p);
    for (uint32_t i = 0; i < p; ++i)
      for (uint32_t j = 0; j < p; ++j) items.push_back({{i, j, 0}, M.at(i, j)});
  } else {
    const std::vector<double> M = materialize_product3(f);
    items.reserve(M.size());
    for (uint32_t i = 0; i < p; ++i)
      for (uint32_t j = 0; j < p; ++j)
        for (uint32_t k = 0; k < p; ++k)
          items.push_back({{i, j, k}, M[(static_cast<size_t>(i) * p + j) * p + k]});
  }
  return select_top(items, k_top);
}

std::vector<Index3> exact_top_canonical(const GradientFactors& f, size_t k_top) {
  const uint32_t p = static_cast<uint32_t>(f.dim());
  const size_t m = f.batch_size();
  const size_t ncanon = f.order == 2
                            ? static_cast<size_t>(p) * (p + 1) / 2
                            : static_cast<size_t>(p) * (p + 1) * (p + 2) / 6;
  k_top = std::min(k_top, ncanon);  // clamp: small problems have few coordinates
  std::vector<std::pair<Index3, double>> items;

  if (f.order == 2) {
    // Row a of the canonical triangle starts at a*p - a*(a-1)/2.
    std::vector<double> G(static_cast<size_t>(p) * (p + 1) / 2, 0.0);
#pragma omp parallel for schedule(dynamic, 8)
    for (uint32_t a = 0; a < p; ++a) {
      double* row = G.data() + static_cast<size_t>(a) * p - static_cast<size_t>(a) * (a - 1) / 2;
      for (size_t i = 0; i < m; ++i) {
        const double* x = f.sample(i);
        const double t = f.norm * f.w[i] * x[a];
        for (uint32_t bcol = a; bcol < p; ++bcol) row[bcol - a] += t * x[bcol];
      }
    }
    items.reserve(G.size());
    size_t at = 0;
    for (uint32_t a = 0; a < p; ++a)
      for (uint32_t bcol = a; bcol < p; ++bcol) items.push_back({{a, bcol, 0}, G[at++]});
  } else {
    // Canonical triples a <= b <= c; per-a blocks are 2-d triangles of side p-a.
    std::vector<size_t> start(p + 1, 0);
    for (uint32_t a = 0; a < p; ++a) {
      const size_t q = p - a;
      start[a + 1] = start[a] + q * (q + 1) / 2;
    }
    std::vector<double> G(start[p], 0.0);
#pragma omp parallel for schedule(dynamic, 4)
    for (uint32_t a = 0; a < p; ++a) {
      double* block = G.data() + start[a];
      const uint32_t q = p - a;
      for (size_t i = 0; i < m; ++i) {
        const double* x = f.sample(i);
        const double ta = f.norm * f.w[i] * x[a];
        size_t at = 0;
        for (uint32_t bo = 0; bo < q; ++bo) {
          const double tb = ta * x[a + bo];
          for (uint32_t co = bo; co < q; ++co) block[at++] += tb * x[a + co];
        }
      }
    }
    items.reserve(G.size());
    size_t at = 0;
    for (uint32_t a = 0; a < p; ++a)
      for (uint32_t bcol = a; bcol < p; ++bcol)
        for (uint32_t c = bcol; c < p; ++c) items.push_back({{a, bcol, c}, G[at++]});
  }
  return select_top(items, k_top);
}

RunResult intht_run(const RunConfig& cfg, const DataSet& ds) {
  const uint32_t n = ds.n;
  const uint32_t m = cfg.m;
  const uint32_t k = cfg.k_eff();
  const int order = ds.order;
  const double theta_norm = ds.theta.norm_f();

  RunResult res;
  res.theta = SparseTensor(order, ds.p);
  if (cfg.init_at_truth) res.theta = ds.theta;

  AteeParams prm;
  prm.b = cfg.b;
  prm.d = cfg.d;
  prm.delta = cfg.delta_eff();
  prm.k_top = 2 * k;
  prm.scheme = cfg.scheme;
  prm.rep = cfg.rep;
  prm.hash_reuse = cfg.hash_reuse;
  const IndexCodeTable table = build_code_table(ds.p, prm.scheme, prm.rep);

  std::vector<double> u;
  for (uint32_t t = 0; t < cfg.T; ++t) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<uint32_t> batch = draw_batch(n, m, mix_seed(cfg.seed, kBatchTag, t));
    residuals(res.theta, ds, batch, u);
    GradientFactors f;
    f.X = &ds.X;
    f.idx = &batch;
    f.w = u;
    f.norm = 1.0 / m;
    f.order = order;

    std::set<Index3> S_set;
    size_t ext_size = 0;
    if (cfg.mode == Mode::atee) {
      const SketchBank bank = build_sketch_bank(f, table, prm, mix_seed(cfg.seed, kAteeTag, t));
      const DecodedVotes votes = decode_bank(bank, table, prm, order);
      const std::vector<Index3> ext = majority_filter(votes, prm.b);
      ext_size = ext.size();
      for (const Index3& e : ext) S_set.insert(canonicalize(e, order));
    } else {
      const std::vector<Index3> ext = exact_top_canonical(f, 2 * k);
      ext_size = ext.size();
      S_set.insert(ext.begin(), ext.end());
    }
    for (const auto& [e, v] : res.theta.entries) S_set.insert(e);

    const std::vector<Index3> S(S_set.begin(), S_set.end());
    const std::vector<double> g = gradient_on_support(f, S);
    std::vector<std::pair<Index3, double>> items;
    items.reserve(S.size());
    for (size_t e = 0; e < S.size(); ++e)
      items.push_back({S[e], res.theta.get(S[e]) - cfg.eta * g[e]});
    res.theta = hard_threshold(std::move(items), order, ds.p, k);

    push_record(res.records, t, res.theta, ds.theta, ext_size, ms_since(t0));
    res.iters_run = t + 1;
    if (cfg.exit_tol > 0 && res.records.back().frob_error <= cfg.exit_tol * theta_norm) break;
  }
  finalize(res, cfg, ds);
  return res;
}

RunResult intht_vr_run(const RunConfig& cfg, const DataSet& ds) {
  const uint32_t n = ds.n;
  const uint32_t m = cfg.m;
  const uint32_t k = cfg.k_eff();
  const int order = ds.order;
  const double theta_norm = ds.theta.norm_f();

  RunResult res;
  res.theta = SparseTensor(order, ds.p);
  if (cfg.init_at_truth) res.theta = ds.theta;

  AteeParams prm;
  prm.b = cfg.b;
  prm.d = cfg.d;
  prm.delta = cfg.delta_eff();
  prm.k_top = 2 * k;
  prm.scheme = cfg.scheme;
  prm.rep = cfg.rep;
  prm.hash_reuse = cfg.hash_reuse;
  const IndexCodeTable table = build_code_table(ds.p, prm.scheme, prm.rep);

  std::vector<uint32_t> all_idx(n);
  std::iota(all_idx.begin(), all_idx.end(), 0u);

  bool done = false;
  std::vector<double> u0, u_cur;
  for (uint32_t i = 0; i < cfg.T && !done; ++i) {
    // Anchor the round: full-data residuals, their sketch, and a fixed
    // code/hash draw reused by every inner step.
    const uint64_t hash_seed = mix_seed(cfg.seed, kVrHashTag, i);
    residuals(res.theta, ds, all_idx, u0);
    GradientFactors f_full;
    f_full.X = &ds.X;
    f_full.idx = &all_idx;
    f_full.w = u0;
    f_full.norm = 1.0 / n;
    f_full.order = order;
    const SketchBank bank_full = build_sketch_bank(f_full, table, prm, hash_seed);

    std::map<Index3, double> anchor;  // full-gradient entries, filled on demand
    std::vector<SparseTensor> iterates;
    iterates.push_back(res.theta);

    for (uint32_t j = 0; j < cfg.t_inner; ++j) {
      const auto t0 = std::chrono::steady_clock::now();
      const std::vector<uint32_t> batch =
          draw_batch(n, m, mix_seed(cfg.seed, kVrBatchTag, i, j));
      residuals(res.theta, ds, batch, u_cur);
      for (size_t q = 0; q < batch.size(); ++q) u_cur[q] -= u0[batch[q]];

      GradientFactors f_corr;
      f_corr.X = &ds.X;
      f_corr.idx = &batch;
      f_corr.w = u_cur;
      f_corr.norm = 1.0 / m;
      f_corr.order = order;

      SketchBank bank = bank_full;
      add_bank(bank, build_sketch_bank(f_corr, table, prm, hash_seed));
      const DecodedVotes votes = decode_bank(bank, table, prm, order);
      const std::vector<Index3> ext = majority_filter(votes, prm.b);

      std::set<Index3> S_set;
      for (const Index3& e : ext) S_set.insert(canonicalize(e, order));
      for (const auto& [e, v] : res.theta.entries) S_set.insert(e);
      const std::vector<Index3> S(S_set.begin(), S_set.end());

      std::vector<Index3> missing;
      for (const Index3& e : S)
        if (!anchor.count(e)) missing.push_back(e);
      if (!missing.empty()) {
        const std::vector<double> ga = gradient_on_support(f_full, missing);
        for (size_t q = 0; q < missing.size(); ++q) anchor[missing[q]] = ga[q];
      }
      const std::vector<double> gc = gradient_on_support(f_corr, S);

      std::vector<std::pair<Index3, double>> items;
      items.reserve(S.size());
      for (size_t e = 0; e < S.size(); ++e)
        items.push_back({S[e], res.theta.get(S[e]) - cfg.eta * (anchor[S[e]] + gc[e])});
      res.theta = hard_threshold(std::move(items), order, ds.p, k);

      push_record(res.records, i * cfg.t_inner + j, res.theta, ds.theta, ext.size(),
                  ms_since(t0));
      res.iters_run = i * cfg.t_inner + j + 1;
      if (cfg.exit_tol > 0 && res.records.back().frob_error <= cfg.exit_tol * theta_norm) {
        done = true;
        break;
      }
      if (j + 1 < cfg.t_inner) iterates.push_back(res.theta);
    }
    if (!done) {
      // Next round starts from a uniformly drawn inner iterate (the final
      // inner state is deliberately not a candidate).
      std::mt19937_64 g = make_rng(mix_seed(cfg.seed, kVrPickTag, i));
      res.theta = iterates[uniform_index(g, iterates.size())];
    }
  }
  finalize(res, cfg, ds);
  return res;
}

RunResult run_solver(const RunConfig& cfg, const DataSet& ds) {
  return cfg.mode == Mode::vr ? intht_vr_run(cfg, ds) : intht_run(cfg, ds);
}

}  // namespace intht
