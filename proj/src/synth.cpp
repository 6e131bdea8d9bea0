#include "intht/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "intht/rng.hpp"

namespace intht {

namespace {

constexpr uint64_t kSupportTag = 0x11;
constexpr uint64_t kValueTag = 0x22;
constexpr uint64_t kFeatureTag = 0x33;

DataSet gen_common(uint32_t n, uint32_t p, uint32_t K, int order, Regime regime, uint64_t seed,
                   bool include_diagonal) {
  if (p < 2) throw std::invalid_argument("gen: p must be at least 2");
  if (order != 2 && order != 3) throw std::invalid_argument("gen: order must be 2 or 3");
  DataSet ds;
  ds.p = p;
  ds.n = n;
  ds.K = K;
  ds.order = order;
  ds.regime = regime;
  ds.seed = seed;
  ds.theta = SparseTensor(order, p);

  std::vector<Index3> universe = support_universe(p, order, include_diagonal);
  if (K > universe.size()) throw std::invalid_argument("gen: K exceeds the tuple universe");
  std::mt19937_64 gs = make_rng(mix_seed(seed, kSupportTag));
  std::vector<uint32_t> pick, scratch;
  sample_without_replacement(gs, universe.size(), K, pick, scratch);

  std::mt19937_64 gv = make_rng(mix_seed(seed, kValueTag));
  for (uint32_t t : pick) {
    // uniform regime: magnitude on [10, 20) with a fair-coin sign; bernoulli
    // regime: +/-1 values.
    const double mag = regime == Regime::uniform ? uniform_real(gv, 10.0, 20.0) : 1.0;
    ds.theta.set(universe[t], rademacher(gv) * mag);
  }

  std::mt19937_64 gx = make_rng(mix_seed(seed, kFeatureTag));
  const double scale = std::sqrt(3.0);  // unit variance for Uniform(-1,1)
  ds.X = ColMatrix(p, n);
  ds.y.resize(n);
  for (uint32_t i = 0; i < n; ++i) {
    double* x = ds.X.col(i);
    if (regime == Regime::uniform) {
      for (uint32_t j = 0; j + 1 < p; ++j) x[j] = scale * uniform_real(gx, -1.0, 1.0);
    } else {
      for (uint32_t j = 0; j + 1 < p; ++j) x[j] = rademacher(gx);
    }
    x[p - 1] = 1.0;  // constant coordinate: pairs with it act as linear terms
    ds.y[i] = evaluate_model(ds.theta, x);
  }
  return ds;
}

}  // namespace

std::string regime_name(Regime r) { return r == Regime::uniform ? "uniform" : "bernoulli"; }

Regime parse_regime(const std::string& s) {
  if (s == "uniform") return Regime::uniform;
  if (s == "bernoulli") return Regime::bernoulli;
  throw std::invalid_argument("unknown regime: " + s);
}

std::vector<Index3> support_universe(uint32_t p, int order, bool include_diagonal) {
  std::vector<Index3> u;
  if (order == 2) {
    for (uint32_t i = 0; i < p; ++i)
      for (uint32_t j = include_diagonal ? i : i + 1; j < p; ++j) u.push_back({i, j, 0});
  } else if (include_diagonal) {
    for (uint32_t i = 0; i < p; ++i)
      for (uint32_t j = i; j < p; ++j)
        for (uint32_t k = j; k < p; ++k) u.push_back({i, j, k});
  } else {
    for (uint32_t i = 0; i < p; ++i)
      for (uint32_t j = i + 1; j < p; ++j)
        for (uint32_t k = j + 1; k < p; ++k) u.push_back({i, j, k});
    for (uint32_t i = 0; i + 1 < p; ++i) u.push_back({i, p - 1, p - 1});  // linear terms
  }
  return u;
}

DataSet gen_uniform(uint32_t n, uint32_t p, uint32_t K, int order, uint64_t seed,
                    bool include_diagonal) {
  return gen_common(n, p, K, order, Regime::uniform, seed, include_diagonal);
}

DataSet gen_bernoulli(uint32_t n, uint32_t p, uint32_t K, uint64_t seed, bool include_diagonal) {
  return gen_common(n, p, K, 2, Regime::bernoulli, seed, include_diagonal);
}

double evaluate_model(const SparseTensor& theta, const double* x) {
  double s = 0;
  if (theta.order == 2) {
    for (const auto& [idx, v] : theta.entries) s += v * x[idx[0]] * x[idx[1]];
  } else {
    for (const auto& [idx, v] : theta.entries) s += v * x[idx[0]] * x[idx[1]] * x[idx[2]];
  }
  return s;
}

void save_dataset(const DataSet& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  char buf[32];
  out << "intht-dataset v1\n";
  out << ds.p << ' ' << ds.n << ' ' << ds.K << ' ' << ds.order << ' ' << regime_name(ds.regime)
      << ' ' << ds.seed << '\n';
  for (uint32_t i = 0; i < ds.n; ++i) {
    const double* x = ds.X.col(i);
    for (uint32_t j = 0; j < ds.p; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", x[j]);
      out << buf << ' ';
    }
    std::snprintf(buf, sizeof buf, "%.17g", ds.y[i]);
    out << buf << '\n';
  }
  out << "theta " << ds.theta.nnz() << '\n';
  for (const auto& [idx, v] : ds.theta.entries) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << idx[0] << ' ' << idx[1] << ' ' << idx[2] << ' ' << buf << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

DataSet load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string tag, version;
  in >> tag >> version;
  if (tag != "intht-dataset" || version != "v1")
    throw std::runtime_error("unrecognized dataset format in " + path);
  DataSet ds;
  std::string regime;
  int order = 0;
  in >> ds.p >> ds.n >> ds.K >> order >> regime >> ds.seed;
  if (!in) throw std::runtime_error("bad dataset header in " + path);
  ds.order = order;
  ds.regime = parse_regime(regime);
  ds.X = ColMatrix(ds.p, ds.n);
  ds.y.resize(ds.n);
  for (uint32_t i = 0; i < ds.n; ++i) {
    double* x = ds.X.col(i);
    for (uint32_t j = 0; j < ds.p; ++j) in >> x[j];
    in >> ds.y[i];
  }
  size_t nnz = 0;
  in >> tag >> nnz;
  if (!in || tag != "theta") throw std::runtime_error("bad theta section in " + path);
  ds.theta = SparseTensor(ds.order, ds.p);
  for (size_t t = 0; t < nnz; ++t) {
    Index3 idx;
    double v;
    in >> idx[0] >> idx[1] >> idx[2] >> v;
    ds.theta.set(idx, v);
  }
  if (!in) throw std::runtime_error("truncated dataset in " + path);
  return ds;
}

}  // namespace intht
