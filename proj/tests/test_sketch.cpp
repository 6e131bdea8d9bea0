#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "intht/rng.hpp"
#include "intht/sketch.hpp"

using namespace intht;

namespace {

ColMatrix random_matrix(size_t rows, size_t cols, uint64_t seed) {
  ColMatrix m(rows, cols);
  auto g = make_rng(seed);
  for (double& v : m.data) v = uniform_real(g, -1.0, 1.0);
  return m;
}

// Composite-hash count-sketch of a dense matrix: the oracle the compressed
// product must match.
std::vector<double> sketch_matrix(const ColMatrix& M, const HashPair& h1, const HashPair& h2) {
  std::vector<double> s(h1.buckets(), 0.0);
  for (size_t i = 0; i < M.rows; ++i)
    for (size_t j = 0; j < M.cols; ++j) {
      uint32_t q = (h1.bucket(static_cast<uint32_t>(i)) + h2.bucket(static_cast<uint32_t>(j))) %
                   h1.buckets();
      s[q] += h1.sign(static_cast<uint32_t>(i)) * h2.sign(static_cast<uint32_t>(j)) * M.at(i, j);
    }
  return s;
}

std::vector<double> sketch_cube(const std::vector<double>& M, size_t p, const HashPair& h1,
                                const HashPair& h2, const HashPair& h3) {
  std::vector<double> s(h1.buckets(), 0.0);
  for (size_t i = 0; i < p; ++i)
    for (size_t j = 0; j < p; ++j)
      for (size_t k = 0; k < p; ++k) {
        uint32_t q = (h1.bucket(static_cast<uint32_t>(i)) + h2.bucket(static_cast<uint32_t>(j)) +
                      h3.bucket(static_cast<uint32_t>(k))) %
                     h1.buckets();
        s[q] += h1.sign(static_cast<uint32_t>(i)) * h2.sign(static_cast<uint32_t>(j)) *
                h3.sign(static_cast<uint32_t>(k)) * M[(i * p + j) * p + k];
      }
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

TEST_CASE("count_sketch matches the direct accumulation bit for bit") {
  const size_t p = 37;
  const uint32_t b = 16;
  auto g = make_rng(11);
  std::vector<double> x(p);
  for (double& v : x) v = uniform_real(g, -2.0, 2.0);
  HashPair hp(3, b);

  std::vector<double> got(b, 0.0), want(b, 0.0);
  count_sketch(x.data(), p, hp, got.data());
  for (size_t j = 0; j < p; ++j)
    want[hp.bucket(static_cast<uint32_t>(j))] += hp.sign(static_cast<uint32_t>(j)) * x[j];
  for (uint32_t q = 0; q < b; ++q) CHECK(got[q] == want[q]);
}

TEST_CASE("masked count_sketch equals sketching the zeroed vector") {
  const size_t p = 29;
  const uint32_t b = 8;
  auto g = make_rng(12);
  std::vector<double> x(p), xz(p);
  std::vector<uint8_t> keep(p);
  for (size_t j = 0; j < p; ++j) {
    x[j] = uniform_real(g, -1.0, 1.0);
    keep[j] = uniform01(g) < 0.5 ? 1 : 0;
    xz[j] = keep[j] ? x[j] : 0.0;
  }
  HashPair hp(4, b);
  std::vector<double> got(b, 0.0), want(b, 0.0);
  count_sketch_masked(x.data(), p, keep.data(), hp, got.data());
  count_sketch(xz.data(), p, hp, want.data());
  for (uint32_t q = 0; q < b; ++q) CHECK(got[q] == want[q]);
}

TEST_CASE("compressed product equals the sketch of the materialized product") {
  auto g = make_rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const size_t p = 2 + uniform_index(g, 15);
    const size_t m = 1 + uniform_index(g, 4);
    const uint32_t b = 1u << (2 + uniform_index(g, 4));  // 4..32
    ColMatrix A = random_matrix(p, m, 100 + trial);
    ColMatrix B = random_matrix(p, m, 200 + trial);
    HashPair h1(300 + trial, b), h2(400 + trial, b);

    ColMatrix M(p, p);
    for (size_t i = 0; i < p; ++i)
      for (size_t j = 0; j < p; ++j) {
        double acc = 0;
        for (size_t t = 0; t < m; ++t) acc += A.at(i, t) * B.at(j, t);
        M.at(i, j) = acc;
      }

    std::vector<double> got = compressed_product(A, B, h1, h2);
    std::vector<double> want = sketch_matrix(M, h1, h2);
    REQUIRE(got.size() == b);
    const double scale = std::max(1e-30, max_abs(want));
    for (uint32_t q = 0; q < b; ++q) CHECK(std::fabs(got[q] - want[q]) / scale < 1e-9);
  }
}

TEST_CASE("order-3 compressed product equals the sketch of the cube") {
  auto g = make_rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const size_t p = 2 + uniform_index(g, 7);
    const size_t m = 1 + uniform_index(g, 3);
    const uint32_t b = 1u << (2 + uniform_index(g, 3));  // 4..16
    ColMatrix A = random_matrix(p, m, 500 + trial);
    ColMatrix B = random_matrix(p, m, 600 + trial);
    ColMatrix C = random_matrix(p, m, 700 + trial);
    HashPair h1(800 + trial, b), h2(900 + trial, b), h3(1000 + trial, b);

    std::vector<double> M(p * p * p, 0.0);
    for (size_t i = 0; i < p; ++i)
      for (size_t j = 0; j < p; ++j)
        for (size_t k = 0; k < p; ++k) {
          double acc = 0;
          for (size_t t = 0; t < m; ++t) acc += A.at(i, t) * B.at(j, t) * C.at(k, t);
          M[(i * p + j) * p + k] = acc;
        }

    std::vector<double> got = compressed_product3(A, B, C, h1, h2, h3);
    std::vector<double> want = sketch_cube(M, p, h1, h2, h3);
    const double scale = std::max(1e-30, max_abs(want));
    for (uint32_t q = 0; q < b; ++q) CHECK(std::fabs(got[q] - want[q]) / scale < 1e-9);
  }
}

TEST_CASE("sketch estimates of a single entry are unbiased") {
  // Fixed product, fresh hashes per trial; the signed bucket readout must
  // average to the true entry within three standard errors.
  const size_t p = 6, m = 2;
  ColMatrix A = random_matrix(p, m, 71);
  ColMatrix B = random_matrix(p, m, 72);
  double truth = 0;
  for (size_t t = 0; t < m; ++t) truth += A.at(2, t) * B.at(4, t);

  const int trials = 4000;
  const uint32_t b = 8;
  double sum = 0, sumsq = 0;
  for (int t = 0; t < trials; ++t) {
    HashPair h1(5000 + t, b), h2(9000 + t, b);
    std::vector<double> s = compressed_product(A, B, h1, h2);
    uint32_t q = (h1.bucket(2) + h2.bucket(4)) % b;
    double est = h1.sign(2) * h2.sign(4) * s[q];
    sum += est;
    sumsq += est * est;
  }
  const double mean = sum / trials;
  const double var = sumsq / trials - mean * mean;
  const double se = std::sqrt(var / trials);
  CHECK(std::fabs(mean - truth) < 3.0 * se + 1e-12);
}

TEST_CASE("materialized product honours weights, norm and batch indexing") {
  const size_t p = 5, ncols = 6;
  ColMatrix X = random_matrix(p, ncols, 81);
  std::vector<uint32_t> idx = {4, 1, 3};
  GradientFactors f;
  f.X = &X;
  f.idx = &idx;
  f.w = {0.5, -2.0, 1.25};
  f.norm = 1.0 / 3.0;
  f.order = 2;
  CHECK(f.batch_size() == 3);
  CHECK(f.dim() == p);

  ColMatrix M = materialize_product(f);
  for (size_t i = 0; i < p; ++i)
    for (size_t j = 0; j < p; ++j) {
      double want = 0;
      for (size_t t = 0; t < idx.size(); ++t) want += f.w[t] * X.at(i, idx[t]) * X.at(j, idx[t]);
      want *= f.norm;
      CHECK(M.at(i, j) == doctest::Approx(want).epsilon(1e-12));
    }

  f.order = 3;
  std::vector<double> M3 = materialize_product3(f);
  REQUIRE(M3.size() == p * p * p);
  double want = 0;
  for (size_t t = 0; t < idx.size(); ++t)
    want += f.w[t] * X.at(1, idx[t]) * X.at(2, idx[t]) * X.at(0, idx[t]);
  want *= f.norm;
  CHECK(M3[(1 * p + 2) * p + 0] == doctest::Approx(want).epsilon(1e-12));
}
