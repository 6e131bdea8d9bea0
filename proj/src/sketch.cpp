#include "intht/sketch.hpp"

#include <cstring>
#include <stdexcept>

namespace intht {

void count_sketch(const double* x, size_t p, const HashPair& hp, double* buckets) {
  std::memset(buckets, 0, hp.buckets() * sizeof(double));
  for (size_t j = 0; j < p; ++j)
    buckets[hp.bucket(static_cast<uint32_t>(j))] += hp.sign(static_cast<uint32_t>(j)) * x[j];
}

void count_sketch_masked(const double* x, size_t p, const uint8_t* keep, const HashPair& hp,
                         double* buckets) {
  std::memset(buckets, 0, hp.buckets() * sizeof(double));
  for (size_t j = 0; j < p; ++j)
    if (keep[j])
      buckets[hp.bucket(static_cast<uint32_t>(j))] += hp.sign(static_cast<uint32_t>(j)) * x[j];
}

std::vector<double> compressed_product(const ColMatrix& A, const ColMatrix& B,
                                       const HashPair& h1, const HashPair& h2) {
  if (A.cols != B.cols) throw std::invalid_argument("panel column counts differ");
  if (h1.buckets() != h2.buckets()) throw std::invalid_argument("hash bucket counts differ");
  const size_t b = h1.buckets();
  FftPlan plan(b);
  std::vector<double> sa(b), sb(b), conv(b), out(b, 0.0);
  for (size_t i = 0; i < A.cols; ++i) {
    count_sketch(A.col(i), A.rows, h1, sa.data());
    count_sketch(B.col(i), B.rows, h2, sb.data());
    circular_convolve(plan, sa.data(), sb.data(), conv.data());
    for (size_t q = 0; q < b; ++q) out[q] += conv[q];
  }
  return out;
}

std::vector<double> compressed_product3(const ColMatrix& A, const ColMatrix& B, const ColMatrix& C,
                                        const HashPair& h1, const HashPair& h2, const HashPair& h3) {
  if (A.cols != B.cols || A.cols != C.cols) throw std::invalid_argument("panel column counts differ");
  if (h1.buckets() != h2.buckets() || h1.buckets() != h3.buckets())
    throw std::invalid_argument("hash bucket counts differ");
  const size_t b = h1.buckets();
  FftPlan plan(b);
  std::vector<double> sa(b), sb(b), sc(b), tmp(b), conv(b), out(b, 0.0);
  for (size_t i = 0; i < A.cols; ++i) {
    count_sketch(A.col(i), A.rows, h1, sa.data());
    count_sketch(B.col(i), B.rows, h2, sb.data());
    count_sketch(C.col(i), C.rows, h3, sc.data());
    circular_convolve(plan, sa.data(), sb.data(), tmp.data());
    circular_convolve(plan, tmp.data(), sc.data(), conv.data());
    for (size_t q = 0; q < b; ++q) out[q] += conv[q];
  }
  return out;
}

ColMatrix materialize_product(const GradientFactors& f) {
  const size_t p = f.dim();
  const size_t m = f.batch_size();
  ColMatrix M(p, p);
  for (size_t i = 0; i < m; ++i) {
    const double* x = f.sample(i);
    const double c = f.norm * f.w[i];
    for (size_t jj = 0; jj < p; ++jj) {
      const double cj = c * x[jj];
      double* colp = M.col(jj);
      for (size_t ii = 0; ii < p; ++ii) colp[ii] += cj * x[ii];
    }
  }
  return M;
}

std::vector<double> materialize_product3(const GradientFactors& f) {
  const size_t p = f.dim();
  const size_t m = f.batch_size();
  std::vector<double> M(p * p * p, 0.0);
  for (size_t i = 0; i < m; ++i) {
    const double* x = f.sample(i);
    const double c = f.norm * f.w[i];
    for (size_t a = 0; a < p; ++a) {
      const double ca = c * x[a];
      for (size_t bji = 0; bji < p; ++bji) {
        const double cab = ca * x[bji];
        double* row = M.data() + (a * p + bji) * p;
        for (size_t cc = 0; cc < p; ++cc) row[cc] += cab * x[cc];
      }
    }
  }
  return M;
}

}  // namespace intht
