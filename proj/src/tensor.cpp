#include "intht/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace intht {

Index3 canonical_index(uint32_t i, uint32_t j) {
  return i <= j ? Index3{i, j, 0} : Index3{j, i, 0};
}

Index3 canonical_index(uint32_t i, uint32_t j, uint32_t k) {
  Index3 idx{i, j, k};
  std::sort(idx.begin(), idx.end());
  return idx;
}

Index3 canonicalize(const Index3& idx, int order) {
  return order == 2 ? canonical_index(idx[0], idx[1]) : canonical_index(idx[0], idx[1], idx[2]);
}

void SparseTensor::set(const Index3& idx, double v) {
  const Index3 c = canonicalize(idx, order);
  if (std::fabs(v) < kZeroEps)
    entries.erase(c);
  else
    entries[c] = v;
}

double SparseTensor::get(const Index3& idx) const {
  auto it = entries.find(canonicalize(idx, order));
  return it == entries.end() ? 0.0 : it->second;
}

double SparseTensor::norm_f() const {
  double s = 0;
  for (const auto& [idx, v] : entries) s += v * v;
  return std::sqrt(s);
}

SparseTensor hard_threshold(std::vector<std::pair<Index3, double>> items, int order, uint32_t p,
                            size_t k) {
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    const double ma = std::fabs(a.second), mb = std::fabs(b.second);
    if (ma != mb) return ma > mb;
    return a.first < b.first;
  });
  SparseTensor out(order, p);
  for (const auto& [idx, v] : items) {
    if (out.entries.size() == k) break;
    if (std::fabs(v) < kZeroEps) break;  // sorted: everything after is zero too
    out.entries[idx] = v;
  }
  return out;
}

double frob_distance(const SparseTensor& a, const SparseTensor& b) {
  double s = 0;
  for (const auto& [idx, v] : a.entries) {
    const double d = v - b.get(idx);
    s += d * d;
  }
  for (const auto& [idx, v] : b.entries)
    if (!a.entries.count(idx)) s += v * v;
  return std::sqrt(s);
}

double support_precision(const SparseTensor& est, const SparseTensor& truth) {
  if (est.entries.empty()) return 0.0;
  size_t hit = 0;
  for (const auto& [idx, v] : est.entries) hit += truth.entries.count(idx);
  return static_cast<double>(hit) / static_cast<double>(est.entries.size());
}

double support_recall(const SparseTensor& est, const SparseTensor& truth) {
  if (truth.entries.empty()) return 1.0;
  size_t hit = 0;
  for (const auto& [idx, v] : truth.entries) hit += est.entries.count(idx);
  return static_cast<double>(hit) / static_cast<double>(truth.entries.size());
}

bool same_support(const SparseTensor& a, const SparseTensor& b) {
  if (a.entries.size() != b.entries.size()) return false;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  for (; ia != a.entries.end(); ++ia, ++ib)
    if (ia->first != ib->first) return false;
  return true;
}

}  // namespace intht
