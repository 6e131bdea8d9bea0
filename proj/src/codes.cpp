#include "intht/codes.hpp"

#include <cmath>
#include <stdexcept>

namespace intht {

namespace {

uint32_t ceil_log2(uint32_t p) {
  uint32_t bits = 1;
  while ((uint64_t(1) << bits) < p) ++bits;
  return bits;
}

}  // namespace

IndexCodeTable build_code_table(uint32_t p, CodeScheme scheme, uint32_t rep) {
  if (p == 0) throw std::invalid_argument("code table: p must be positive");
  // Even repetition factors are allowed here (ties fail closed in decode_half);
  // run configurations reject them separately.
  if (scheme == CodeScheme::repetition && rep < 1)
    throw std::invalid_argument("code table: repetition factor must be >= 1");
  IndexCodeTable t;
  t.p = p;
  t.logical_bits = ceil_log2(p);
  t.rep = scheme == CodeScheme::repetition ? rep : 1;
  t.l = t.rep * t.logical_bits;
  t.scheme = scheme;
  t.bits.assign(static_cast<size_t>(t.l) * p, 0);
  for (uint32_t j = 0; j < p; ++j) {
    for (uint32_t r = 0; r < t.l; ++r) {
      uint32_t logical = r / t.rep;  // consecutive copies of each logical bit
      uint32_t shift = t.logical_bits - 1 - logical;
      t.bits[static_cast<size_t>(r) * p + j] = (j >> shift) & 1u;
    }
  }
  return t;
}

void encode(const IndexCodeTable& table, uint32_t i, uint8_t* out) {
  if (i >= table.p) throw std::out_of_range("encode: index out of range");
  for (uint32_t r = 0; r < table.l; ++r)
    out[r] = table.bits[static_cast<size_t>(r) * table.p + i];
}

std::optional<uint32_t> decode_half(const IndexCodeTable& table, const uint8_t* bits) {
  uint32_t value = 0;
  for (uint32_t g = 0; g < table.logical_bits; ++g) {
    uint32_t ones = 0;
    for (uint32_t c = 0; c < table.rep; ++c) ones += bits[g * table.rep + c] ? 1u : 0u;
    uint32_t zeros = table.rep - ones;
    if (ones == zeros) return std::nullopt;  // majority tie (even rep only)
    value = (value << 1) | (ones > zeros ? 1u : 0u);
  }
  if (value >= table.p) return std::nullopt;
  return value;
}

void binarify(const double* S, size_t rows, size_t b, double delta, uint8_t* bits) {
  const double thr = delta / 2.0;
  for (size_t i = 0; i < rows * b; ++i) bits[i] = std::fabs(S[i]) > thr ? 1 : 0;
}

}  // namespace intht
