#pragma once

// Binary index codes.  A code table maps coordinate indices [0, p) to
// codewords of l physical bits; sketch rows are masked by code-table columns
// so that the bit pattern of an exceeding bucket spells out the index of the
// heavy entry it holds.  Plain binary writes the index MSB-first; the
// repetition scheme repeats each logical bit r times consecutively and decodes
// by per-group majority (ties fail closed).

#include <cstdint>
#include <optional>
#include <vector>

namespace intht {

enum class CodeScheme { plain_binary, repetition };

struct IndexCodeTable {
  uint32_t p = 0;
  uint32_t logical_bits = 0;  // ceil(log2 p), at least 1
  uint32_t rep = 1;           // copies per logical bit (1 for plain binary)
  uint32_t l = 0;             // physical codeword length = rep * logical_bits
  CodeScheme scheme = CodeScheme::plain_binary;
  std::vector<uint8_t> bits;  // l x p row-major: bits[r*p + j] = bit r of index j

  // Mask over feature indices for physical bit row r.
  const uint8_t* mask(uint32_t r) const { return bits.data() + static_cast<size_t>(r) * p; }
};

IndexCodeTable build_code_table(uint32_t p, CodeScheme scheme, uint32_t rep = 3);

// Codeword of index i (length table.l), MSB-first logical order.
void encode(const IndexCodeTable& table, uint32_t i, uint8_t* out);

// Decode one l-bit half back to an index.  Plain binary requires an exact
// match with some row (the reassembled value must be < p); repetition
// majority-decodes each logical bit and fails on a tie.
std::optional<uint32_t> decode_half(const IndexCodeTable& table, const uint8_t* bits);

// bits[r*b + q] = |S[r*b + q]| > delta/2, for a rows x b sketch array.
void binarify(const double* S, size_t rows, size_t b, double delta, uint8_t* bits);

}  // namespace intht
