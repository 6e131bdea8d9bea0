#include "doctest.h"

#include <cstdint>
#include <vector>

#include "intht/codes.hpp"

using namespace intht;

TEST_CASE("plain binary codewords round-trip for every index") {
  for (uint32_t p : {2u, 5u, 8u, 16u, 33u}) {
    IndexCodeTable t = build_code_table(p, CodeScheme::plain_binary);
    CHECK(t.rep == 1);
    CHECK(t.l == t.logical_bits);
    CHECK((uint64_t(1) << t.logical_bits) >= p);
    std::vector<uint8_t> w(t.l);
    for (uint32_t i = 0; i < p; ++i) {
      encode(t, i, w.data());
      auto back = decode_half(t, w.data());
      REQUIRE(back.has_value());
      CHECK(*back == i);
    }
  }
}

TEST_CASE("codewords are MSB-first and match the mask rows") {
  IndexCodeTable t = build_code_table(8, CodeScheme::plain_binary);
  REQUIRE(t.l == 3);
  std::vector<uint8_t> w(3);
  encode(t, 3, w.data());  // 3 = 011
  CHECK(w[0] == 0);
  CHECK(w[1] == 1);
  CHECK(w[2] == 1);
  for (uint32_t r = 0; r < t.l; ++r)
    for (uint32_t j = 0; j < t.p; ++j) CHECK(t.mask(r)[j] == ((j >> (t.l - 1 - r)) & 1u));
}

TEST_CASE("decoding an out-of-range pattern fails") {
  IndexCodeTable t = build_code_table(5, CodeScheme::plain_binary);  // l = 3, indices 0..4
  uint8_t w[3] = {1, 1, 1};                                          // value 7
  CHECK_FALSE(decode_half(t, w).has_value());
  w[2] = 0;  // value 6
  CHECK_FALSE(decode_half(t, w).has_value());
}

TEST_CASE("plain binary has no error tolerance") {
  IndexCodeTable t = build_code_table(16, CodeScheme::plain_binary);
  std::vector<uint8_t> w(t.l);
  for (uint32_t i = 0; i < t.p; ++i)
    for (uint32_t r = 0; r < t.l; ++r) {
      encode(t, i, w.data());
      w[r] ^= 1;
      auto back = decode_half(t, w.data());
      // a flipped bit either leaves the range or lands on a different index
      CHECK((!back.has_value() || *back != i));
    }
}

TEST_CASE("repetition-3 code corrects any single physical bit flip") {
  IndexCodeTable t = build_code_table(16, CodeScheme::repetition, 3);
  CHECK(t.rep == 3);
  CHECK(t.l == 3 * t.logical_bits);
  std::vector<uint8_t> w(t.l);
  for (uint32_t i = 0; i < t.p; ++i)
    for (uint32_t r = 0; r < t.l; ++r) {
      encode(t, i, w.data());
      w[r] ^= 1;
      auto back = decode_half(t, w.data());
      REQUIRE(back.has_value());
      CHECK(*back == i);
    }
}

TEST_CASE("repetition groups are consecutive copies of each logical bit") {
  IndexCodeTable t = build_code_table(8, CodeScheme::repetition, 3);
  std::vector<uint8_t> w(t.l);
  encode(t, 5, w.data());  // 5 = 101
  const uint8_t want[9] = {1, 1, 1, 0, 0, 0, 1, 1, 1};
  for (uint32_t r = 0; r < 9; ++r) CHECK(w[r] == want[r]);
}

TEST_CASE("even repetition ties fail closed") {
  IndexCodeTable t = build_code_table(4, CodeScheme::repetition, 2);
  std::vector<uint8_t> w(t.l);
  encode(t, 2, w.data());  // 2 = 10 -> 1100
  CHECK(decode_half(t, w.data()).has_value());
  w[0] ^= 1;  // group becomes {0,1}: tie
  CHECK_FALSE(decode_half(t, w.data()).has_value());
}

TEST_CASE("table builder rejects degenerate parameters") {
  CHECK_THROWS(build_code_table(0, CodeScheme::plain_binary));
  CHECK_THROWS(build_code_table(8, CodeScheme::repetition, 0));
}

TEST_CASE("binarify thresholds strictly above delta/2") {
  const double S[6] = {0.5, 0.50001, -0.6, -0.5, 0.0, 100.0};
  uint8_t bits[6];
  binarify(S, 2, 3, 1.0, bits);
  CHECK(bits[0] == 0);  // |0.5| is not > 0.5
  CHECK(bits[1] == 1);
  CHECK(bits[2] == 1);
  CHECK(bits[3] == 0);
  CHECK(bits[4] == 0);
  CHECK(bits[5] == 1);
}
