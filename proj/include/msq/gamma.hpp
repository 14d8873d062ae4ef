#pragma once

#include <array>
#include <bit>
#include <cstdint>

#include "msq/bits.hpp"

namespace msq {

/*
 * Elias gamma, LSB-first: floor(log2 v) zero bits, the leading 1, then the
 * remaining low bits of v from least significant upward. Values in [1, 2^32).
 */
inline unsigned gamma_length(std::uint64_t v) { return 2 * (bit_width_of(v) - 1) + 1; }

inline void gamma_append(BitWriter& w, std::uint64_t v) {
  const unsigned z = bit_width_of(v) - 1;
  w.append(std::uint64_t{1} << z, z + 1);
  w.append(v & ((std::uint64_t{1} << z) - 1), z);
}

// Bit-at-a-time decoder; reference for tests.
inline std::uint64_t gamma_decode_reference(const std::uint64_t* words, std::uint64_t& pos) {
  auto bit = [&](std::uint64_t p) { return (words[p >> 6] >> (p & 63)) & 1; };
  unsigned z = 0;
  while (!bit(pos)) {
    ++z;
    ++pos;
  }
  ++pos;
  std::uint64_t v = 0;
  for (unsigned i = 0; i < z; ++i, ++pos) v |= bit(pos) << i;
  return (std::uint64_t{1} << z) | v;
}

inline std::uint64_t gamma_decode_one(const std::uint64_t* words, std::uint64_t& pos) {
  const std::uint64_t window = read_bits64(words, pos);
  const unsigned z = static_cast<unsigned>(std::countr_zero(window));  // < 32 for valid input
  const std::uint64_t low = read_bits(words, pos + z + 1, z);
  pos += 2 * z + 1;
  return (std::uint64_t{1} << z) | low;
}

// For each byte: how many gamma codes it holds completely, their values and
// the number of bits they span.
struct GammaByteEntry {
  std::uint8_t count = 0;
  std::uint8_t consumed = 0;
  std::array<std::uint8_t, 8> values{};
};

constexpr std::array<GammaByteEntry, 256> make_gamma_table() {
  std::array<GammaByteEntry, 256> t{};
  for (unsigned b = 0; b < 256; ++b) {
    unsigned pos = 0;
    auto& e = t[b];
    while (pos < 8) {
      unsigned z = 0;
      while (pos + z < 8 && !((b >> (pos + z)) & 1)) ++z;
      if (pos + 2 * z + 1 > 8) break;
      const unsigned low = (b >> (pos + z + 1)) & ((1u << z) - 1);
      e.values[e.count++] = static_cast<std::uint8_t>((1u << z) | low);
      pos += 2 * z + 1;
    }
    e.consumed = static_cast<std::uint8_t>(pos);
  }
  return t;
}

inline constexpr std::array<GammaByteEntry, 256> kGammaTable = make_gamma_table();

/*
 * Decodes n consecutive codes starting at bit pos, calling sink(value) for
 * each. Whole bytes of short codes go through the table; anything else falls
 * back to one count-trailing-zeros decode. Returns the end position.
 */
template <class Sink>
std::uint64_t gamma_decode_n(const std::uint64_t* words, std::uint64_t pos, std::uint64_t n,
                             Sink&& sink) {
  while (n > 0) {
    const auto& e = kGammaTable[read_bits64(words, pos) & 0xff];
    if (e.count > 0 && e.count <= n) {
      for (unsigned i = 0; i < e.count; ++i) sink(std::uint64_t{e.values[i]});
      pos += e.consumed;
      n -= e.count;
    } else {
      sink(gamma_decode_one(words, pos));
      --n;
    }
  }
  return pos;
}

}  // namespace msq
