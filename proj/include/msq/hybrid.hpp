#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "msq/bits.hpp"
#include "msq/gamma.hpp"

namespace msq {

struct CodingCost {
  std::uint64_t fixed_bits = 0;  // every block fixed-width
  std::uint64_t gamma_bits = 0;  // every block gamma
  std::uint64_t hybrid_bits = 0; // per-block minimum (= |S|)
};

// Bit cost of coding one block each way.
std::uint64_t fixed_block_bits(std::span<const std::uint64_t> block);
std::uint64_t gamma_block_bits(std::span<const std::uint64_t> block);

/*
 * Positive integers cut into blocks of b entries; each block is stored
 * fixed-width (flag 1, width in `words`) or gamma coded (flag 0), whichever
 * is shorter, ties to fixed. SB holds each block's start bit in S.
 */
class HybridSequence {
 public:
  HybridSequence() = default;
  static HybridSequence encode(std::span<const std::uint64_t> values, std::uint32_t block);

  std::uint64_t at(std::uint64_t j) const;

  // Calls sink(value) for entries [first, first + count).
  template <class Sink>
  void decode(std::uint64_t first, std::uint64_t count, Sink&& sink) const;

  std::vector<std::uint64_t> to_vector() const;

  std::uint64_t size() const { return length_; }
  std::uint32_t block_size() const { return b_; }
  std::uint64_t block_count() const { return flag_.size(); }
  bool block_is_fixed(std::uint64_t k) const { return flag_[k]; }
  std::uint64_t block_start(std::uint64_t k) const { return sb_[k]; }

  const CodingCost& cost() const { return cost_; }
  std::uint64_t s_bits() const { return s_bits_; }
  std::uint64_t sb_bits() const { return sb_.size_in_bits(); }
  std::uint64_t flag_bits() const { return flag_.size() + flag_.directory_bits(); }
  std::uint64_t words_bits() const { return words_.size_in_bits(); }
  std::uint64_t total_bits() const { return s_bits() + sb_bits() + flag_bits() + words_bits(); }

  void write(ByteWriter& out) const;
  static HybridSequence read(ByteReader& in);

  bool operator==(const HybridSequence& o) const {
    return b_ == o.b_ && length_ == o.length_ && s_bits_ == o.s_bits_ && s_ == o.s_ &&
           sb_ == o.sb_ && flag_ == o.flag_ && words_ == o.words_;
  }

 private:
  unsigned width_of_block(std::uint64_t k) const {
    return static_cast<unsigned>(words_[flag_.rank1(k)]);
  }

  std::uint32_t b_ = 16;
  std::uint64_t length_ = 0;
  std::vector<std::uint64_t> s_;  // padded with zero words
  std::uint64_t s_bits_ = 0;
  PackedIntVector sb_;
  RankBitVector flag_;
  PackedIntVector words_;
  CodingCost cost_;
};

template <class Sink>
void HybridSequence::decode(std::uint64_t first, std::uint64_t count, Sink&& sink) const {
  while (count > 0) {
    const std::uint64_t k = first / b_;
    const std::uint64_t off = first % b_;
    const std::uint64_t block_len = std::min<std::uint64_t>(b_, length_ - k * b_);
    const std::uint64_t take = std::min(count, block_len - off);
    if (flag_[k]) {
      const unsigned w = width_of_block(k);
      std::uint64_t pos = sb_[k] + off * w;
      for (std::uint64_t i = 0; i < take; ++i, pos += w) sink(read_bits(s_.data(), pos, w));
    } else {
      const std::uint64_t pos = gamma_decode_n(s_.data(), sb_[k], off, [](std::uint64_t) {});
      gamma_decode_n(s_.data(), pos, take, sink);
    }
    first += take;
    count -= take;
  }
}

}  // namespace msq
