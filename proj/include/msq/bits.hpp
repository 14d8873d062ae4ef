#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

#include "msq/io.hpp"

namespace msq {

// Bit position p lives in words[p / 64] at bit p % 64 (LSB first).
inline std::uint64_t read_bits64(const std::uint64_t* words, std::uint64_t pos) {
  const std::uint64_t w = pos >> 6;
  const unsigned off = pos & 63;
  std::uint64_t v = words[w] >> off;
  if (off) v |= words[w + 1] << (64 - off);
  return v;
}

inline std::uint64_t read_bits(const std::uint64_t* words, std::uint64_t pos, unsigned width) {
  if (width == 0) return 0;
  const std::uint64_t v = read_bits64(words, pos);
  return width == 64 ? v : v & ((std::uint64_t{1} << width) - 1);
}

inline unsigned bit_width_of(std::uint64_t v) { return static_cast<unsigned>(std::bit_width(v)); }

// Append-only bit stream. Always keeps two zero words past the end so
// readers may fetch a 128-bit window without bounds checks.
class BitWriter {
 public:
  void push(bool bit) { append(bit ? 1 : 0, 1); }

  void append(std::uint64_t value, unsigned width) {
    if (width == 0) return;
    const std::uint64_t w = size_ >> 6;
    const unsigned off = size_ & 63;
    if (words_.size() < w + 3) words_.resize(w + 3, 0);
    words_[w] |= value << off;
    if (off && off + width > 64) words_[w + 1] |= value >> (64 - off);
    size_ += width;
  }

  std::uint64_t size() const { return size_; }

  std::vector<std::uint64_t> release() {
    words_.resize((size_ >> 6) + 3, 0);
    return std::move(words_);
  }

 private:
  std::vector<std::uint64_t> words_;
  std::uint64_t size_ = 0;
};

// Fixed-width packed array of unsigned integers.
class PackedIntVector {
 public:
  PackedIntVector() = default;
  // Width is the smallest that fits max(values) (at least 1).
  explicit PackedIntVector(std::span<const std::uint64_t> values);
  PackedIntVector(std::span<const std::uint64_t> values, unsigned width);

  std::uint64_t operator[](std::size_t i) const {
    assert(i < size_);
    return read_bits(words_.data(), i * width_, width_);
  }
  std::size_t size() const { return size_; }
  unsigned width() const { return width_; }
  std::uint64_t size_in_bits() const { return std::uint64_t{size_} * width_; }

  void write(ByteWriter& out) const;
  static PackedIntVector read(ByteReader& in);

  bool operator==(const PackedIntVector& o) const {
    return size_ == o.size_ && width_ == o.width_ && words_ == o.words_;
  }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
  unsigned width_ = 1;
};

/*
 * Plain bit vector with a two-level rank directory: one 64-bit absolute
 * count per 512-bit superblock and seven 9-bit relative counts for the
 * 64-bit words inside it. rank1 is a table lookup plus one popcount.
 */
class RankBitVector {
 public:
  RankBitVector() { build_directory(); }
  explicit RankBitVector(std::span<const bool> bits);
  RankBitVector(std::vector<std::uint64_t> words, std::uint64_t size);

  bool operator[](std::uint64_t j) const {
    assert(j < size_);
    return (words_[j >> 6] >> (j & 63)) & 1;
  }

  // Number of 1 bits at positions [0, j). Requires j <= size().
  std::uint64_t rank1(std::uint64_t j) const {
    assert(j <= size_);
    const std::uint64_t w = j >> 6;
    const std::uint64_t sb = w >> 3;
    const unsigned k = w & 7;
    std::uint64_t r = dir_[2 * sb];
    if (k) r += (dir_[2 * sb + 1] >> (9 * (k - 1))) & 0x1ff;
    const unsigned off = j & 63;
    if (off) r += static_cast<std::uint64_t>(std::popcount(words_[w] << (64 - off)));
    return r;
  }

  std::uint64_t size() const { return size_; }
  std::uint64_t ones() const { return rank1(size_); }
  std::uint64_t directory_bits() const { return dir_.size() * 64; }

  void write(ByteWriter& out) const;
  static RankBitVector read(ByteReader& in);

  bool operator==(const RankBitVector& o) const { return size_ == o.size_ && words_ == o.words_; }

 private:
  void build_directory();

  std::vector<std::uint64_t> words_;  // (size / 64) + 1 words; trailing bits zero
  std::vector<std::uint64_t> dir_;
  std::uint64_t size_ = 0;
};

}  // namespace msq
