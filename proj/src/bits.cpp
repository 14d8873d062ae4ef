#include "msq/bits.hpp"

#include <algorithm>

namespace msq {

PackedIntVector::PackedIntVector(std::span<const std::uint64_t> values)
    : PackedIntVector(values,
                      std::max(1u, values.empty() ? 1u
                                                  : bit_width_of(*std::max_element(values.begin(),
                                                                                   values.end())))) {}

PackedIntVector::PackedIntVector(std::span<const std::uint64_t> values, unsigned width)
    : size_(values.size()), width_(width) {
  if (width == 0 || width > 64) throw std::invalid_argument("packed width must be in [1, 64]");
  BitWriter w;
  for (auto v : values) {
    if (width < 64 && (v >> width)) throw std::invalid_argument("value does not fit packed width");
    w.append(v, width);
  }
  words_ = w.release();
}

void PackedIntVector::write(ByteWriter& out) const {
  out.u64(size_);
  out.u8(static_cast<std::uint8_t>(width_));
  out.bit_words(words_, size_in_bits());
}

PackedIntVector PackedIntVector::read(ByteReader& in) {
  PackedIntVector v;
  v.size_ = in.u64();
  v.width_ = in.u8();
  if (v.width_ == 0 || v.width_ > 64) throw FormatError("bad packed width");
  const std::uint64_t bits = in.u64();
  if (v.size_ > bits || bits != v.size_ * v.width_) throw FormatError("packed array size mismatch");
  v.words_ = in.bit_words(bits, 3);
  v.words_.resize((bits >> 6) + 3, 0);
  return v;
}

RankBitVector::RankBitVector(std::span<const bool> bits) : size_(bits.size()) {
  words_.assign((size_ >> 6) + 1, 0);
  for (std::uint64_t i = 0; i < size_; ++i)
    if (bits[i]) words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  build_directory();
}

RankBitVector::RankBitVector(std::vector<std::uint64_t> words, std::uint64_t size)
    : words_(std::move(words)), size_(size) {
  words_.resize((size_ >> 6) + 1, 0);
  if (size_ & 63) words_[size_ >> 6] &= (std::uint64_t{1} << (size_ & 63)) - 1;
  else words_[size_ >> 6] = 0;
  build_directory();
}

void RankBitVector::build_directory() {
  if (words_.empty()) words_.assign((size_ >> 6) + 1, 0);
  const std::size_t supers = words_.size() / 8 + 1;
  dir_.assign(2 * supers, 0);
  std::uint64_t total = 0;
  for (std::size_t s = 0; s < supers; ++s) {
    dir_[2 * s] = total;
    std::uint64_t rel = 0;
    std::uint64_t packed = 0;
    for (std::size_t k = 0; k < 8; ++k) {
      const std::size_t w = s * 8 + k;
      if (k) packed |= rel << (9 * (k - 1));
      if (w < words_.size()) rel += static_cast<std::uint64_t>(std::popcount(words_[w]));
    }
    dir_[2 * s + 1] = packed;
    total += rel;
  }
}

void RankBitVector::write(ByteWriter& out) const { out.bit_words(words_, size_); }

RankBitVector RankBitVector::read(ByteReader& in) {
  const std::uint64_t bits = in.u64();
  return RankBitVector(in.bit_words(bits, 1), bits);
}

}  // namespace msq
