#include "msq/hybrid.hpp"

#include <stdexcept>

namespace msq {

std::uint64_t fixed_block_bits(std::span<const std::uint64_t> block) {
  std::uint64_t m = 0;
  for (auto v : block) m = std::max(m, v);
  return block.size() * bit_width_of(m);
}

std::uint64_t gamma_block_bits(std::span<const std::uint64_t> block) {
  std::uint64_t bits = 0;
  for (auto v : block) bits += gamma_length(v);
  return bits;
}

HybridSequence HybridSequence::encode(std::span<const std::uint64_t> values, std::uint32_t block) {
  if (block == 0) throw std::invalid_argument("block size must be >= 1");
  HybridSequence h;
  h.b_ = block;
  h.length_ = values.size();

  BitWriter s;
  std::vector<std::uint64_t> sb;
  std::vector<bool> flags;
  std::vector<std::uint64_t> widths;
  for (std::uint64_t at = 0; at < values.size(); at += block) {
    const auto blk = values.subspan(at, std::min<std::uint64_t>(block, values.size() - at));
    std::uint64_t m = 0;
    for (auto v : blk) {
      if (v == 0) throw std::invalid_argument("hybrid sequence entries must be >= 1");
      if (v >> 32) throw std::invalid_argument("hybrid sequence entries must be < 2^32");
      m = std::max(m, v);
    }
    const std::uint64_t fixed = fixed_block_bits(blk);
    const std::uint64_t gamma = gamma_block_bits(blk);
    h.cost_.fixed_bits += fixed;
    h.cost_.gamma_bits += gamma;
    sb.push_back(s.size());
    if (fixed <= gamma) {
      const unsigned w = bit_width_of(m);
      flags.push_back(true);
      widths.push_back(w);
      for (auto v : blk) s.append(v, w);
    } else {
      flags.push_back(false);
      for (auto v : blk) gamma_append(s, v);
    }
  }
  h.s_bits_ = s.size();
  h.cost_.hybrid_bits = h.s_bits_;
  h.s_ = s.release();
  h.sb_ = PackedIntVector(sb);
  std::vector<std::uint64_t> fw((flags.size() + 63) / 64 + 1, 0);
  for (std::size_t k = 0; k < flags.size(); ++k)
    if (flags[k]) fw[k >> 6] |= std::uint64_t{1} << (k & 63);
  h.flag_ = RankBitVector(std::move(fw), flags.size());
  h.words_ = PackedIntVector(widths);
  return h;
}

std::uint64_t HybridSequence::at(std::uint64_t j) const {
  if (j >= length_) throw std::out_of_range("hybrid sequence index out of range");
  const std::uint64_t k = j / b_;
  const std::uint64_t off = j % b_;
  if (flag_[k]) {
    const unsigned w = width_of_block(k);
    return read_bits(s_.data(), sb_[k] + off * w, w);
  }
  std::uint64_t last = 0;
  gamma_decode_n(s_.data(), sb_[k], off + 1, [&](std::uint64_t v) { last = v; });
  return last;
}

std::vector<std::uint64_t> HybridSequence::to_vector() const {
  std::vector<std::uint64_t> out;
  out.reserve(length_);
  decode(0, length_, [&](std::uint64_t v) { out.push_back(v); });
  return out;
}

void HybridSequence::write(ByteWriter& out) const {
  out.u32(b_);
  out.u64(length_);
  out.u64(cost_.fixed_bits);
  out.u64(cost_.gamma_bits);
  out.bit_words(s_, s_bits_);
  sb_.write(out);
  flag_.write(out);
  words_.write(out);
}

HybridSequence HybridSequence::read(ByteReader& in) {
  HybridSequence h;
  h.b_ = in.u32();
  if (h.b_ == 0) throw FormatError("block size must be >= 1");
  h.length_ = in.u64();
  h.cost_.fixed_bits = in.u64();
  h.cost_.gamma_bits = in.u64();
  h.s_bits_ = in.u64();
  h.cost_.hybrid_bits = h.s_bits_;
  h.s_ = in.bit_words(h.s_bits_, 3);
  h.s_.resize((h.s_bits_ >> 6) + 3, 0);
  h.sb_ = PackedIntVector::read(in);
  h.flag_ = RankBitVector::read(in);
  h.words_ = PackedIntVector::read(in);
  const std::uint64_t blocks = (h.length_ + h.b_ - 1) / h.b_;
  if (h.sb_.size() != blocks || h.flag_.size() != blocks || h.words_.size() != h.flag_.ones())
    throw FormatError("hybrid sequence directory mismatch");
  for (std::uint64_t k = 0; k < blocks; ++k)
    if (h.sb_[k] > h.s_bits_) throw FormatError("hybrid block offset out of range");
  return h;
}

}  // namespace msq
