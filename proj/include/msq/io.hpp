#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace msq {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Little-endian byte sink.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void i64(std::int64_t v) { put(static_cast<std::uint64_t>(v), 8); }
  void str(std::string_view s) {
    u64(s.size());
    buf_.insert(buf_.end(), s.begin(), s.end());
  }
  void bytes(const std::uint8_t* p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }
  // Length-prefixed word array, trimmed to the bytes that hold `bits` bits.
  void bit_words(const std::vector<std::uint64_t>& words, std::uint64_t bits);

  const std::vector<std::uint8_t>& data() const { return buf_; }
  std::vector<std::uint8_t> release() { return std::move(buf_); }
  std::size_t size() const { return buf_.size(); }

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(const std::uint8_t* p, std::size_t n) : p_(p), end_(p + n) {}
  explicit ByteReader(const std::vector<std::uint8_t>& v) : ByteReader(v.data(), v.size()) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(get(8)); }
  std::string str() {
    const std::uint64_t n = u64();
    need(n);
    std::string s(reinterpret_cast<const char*>(p_), n);
    p_ += n;
    return s;
  }
  const std::uint8_t* take(std::size_t n) {
    need(n);
    const auto* at = p_;
    p_ += n;
    return at;
  }
  // Inverse of ByteWriter::bit_words; pads with `pad_words` zero words.
  std::vector<std::uint64_t> bit_words(std::uint64_t bits, std::size_t pad_words);

  // Guards element counts read from untrusted input.
  std::uint64_t count(std::uint64_t min_bytes_each = 1) {
    const std::uint64_t n = u64();
    if (min_bytes_each && n > remaining() / min_bytes_each) throw FormatError("truncated input");
    return n;
  }

  std::size_t remaining() const { return static_cast<std::size_t>(end_ - p_); }
  bool done() const { return p_ == end_; }

 private:
  void need(std::uint64_t n) const {
    if (n > remaining()) throw FormatError("truncated input");
  }
  std::uint64_t get(int n) {
    need(n);
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= std::uint64_t{p_[i]} << (8 * i);
    p_ += n;
    return v;
  }
  const std::uint8_t* p_;
  const std::uint8_t* end_;
};

inline void ByteWriter::bit_words(const std::vector<std::uint64_t>& words, std::uint64_t bits) {
  const std::uint64_t nbytes = (bits + 7) / 8;
  u64(bits);
  for (std::uint64_t i = 0; i < nbytes; ++i)
    buf_.push_back(static_cast<std::uint8_t>(words[i / 8] >> (8 * (i % 8))));
}

inline std::vector<std::uint64_t> ByteReader::bit_words(std::uint64_t bits, std::size_t pad_words) {
  if (bits / 8 > remaining()) throw FormatError("truncated input");
  const std::uint64_t nbytes = (bits + 7) / 8;
  const std::uint8_t* src = take(nbytes);
  std::vector<std::uint64_t> words((bits + 63) / 64 + pad_words, 0);
  for (std::uint64_t i = 0; i < nbytes; ++i) words[i / 8] |= std::uint64_t{src[i]} << (8 * (i % 8));
  if (bits % 8) {
    const std::uint64_t last = bits - 1;
    // Bits past the end must be zero so rank and equality stay exact.
    const std::uint64_t mask = ~std::uint64_t{0} << ((last & 63) + 1);
    if ((last & 63) != 63 && (words[last >> 6] & mask)) throw FormatError("nonzero padding bits");
  }
  return words;
}

}  // namespace msq
