#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "skl/rng.hpp"

namespace skl {

// Packed GF(2) vector. Bits are packed LSB-first within bytes and the
// length is carried explicitly; pad bits above `len` are kept zero.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(size_t len) : len_(len), words_((len + 63) / 64, 0) {}
  static BitVec from_string(const std::string& s);  // e.g. "0110"
  static BitVec random(size_t len, SplitRng& rng);
  static BitVec from_u64(uint64_t v, size_t len);

  size_t size() const { return len_; }
  bool empty() const { return len_ == 0; }

  bool get(size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1;
  }
  void set(size_t i, bool v) {
    uint64_t m = uint64_t(1) << (i & 63);
    if (v)
      words_[i >> 6] |= m;
    else
      words_[i >> 6] &= ~m;
  }

  BitVec operator^(const BitVec& o) const;
  BitVec& operator^=(const BitVec& o);
  bool operator==(const BitVec& o) const;
  bool operator!=(const BitVec& o) const { return !(*this == o); }
  bool operator<(const BitVec& o) const;  // lexicographic on bit order

  bool is_zero() const;
  size_t weight() const;

  // Concatenation and slicing; slice(i, n) takes n bits starting at i.
  BitVec concat(const BitVec& o) const;
  BitVec slice(size_t start, size_t n) const;

  uint64_t to_u64() const;  // requires len <= 64
  std::string to_string() const;

  std::vector<uint8_t> to_bytes() const;  // ceil(len/8) bytes, LSB-first
  static BitVec from_bytes(const std::vector<uint8_t>& bytes, size_t len);

  const std::vector<uint64_t>& words() const { return words_; }

 private:
  void clear_pad();
  size_t len_ = 0;
  std::vector<uint64_t> words_;
};

// <a, b> over GF(2); lengths must match.
int gf2_inner(const BitVec& a, const BitVec& b);

// A table of 2w strings alpha_j^b, each of length u.
struct BlockTable {
  size_t w = 0;
  size_t u = 0;
  std::vector<BitVec> entries;  // entries[2*j + b] = alpha_{j+1}^b

  const BitVec& alpha(size_t j, int b) const { return entries[2 * j + b]; }
  BitVec& alpha(size_t j, int b) { return entries[2 * j + b]; }
  static BlockTable make(size_t w, size_t u);
};

// alpha_1^{x[1]} || ... || alpha_w^{x[w]}; requires x.size() == t.w.
BitVec block_recompose(const BlockTable& t, const BitVec& x);

// Uniform sample from {v : <v, delta> = theta}. delta = 0 requires
// theta = 0 (the coset is empty otherwise) and yields a uniform string.
BitVec coset_sample(const BitVec& delta, int theta, SplitRng& rng);

}  // namespace skl
