#include "skl/bits.hpp"

#include <bit>
#include <stdexcept>

namespace skl {

void BitVec::clear_pad() {
  if (len_ & 63) words_.back() &= (uint64_t(1) << (len_ & 63)) - 1;
}

BitVec BitVec::from_string(const std::string& s) {
  BitVec v(s.size());
  for (size_t i = 0; i < s.size(); i++) {
    if (s[i] == '1')
      v.set(i, true);
    else if (s[i] != '0')
      throw std::invalid_argument("BitVec::from_string: bad character");
  }
  return v;
}

BitVec BitVec::random(size_t len, SplitRng& rng) {
  BitVec v(len);
  for (auto& w : v.words_) w = rng.next_u64();
  v.clear_pad();
  return v;
}

BitVec BitVec::from_u64(uint64_t x, size_t len) {
  if (len > 64) throw std::invalid_argument("from_u64: len > 64");
  BitVec v(len);
  if (len) {
    v.words_[0] = len == 64 ? x : (x & ((uint64_t(1) << len) - 1));
  }
  return v;
}

BitVec BitVec::operator^(const BitVec& o) const {
  BitVec r = *this;
  r ^= o;
  return r;
}

BitVec& BitVec::operator^=(const BitVec& o) {
  if (len_ != o.len_) throw std::invalid_argument("BitVec xor: length mismatch");
  for (size_t i = 0; i < words_.size(); i++) words_[i] ^= o.words_[i];
  return *this;
}

bool BitVec::operator==(const BitVec& o) const {
  return len_ == o.len_ && words_ == o.words_;
}

bool BitVec::operator<(const BitVec& o) const {
  if (len_ != o.len_) return len_ < o.len_;
  for (size_t i = 0; i < len_; i++) {
    bool a = get(i), b = o.get(i);
    if (a != b) return b;
  }
  return false;
}

bool BitVec::is_zero() const {
  for (auto w : words_)
    if (w) return false;
  return true;
}

size_t BitVec::weight() const {
  size_t c = 0;
  for (auto w : words_) c += size_t(std::popcount(w));
  return c;
}

BitVec BitVec::concat(const BitVec& o) const {
  BitVec r(len_ + o.len_);
  for (size_t i = 0; i < len_; i++) r.set(i, get(i));
  for (size_t i = 0; i < o.len_; i++) r.set(len_ + i, o.get(i));
  return r;
}

BitVec BitVec::slice(size_t start, size_t n) const {
  if (start + n > len_) throw std::out_of_range("BitVec::slice");
  BitVec r(n);
  for (size_t i = 0; i < n; i++) r.set(i, get(start + i));
  return r;
}

uint64_t BitVec::to_u64() const {
  if (len_ > 64) throw std::invalid_argument("to_u64: len > 64");
  return words_.empty() ? 0 : words_[0];
}

std::string BitVec::to_string() const {
  std::string s(len_, '0');
  for (size_t i = 0; i < len_; i++)
    if (get(i)) s[i] = '1';
  return s;
}

std::vector<uint8_t> BitVec::to_bytes() const {
  std::vector<uint8_t> out((len_ + 7) / 8, 0);
  for (size_t i = 0; i < out.size(); i++) {
    size_t word = i >> 3, shift = (i & 7) * 8;
    if (word < words_.size()) out[i] = uint8_t(words_[word] >> shift);
  }
  return out;
}

BitVec BitVec::from_bytes(const std::vector<uint8_t>& bytes, size_t len) {
  if (bytes.size() != (len + 7) / 8)
    throw std::invalid_argument("BitVec::from_bytes: size mismatch");
  BitVec v(len);
  for (size_t i = 0; i < bytes.size(); i++)
    v.words_[i >> 3] |= uint64_t(bytes[i]) << ((i & 7) * 8);
  v.clear_pad();
  return v;
}

int gf2_inner(const BitVec& a, const BitVec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("gf2_inner: length mismatch");
  uint64_t acc = 0;
  const auto& wa = a.words();
  const auto& wb = b.words();
  for (size_t i = 0; i < wa.size(); i++) acc ^= wa[i] & wb[i];
  return std::popcount(acc) & 1;
}

BlockTable BlockTable::make(size_t w, size_t u) {
  BlockTable t;
  t.w = w;
  t.u = u;
  t.entries.assign(2 * w, BitVec(u));
  return t;
}

BitVec block_recompose(const BlockTable& t, const BitVec& x) {
  if (x.size() != t.w)
    throw std::invalid_argument("block_recompose: selector length mismatch");
  BitVec out(t.w * t.u);
  for (size_t j = 0; j < t.w; j++) {
    const BitVec& a = t.alpha(j, x.get(j) ? 1 : 0);
    for (size_t i = 0; i < t.u; i++) out.set(j * t.u + i, a.get(i));
  }
  return out;
}

BitVec coset_sample(const BitVec& delta, int theta, SplitRng& rng) {
  const size_t L = delta.size();
  if (delta.is_zero()) {
    if (theta != 0)
      throw std::invalid_argument("coset_sample: empty coset (delta=0, theta=1)");
    return BitVec::random(L, rng);
  }
  size_t pivot = 0;
  while (!delta.get(pivot)) pivot++;
  BitVec v = BitVec::random(L, rng);
  v.set(pivot, false);
  // solve the pivot position so that <v, delta> = theta
  int rest = gf2_inner(v, delta);
  v.set(pivot, (rest ^ theta) != 0);
  return v;
}

}  // namespace skl
