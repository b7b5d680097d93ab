#include "skl/rng.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>

namespace skl {

void prf_hash(const uint8_t* key, size_t key_len, const uint8_t* msg,
              size_t msg_len, uint8_t* out, size_t out_len) {
  if (crypto_generichash(out, out_len, msg, msg_len, key, key_len) != 0)
    throw std::runtime_error("prf_hash failed");
}

std::array<uint8_t, 32> prf_hash32(const uint8_t* key, size_t key_len,
                                   const uint8_t* msg, size_t msg_len) {
  std::array<uint8_t, 32> out;
  prf_hash(key, key_len, msg, msg_len, out.data(), out.size());
  return out;
}

SplitRng::SplitRng(uint64_t seed) {
  uint8_t buf[8];
  for (int i = 0; i < 8; i++) buf[i] = uint8_t(seed >> (8 * i));
  key_ = prf_hash32(nullptr, 0, buf, sizeof buf);
  init_state();
}

SplitRng::SplitRng(const std::array<uint8_t, 32>& key) : key_(key) {
  init_state();
}

void SplitRng::init_state() {
  std::array<uint8_t, 64> st;
  prf_hash(key_.data(), key_.size(),
           reinterpret_cast<const uint8_t*>("xoshiro-init"), 12, st.data(),
           st.size());
  for (int i = 0; i < 4; i++) {
    uint64_t v = 0;
    for (int j = 0; j < 8; j++) v |= uint64_t(st[8 * i + j]) << (8 * j);
    s_[i] = v;
  }
  // xoshiro must not start at the all-zero state
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

static inline uint64_t rotl64(uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

uint64_t SplitRng::next_u64() {
  const uint64_t result = rotl64(s_[1] * 5, 7) * 9;
  const uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl64(s_[3], 45);
  return result;
}

uint64_t SplitRng::below(uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("below: bound must be > 0");
  if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % bound;
}

double SplitRng::next_double() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

void SplitRng::fill_bytes(uint8_t* out, size_t len) {
  size_t i = 0;
  while (i < len) {
    uint64_t v = next_u64();
    for (int j = 0; j < 8 && i < len; j++, i++) out[i] = uint8_t(v >> (8 * j));
  }
}

SplitRng SplitRng::split(std::string_view label) const {
  std::vector<uint8_t> msg(label.begin(), label.end());
  msg.push_back(0x00);
  return SplitRng(prf_hash32(key_.data(), key_.size(), msg.data(), msg.size()));
}

SplitRng SplitRng::split(std::string_view label, uint64_t index) const {
  std::vector<uint8_t> msg(label.begin(), label.end());
  msg.push_back(0x01);
  for (int i = 0; i < 8; i++) msg.push_back(uint8_t(index >> (8 * i)));
  return SplitRng(prf_hash32(key_.data(), key_.size(), msg.data(), msg.size()));
}

}  // namespace skl
