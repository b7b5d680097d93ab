#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <string_view>
#include <vector>

namespace skl {

// Seedable, splittable random source. Every stream is identified by a
// 32-byte key; draws run a xoshiro256** generator whose state is derived
// from the key, and child streams are derived from the parent key plus a
// label, independent of how many values the parent has already drawn.
class SplitRng {
 public:
  explicit SplitRng(uint64_t seed);
  explicit SplitRng(const std::array<uint8_t, 32>& key);

  uint64_t next_u64();
  // Uniform in [0, bound) by rejection. bound > 0.
  uint64_t below(uint64_t bound);
  // Uniform double in [0, 1) with 53 random bits.
  double next_double();
  bool next_bit() { return next_u64() & 1; }
  void fill_bytes(uint8_t* out, size_t len);

  SplitRng split(std::string_view label) const;
  SplitRng split(std::string_view label, uint64_t index) const;

  const std::array<uint8_t, 32>& key() const { return key_; }

 private:
  void init_state();
  std::array<uint8_t, 32> key_{};
  std::array<uint64_t, 4> s_{};
};

// Keyed hash (BLAKE2b) used for stream derivation and as the PRF behind
// the toy primitives. Output length out_len <= 64.
void prf_hash(const uint8_t* key, size_t key_len, const uint8_t* msg,
              size_t msg_len, uint8_t* out, size_t out_len);

std::array<uint8_t, 32> prf_hash32(const uint8_t* key, size_t key_len,
                                   const uint8_t* msg, size_t msg_len);

}  // namespace skl
