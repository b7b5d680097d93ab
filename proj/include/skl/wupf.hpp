#pragma once

#include <array>
#include <functional>
#include <vector>

#include "skl/bits.hpp"
#include "skl/rng.hpp"

namespace skl {

// Two-key equivocal PRF: both keys share a PRF seed and evaluate
// identically everywhere except the hidden differing point s*, where key_b
// returns v_b with v_1 = 1 - v_0. Equality and different-values-on-target
// hold exactly; differing-point hiding is not provided by this toy (s*
// sits in the key in the clear) and nothing here relies on it.
struct TeprfKey {
  std::array<uint8_t, 8> seed{};
  BitVec s_star;
  int v = 0;

  bool operator==(const TeprfKey& o) const {
    return seed == o.seed && s_star == o.s_star && v == o.v;
  }
};

std::pair<TeprfKey, TeprfKey> teprf_kg(size_t ell, const BitVec& s_star,
                                       SplitRng& rng);
int teprf_eval(const TeprfKey& key, const BitVec& s);

// Watermarkable unpredictable function: w TEPRF pairs plus equivocating
// bits c; a mark x selects key_{j, x[j] ^ c[j]} per block.
struct WupfMsk {
  size_t w = 0, ell = 0;
  BitVec c;
  std::vector<std::array<TeprfKey, 2>> keys;  // per block j
};

struct WupfXk {
  size_t w = 0, ell = 0;
  BitVec c;
  std::vector<BitVec> s_stars;
  std::vector<std::array<TeprfKey, 2>> keys;
};

struct WupfKey {
  std::vector<TeprfKey> keys;  // w entries
};

std::pair<WupfMsk, WupfXk> wupf_kg(size_t w, size_t ell, SplitRng& rng);

WupfKey wupf_mark(const WupfMsk& msk, const BitVec& x);  // deterministic

BitVec wupf_eval_msk(const WupfMsk& msk, const BitVec& s);
BitVec wupf_eval_key(const WupfKey& key, size_t ell, const BitVec& s);

// Equivocation simulator: fresh TEPRF pairs plus a random selector; the
// result is distributed like a marked key before any mark exists.
WupfKey wupf_sim(size_t w, size_t ell, SplitRng& rng);

// fixed-width serialization of a marked key
size_t wupf_key_bits(size_t w, size_t ell);
BitVec wupf_key_to_bits(const WupfKey& key, size_t ell);
WupfKey wupf_key_from_bits(size_t w, size_t ell, const BitVec& bits);

// Parallel mark extractor: queries the predictor once on the concatenated
// differing points of every instance and decodes marks blockwise.
using WupfPredictor =
    std::function<std::vector<BitVec>(const std::vector<BitVec>&)>;

std::vector<BitVec> wupf_parallel_extract(const std::vector<WupfXk>& xks,
                                          const WupfPredictor& predictor);

// Plain-UPF add-on: an independent PRF whose output is appended so the
// combined function is unpredictable as an ordinary UPF.
struct WupfPlainKey {
  WupfKey key;
  std::array<uint8_t, 8> aux{};
};
BitVec wupf_plain_eval(const WupfPlainKey& key, size_t w, size_t ell,
                       const BitVec& s);

}  // namespace skl
