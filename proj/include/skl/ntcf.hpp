#pragma once

#include <array>
#include <optional>
#include <vector>

#include "skl/bits.hpp"
#include "skl/branch.hpp"
#include "skl/rng.hpp"

namespace skl {

// Claw-free generator interface with a toy instantiation: a keyed public
// Feistel permutation P over {0,1}^w. Injective mode maps x to P(x);
// two-to-one mode maps x to P(min(x, x^delta)). The instantiation is
// functionally faithful (generation, inversion, state generation, GoodSet
// density) and provides no computational security: delta is derived from
// the public seed, so anyone can compute claws. Experiment harnesses that
// use it must say so in their output.
enum class NtcfMode : int { injective = 1, two_to_one = 2 };

struct NtcfPp {
  int w = 0;
  NtcfMode mode = NtcfMode::injective;
  std::array<uint8_t, 16> seed{};

  std::vector<uint8_t> serialize() const;
  static NtcfPp deserialize(const std::vector<uint8_t>& in, size_t& pos);
};

struct NtcfTd {
  NtcfPp pp;
  BitVec delta;  // empty in injective mode, nonzero otherwise

  std::vector<uint8_t> serialize() const;
  static NtcfTd deserialize(const std::vector<uint8_t>& in, size_t& pos);
};

std::pair<NtcfPp, NtcfTd> ntcf_func_gen(int w, NtcfMode mode, SplitRng& rng);

// the public permutation and its inverse
BitVec ntcf_perm(const NtcfPp& pp, const BitVec& x);
BitVec ntcf_perm_inv(const NtcfPp& pp, const BitVec& y);

// evaluates f_pp; public (delta is re-derived from the seed in 2-to-1 mode)
BitVec ntcf_eval(const NtcfPp& pp, const BitVec& x);

bool ntcf_chk(const NtcfPp& pp, const BitVec& x, const BitVec& y);

// The accept set {x : Chk(pp, x, y)} computed from pp alone (empty when y
// is outside the image; one entry in injective mode, the ordered claw in
// two-to-one mode). That this needs no trapdoor is exactly the toy
// instantiation's designed insecurity.
std::vector<BitVec> ntcf_preimages(const NtcfPp& pp, const BitVec& y);

// single preimage (injective), ordered claw (two-to-one), or nullopt when
// y is outside the image
std::optional<std::vector<BitVec>> ntcf_invert(const NtcfTd& td, const BitVec& y);

bool ntcf_good_set(const NtcfTd& td, const BitVec& y, const BitVec& d);

// y plus the state |x> (injective) or (|x0> + |x1>)/sqrt(2) (two-to-one),
// with the preimage register named "x"
std::pair<BitVec, BranchState> ntcf_state_gen(const NtcfPp& pp, const NtcfTd& god,
                                              SplitRng& rng);

}  // namespace skl
