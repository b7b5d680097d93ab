#pragma once

#include <optional>
#include <vector>

#include "skl/garble.hpp"
#include "skl/ot.hpp"

namespace skl {

// Dual-mode secure function evaluation: one OT instance per input bit plus
// a garbled circuit whose input labels ride the OTs bit by bit.

struct SfeCrs {
  std::vector<OtCrs> ots;
};

struct SfeTrapdoor {
  std::vector<OtTrapdoor> ots;
  int mode = 0;
};

struct SfeMsg1 {
  std::vector<ModQVector> per_wire;
};

struct SfeState {
  std::vector<OtReceiverState> per_wire;
};

struct SfeMsg2 {
  GarbledCircuit gc;
  // wire_msgs[j][t] carries bit t of the two labels of input wire j
  std::vector<std::vector<OtMsg2>> wire_msgs;
};

std::pair<SfeCrs, SfeTrapdoor> sfe_crs_gen(const LatticeParams& p, int mode,
                                           int w, SplitRng& rng);

std::pair<SfeMsg1, SfeState> sfe_receive1(const LatticeParams& p,
                                          const SfeCrs& crs, const BitVec& x,
                                          SplitRng& rng);

// Coherent receiver over a BranchState holding a w-bit register "x";
// appends register "st" (w blocks of n*k bits). Collapse of the far
// branch is a legitimate outcome and is reported.
struct SfeCoherentOut {
  SfeMsg1 msg1;
  BranchState state;
  bool collapsed = false;
};

SfeCoherentOut sfe_coherent_receive1(const LatticeParams& p, const SfeCrs& crs,
                                     const BranchState& s, const SfeTrapdoor& god,
                                     SplitRng& rng);

SfeMsg2 sfe_send(const LatticeParams& p, const SfeCrs& crs, const SfeMsg1& msg1,
                 const BoolCircuit& c, SplitRng& rng);

BitVec sfe_receive2(const LatticeParams& p, const SfeCrs& crs, const BitVec& x,
                    const SfeState& st, const SfeMsg2& msg2);

// per-wire, per-bit receiver-state table; nullopt when any inversion fails
std::optional<BlockTable> sfe_sta_rcv(const LatticeParams& p,
                                      const SfeTrapdoor& td, const SfeMsg1& msg1);

std::optional<BitVec> sfe_extract(const LatticeParams& p, const SfeTrapdoor& td,
                                  const SfeMsg1& msg1);

SfeMsg2 sfe_simulate(const LatticeParams& p, const SfeCrs& crs,
                     const SfeMsg1& msg1, const BitVec& y,
                     const BoolCircuit& topology, SplitRng& rng);

// fixed-width bit layout of an SFE state (w blocks of n*k bits each)
BitVec sfe_state_bits(const LatticeParams& p, const SfeState& st);
SfeState sfe_state_from_bits(const LatticeParams& p, int w, const BitVec& bits);

// block length u of one receiver state in bits
inline size_t sfe_block_bits(const LatticeParams& p) {
  return size_t(p.n) * size_t(p.k);
}

std::vector<uint8_t> sfe_msg1_serialize(const SfeMsg1& m);
SfeMsg1 sfe_msg1_deserialize(const std::vector<uint8_t>& in, size_t& pos);
std::vector<uint8_t> sfe_msg2_serialize(const SfeMsg2& m);
SfeMsg2 sfe_msg2_deserialize(const std::vector<uint8_t>& in, size_t& pos);

}  // namespace skl
