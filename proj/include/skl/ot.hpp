#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "skl/branch.hpp"
#include "skl/modq.hpp"
#include "skl/trapdoor.hpp"

namespace skl {

// Dual-mode oblivious transfer over LWE. mode 1 = extractable (v uniform),
// mode 2 = hiding (v planted as an LWE sample). The mode tag lives in the
// trapdoor only; the CRS is a bare (A, v) pair.

struct OtCrs {
  ModQMatrix A;  // n x m
  ModQVector v;  // length m
};

struct OtTrapdoor {
  GadgetTrapdoor gt;
  ModQVector v;
  int mode = 0;
};

struct OtReceiverState {
  ModQVector r;  // length n
};

std::pair<OtCrs, OtTrapdoor> ot_crs_gen(const LatticeParams& p, int mode,
                                        SplitRng& rng);

struct OtReceive1Out {
  ModQVector msg1;  // u_0
  OtReceiverState st;
};

OtReceive1Out ot_receive1(const LatticeParams& p, const OtCrs& crs, int b,
                          SplitRng& rng);

// One single-bit transfer: Regev encodings of z0 under u_0 and z1 under
// u_1 = u_0 + v.
struct OtMsg2 {
  ModQVector w0, w1;  // each length n+1
};

OtMsg2 ot_send(const LatticeParams& p, const OtCrs& crs, const ModQVector& msg1,
               int z0, int z1, SplitRng& rng);

int ot_receive2(const LatticeParams& p, const OtCrs& crs, int b,
                const OtReceiverState& st, const OtMsg2& msg2);

// Per-branch receiver-state recovery in the hiding mode; a branch where
// inversion fails is reported as nullopt.
std::pair<std::optional<OtReceiverState>, std::optional<OtReceiverState>>
ot_sta_rcv(const LatticeParams& p, const OtTrapdoor& td, const ModQVector& msg1);

// Extraction-mode choice-bit recovery; nullopt when the messiness pattern
// is not one-messy-one-structured.
std::optional<int> ot_extract(const LatticeParams& p, const OtTrapdoor& td,
                              const ModQVector& msg1);

OtMsg2 ot_simulate_send(const LatticeParams& p, const OtCrs& crs,
                        const ModQVector& msg1, int z_b, SplitRng& rng);

// Exact simulation of the coherent receiver on (up to) two branches of
// choice bits. The anchor branch is chosen by the caller (by amplitude^2
// in the spec-level wrapper); msg1 is sampled from the anchor's honest
// distribution and the other branch's unique state is recovered with the
// trapdoor. log_weight is (1/2) log rho(e') of each branch's implied
// noise, to be combined with the caller's amplitudes; a branch whose
// implied noise falls outside the truncated support collapses.
struct OtCoherentBranch {
  int b = 0;
  bool alive = true;
  ModQVector r;
  double log_weight = 0;
};

struct OtCoherentOut {
  ModQVector msg1;
  std::vector<OtCoherentBranch> branches;  // input order
  bool collapsed = false;                  // some non-anchor branch died
};

OtCoherentOut ot_coherent_receive1_raw(const LatticeParams& p, const OtCrs& crs,
                                       const OtTrapdoor& god,
                                       const std::vector<int>& branch_bits,
                                       size_t anchor, SplitRng& rng);

// Spec-level wrapper over a BranchState holding a 1-bit register "b";
// appends the fixed-width receiver state as register "st".
std::pair<ModQVector, BranchState> ot_coherent_receive1(
    const LatticeParams& p, const OtCrs& crs, const BranchState& s,
    const OtTrapdoor& god, SplitRng& rng);

// fixed-width block encoding of a receiver state (n*k bits)
BitVec ot_state_bits(const LatticeParams& p, const OtReceiverState& st);
OtReceiverState ot_state_from_bits(const LatticeParams& p, const BitVec& bits);

}  // namespace skl
