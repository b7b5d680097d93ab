#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "skl/branch.hpp"
#include "skl/ntcf.hpp"
#include "skl/sfe.hpp"

namespace skl {

// Machinery shared by the PKE and PRF leasing protocols: 2n claw-free /
// SFE instance pairs with a hidden subset S of injective+extractable
// indices, the two-round interactive key generation, deletion, and the
// d*-corrected verification of deletion certificates.

struct SklParams {
  int n = 0;            // |S|; 2n instances total
  int w = 0;            // claw-free input width = mark width
  int payload_bits = 0; // marked-key width carried by the keygen circuit
  LatticeParams lat;

  size_t block_bits() const { return sfe_block_bits(lat); }  // u
};

struct SklInstance {
  NtcfPp ntcf_pp;
  SfeCrs sfe_crs;
};

struct SklPublic {
  std::vector<SklInstance> inst;  // 2n entries
};

// Held by the party that ran setup; also the simulator's god handle for
// the lessee's state generation.
struct SklSecrets {
  std::vector<bool> in_s;  // index membership in S
  std::vector<NtcfTd> ntcf_td;
  std::vector<SfeTrapdoor> sfe_td;
};

struct SklTranscriptEntry {
  BitVec y;
  SfeMsg1 msg1;
};

struct SklDvk {
  int n = 0, w = 0;
  std::vector<bool> in_s;
  // trapdoors only for i outside S
  std::vector<std::optional<NtcfTd>> ntcf_td;
  std::vector<std::optional<SfeTrapdoor>> sfe_td;
  // keygen transcript, recorded by the lessor at round 2
  std::vector<std::optional<SklTranscriptEntry>> transcript;
};

struct SklMsg1Bundle {
  std::vector<BitVec> y;
  std::vector<SfeMsg1> msg1;
};

struct SklMsg2Bundle {
  std::vector<SfeMsg2> msg2;
};

struct LesseeState {
  std::vector<BranchState> states;  // registers: x, st
  std::vector<BitVec> y;
};

struct QuantumKey {
  std::vector<BranchState> states;  // registers: x, st, payload
  SklMsg2Bundle msg2;
};

struct DeletionCert {
  std::vector<BitVec> d;  // w bits each
  std::vector<BitVec> c;  // w*u bits each
};

std::pair<SklPublic, SklSecrets> skl_setup(const SklParams& p, SplitRng& rng);

SklDvk skl_dvk_init(const SklParams& p, const SklSecrets& sec);

// Lessee round 1: claw-state generation plus the coherent SFE receive on
// the preimage register of every index.
std::pair<SklMsg1Bundle, LesseeState> skl_lessee_round1(const SklParams& p,
                                                        const SklPublic& pub,
                                                        const SklSecrets& god,
                                                        SplitRng& rng);

// marker(i, x) returns the payload the circuit of index i outputs for a
// valid preimage x (the marked-key bits, without the validity flag).
using SklMarker = std::function<BitVec(size_t, const BitVec&)>;

// Lessor round 2: builds the check-then-mark circuit per index, runs the
// SFE sender, and records the transcript into dvk when one is supplied.
// Throws on malformed bundles (the lessor aborts).
SklMsg2Bundle skl_lessor_round2(const SklParams& p, const SklPublic& pub,
                                const SklMarker& marker,
                                const SklMsg1Bundle& bundle, SklDvk* dvk,
                                SplitRng& rng);

// Lessee round 2: appends the payload register per index.
QuantumKey skl_lessee_finish(const SklParams& p, const SklPublic& pub,
                             const LesseeState& state,
                             const SklMsg2Bundle& msg2);

// Deletion consumes the key.
DeletionCert skl_del(const SklParams& p, const SklPublic& pub, QuantumKey&& key,
                     SplitRng& rng);

// Hadamard deletion of a pre-payload state (the non-interactive variant's
// half key); also consumes it.
DeletionCert skl_del_halfkey(const SklParams& p, LesseeState&& state,
                             SplitRng& rng);

struct DelVrfyReport {
  bool ok = false;
  std::string diagnostic;  // first failure, empty when ok
};

DelVrfyReport skl_del_vrfy(const SklParams& p, const SklDvk& dvk,
                           const DeletionCert& cert);

// Precomputed verifier for high-volume certificate checks against one
// transcript; verdicts match skl_del_vrfy exactly.
class PreparedVerifier {
 public:
  PreparedVerifier(const SklParams& p, const SklDvk& dvk);
  bool verify(const DeletionCert& cert) const;

 private:
  struct Entry {
    size_t index;
    BitVec dx;                     // x0 ^ x1
    std::vector<BitVec> alpha_xor; // per block, alpha^0 ^ alpha^1
    bool y_in_image;
  };
  SklParams p_;
  int total_ = 0;
  std::vector<Entry> entries_;
  std::vector<std::optional<NtcfTd>> ntcf_td_;
  std::vector<BitVec> y_;
  bool transcript_ok_ = true;
};

// Builds the per-index keygen circuit used by round 2: validity flag plus
// payload, with the accept set enumerated through the public permutation.
BoolCircuit skl_keygen_circuit(const NtcfPp& pp, const BitVec& y,
                               int payload_bits,
                               const std::function<BitVec(const BitVec&)>& mark);

std::vector<uint8_t> skl_cert_serialize(const DeletionCert& cert);
DeletionCert skl_cert_deserialize(const std::vector<uint8_t>& in, size_t& pos);

}  // namespace skl
