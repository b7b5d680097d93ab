#pragma once

#include "skl/skl_core.hpp"
#include "skl/wpke.hpp"

namespace skl {

// PKE with secure key leasing and a classical lessor: the shared SKL
// machinery specialized to the watermarkable PKE, plus the hardcore-bit
// upgrade and the non-interactive key-generation variant.
// Message space: {0,1}^{2n*ell} with ell = w.

struct PkeSklScheme {
  SklParams params;
  PkeScheme base;
  size_t ell = 0;  // = w

  size_t message_bits() const { return 2 * size_t(params.n) * ell; }
};

struct PkeSklEk {
  SklPublic pub;
  std::vector<WpkeEk> wpke;
};

struct PkeSklMsk {
  std::vector<WpkeMsk> wpke;
};

struct PkeSklSetupOut {
  PkeSklScheme scheme;
  PkeSklEk ek;
  PkeSklMsk msk;
  SklSecrets secrets;  // setup-internal; god handle for honest lessees
  SklDvk dvk;          // transcript filled during keygen
};

PkeSklSetupOut pke_skl_setup(int n, int w, const LatticeParams& lat,
                             const PkeScheme& base, SplitRng& rng);

// round 2 marker plugged into the shared machinery
SklMsg2Bundle pke_skl_lessor_round2(const PkeSklSetupOut& su,
                                    const SklMsg1Bundle& bundle, SklDvk& dvk,
                                    SplitRng& rng);

// full interactive keygen against the honest lessee
QuantumKey pke_skl_keygen(PkeSklSetupOut& su, SplitRng& rng);

struct PkeSklCt {
  std::vector<WpkeCt> cts;  // 2n entries
};

PkeSklCt pke_skl_enc(const PkeSklScheme& s, const PkeSklEk& ek, const BitVec& m,
                     SplitRng& rng);
BitVec pke_skl_dec(const PkeSklScheme& s, const PkeSklMsk& msk,
                   const PkeSklCt& ct);

// Lessee decryption: gentle per-index measurement of the decryption
// result; the key survives (amplitudes bit-identical on honest branches).
struct QDecOut {
  BitVec m;
  QuantumKey key;
};
QDecOut pke_skl_qdec(const PkeSklScheme& s, QuantumKey&& key, const PkeSklCt& ct,
                     SplitRng& rng);

// hardcore-bit encryption: indistinguishability from one-wayness
struct GlCiphertext {
  PkeSklCt inner;  // encryption of a uniform x
  BitVec r;
  int b = 0;  // <x, r> ^ m
};

GlCiphertext gl_encrypt(const PkeSklScheme& s, const PkeSklEk& ek, int m,
                        SplitRng& rng);
int gl_decrypt_msk(const PkeSklScheme& s, const PkeSklMsk& msk,
                   const GlCiphertext& ct);
std::pair<int, QuantumKey> gl_decrypt_q(const PkeSklScheme& s, QuantumKey&& key,
                                        const GlCiphertext& ct, SplitRng& rng);

// ---- non-interactive key generation ----
// Setup publishes only the instance parameters; the lessee's first-round
// message doubles as the encryption key, and every ciphertext bundles
// fresh watermarkable keys plus the lessor-round material.

struct NiSetupOut {
  SklParams params;
  SklPublic pub;
  SklSecrets secrets;
  SklDvk dvk;
};

NiSetupOut ni_setup(int n, int w, const LatticeParams& lat, SplitRng& rng);

struct NiEk {
  SklMsg1Bundle bundle;
};

struct NiHalfKey {
  LesseeState state;
};

std::pair<NiEk, NiHalfKey> ni_kg(const NiSetupOut& su, SplitRng& rng);

// records the published ek into the verification key's transcript
void ni_record_transcript(NiSetupOut& su, const NiEk& ek);

struct NiCt {
  std::vector<WpkeEk> wpke_eks;
  SklMsg2Bundle msg2;
  PkeSklCt inner;
};

NiCt ni_enc(const NiSetupOut& su, const PkeScheme& base, const NiEk& ek,
            const BitVec& m, SplitRng& rng);

// decrypts and returns the half key unchanged for reuse
struct NiQDecOut {
  BitVec m;
  NiHalfKey key;
};
NiQDecOut ni_qdec(const NiSetupOut& su, const PkeScheme& base, NiHalfKey&& key,
                  const NiCt& ct, SplitRng& rng);

DeletionCert ni_del(const NiSetupOut& su, NiHalfKey&& key, SplitRng& rng);

}  // namespace skl
