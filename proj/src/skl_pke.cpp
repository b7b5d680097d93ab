#include "skl/skl_pke.hpp"

#include <omp.h>

#include <stdexcept>

namespace skl {

PkeSklSetupOut pke_skl_setup(int n, int w, const LatticeParams& lat,
                             const PkeScheme& base, SplitRng& rng) {
  PkeSklSetupOut su;
  su.scheme.base = base;
  su.scheme.ell = size_t(w);
  su.scheme.params.n = n;
  su.scheme.params.w = w;
  su.scheme.params.lat = lat;
  su.scheme.params.payload_bits = int(wpke_dk_bits(base, size_t(w)));

  SplitRng core = rng.split("skl-core");
  auto [pub, sec] = skl_setup(su.scheme.params, core);
  su.ek.pub = std::move(pub);
  su.secrets = std::move(sec);
  su.dvk = skl_dvk_init(su.scheme.params, su.secrets);

  const size_t total = 2 * size_t(n);
  su.ek.wpke.resize(total);
  su.msk.wpke.resize(total);
  for (size_t i = 0; i < total; i++) {
    SplitRng r = rng.split("wpke", uint64_t(i));
    auto [ek, msk] = wpke_kg(base, size_t(w), r);
    su.ek.wpke[i] = std::move(ek);
    su.msk.wpke[i] = std::move(msk);
  }
  return su;
}

SklMsg2Bundle pke_skl_lessor_round2(const PkeSklSetupOut& su,
                                    const SklMsg1Bundle& bundle, SklDvk& dvk,
                                    SplitRng& rng) {
  const PkeScheme base = su.scheme.base;
  const auto& msks = su.msk.wpke;
  SklMarker marker = [&](size_t i, const BitVec& x) {
    return wpke_dk_to_bits(base, wpke_mark(msks[i], x));
  };
  return skl_lessor_round2(su.scheme.params, su.ek.pub, marker, bundle, &dvk, rng);
}

QuantumKey pke_skl_keygen(PkeSklSetupOut& su, SplitRng& rng) {
  SplitRng r1 = rng.split("keygen-lessee1");
  auto [bundle, state] =
      skl_lessee_round1(su.scheme.params, su.ek.pub, su.secrets, r1);
  SplitRng r2 = rng.split("keygen-lessor2");
  SklMsg2Bundle msg2 = pke_skl_lessor_round2(su, bundle, su.dvk, r2);
  return skl_lessee_finish(su.scheme.params, su.ek.pub, state, msg2);
}

PkeSklCt pke_skl_enc(const PkeSklScheme& s, const PkeSklEk& ek, const BitVec& m,
                     SplitRng& rng) {
  if (m.size() != s.message_bits())
    throw std::invalid_argument("pke_skl_enc: message length mismatch");
  PkeSklCt ct;
  const size_t total = ek.wpke.size();
  ct.cts.resize(total);
  for (size_t i = 0; i < total; i++) {
    SplitRng r = rng.split("enc", uint64_t(i));
    ct.cts[i] = wpke_enc(ek.wpke[i], m.slice(i * s.ell, s.ell), r);
  }
  return ct;
}

BitVec pke_skl_dec(const PkeSklScheme& s, const PkeSklMsk& msk,
                   const PkeSklCt& ct) {
  if (ct.cts.size() != msk.wpke.size())
    throw std::invalid_argument("pke_skl_dec: malformed ciphertext");
  BitVec m;
  for (size_t i = 0; i < msk.wpke.size(); i++)
    m = m.concat(wpke_dec_msk(msk.wpke[i], ct.cts[i]));
  (void)s;
  return m;
}

namespace {

// payload register parser: validity flag plus marked-key bits
RegisterFn wpke_dec_map(const PkeSklScheme& s, const WpkeCt& ct) {
  return [&s, &ct](const BranchState::Branch& b) -> std::optional<BitVec> {
    const BitVec& payload = b.reg("payload");
    if (!payload.get(0)) return std::nullopt;  // invalid-preimage branch
    WpkeDk dk = wpke_dk_from_bits(s.base, s.ell,
                                  payload.slice(1, payload.size() - 1));
    return wpke_dec(s.base, dk, ct);
  };
}

}  // namespace

QDecOut pke_skl_qdec(const PkeSklScheme& s, QuantumKey&& key, const PkeSklCt& ct,
                     SplitRng& rng) {
  const size_t total = key.states.size();
  if (ct.cts.size() != total)
    throw std::invalid_argument("pke_skl_qdec: malformed ciphertext");
  QDecOut out;
  BitVec m;
  for (size_t i = 0; i < total; i++) {
    RegisterFn f = wpke_dec_map(s, ct.cts[i]);
    BranchState with_m = apply_map(key.states[i], "m", f);
    auto [mi, collapsed] = measure_register(with_m, "m", rng);
    key.states[i] = uncompute(collapsed, "m", f);
    m = m.concat(mi);
  }
  out.m = std::move(m);
  out.key = std::move(key);
  return out;
}

GlCiphertext gl_encrypt(const PkeSklScheme& s, const PkeSklEk& ek, int m,
                        SplitRng& rng) {
  GlCiphertext ct;
  BitVec x = BitVec::random(s.message_bits(), rng);
  ct.r = BitVec::random(s.message_bits(), rng);
  ct.b = gf2_inner(x, ct.r) ^ (m & 1);
  SplitRng er = rng.split("gl-inner");
  ct.inner = pke_skl_enc(s, ek, x, er);
  return ct;
}

int gl_decrypt_msk(const PkeSklScheme& s, const PkeSklMsk& msk,
                   const GlCiphertext& ct) {
  BitVec x = pke_skl_dec(s, msk, ct.inner);
  return gf2_inner(x, ct.r) ^ ct.b;
}

std::pair<int, QuantumKey> gl_decrypt_q(const PkeSklScheme& s, QuantumKey&& key,
                                        const GlCiphertext& ct, SplitRng& rng) {
  QDecOut out = pke_skl_qdec(s, std::move(key), ct.inner, rng);
  return {gf2_inner(out.m, ct.r) ^ ct.b, std::move(out.key)};
}

// ---- non-interactive variant ----

NiSetupOut ni_setup(int n, int w, const LatticeParams& lat, SplitRng& rng) {
  NiSetupOut su;
  su.params.n = n;
  su.params.w = w;
  su.params.lat = lat;
  su.params.payload_bits = int(wpke_dk_bits(PkeScheme::toy_scheme(), size_t(w)));
  SplitRng core = rng.split("skl-core");
  auto [pub, sec] = skl_setup(su.params, core);
  su.pub = std::move(pub);
  su.secrets = std::move(sec);
  su.dvk = skl_dvk_init(su.params, su.secrets);
  return su;
}

std::pair<NiEk, NiHalfKey> ni_kg(const NiSetupOut& su, SplitRng& rng) {
  SplitRng r = rng.split("ni-kg");
  auto [bundle, state] = skl_lessee_round1(su.params, su.pub, su.secrets, r);
  return {NiEk{std::move(bundle)}, NiHalfKey{std::move(state)}};
}

void ni_record_transcript(NiSetupOut& su, const NiEk& ek) {
  const size_t total = su.pub.inst.size();
  if (ek.bundle.y.size() != total || ek.bundle.msg1.size() != total)
    throw std::invalid_argument("ni_record_transcript: malformed ek");
  for (size_t i = 0; i < total; i++)
    su.dvk.transcript[i] = SklTranscriptEntry{ek.bundle.y[i], ek.bundle.msg1[i]};
}

NiCt ni_enc(const NiSetupOut& su, const PkeScheme& base, const NiEk& ek,
            const BitVec& m, SplitRng& rng) {
  const size_t total = su.pub.inst.size();
  const size_t ell = size_t(su.params.w);
  if (m.size() != total * ell)
    throw std::invalid_argument("ni_enc: message length mismatch");
  NiCt ct;
  ct.wpke_eks.resize(total);
  std::vector<WpkeMsk> msks(total);
  for (size_t i = 0; i < total; i++) {
    SplitRng r = rng.split("ni-wpke", uint64_t(i));
    auto [wek, wmsk] = wpke_kg(base, ell, r);
    ct.wpke_eks[i] = std::move(wek);
    msks[i] = std::move(wmsk);
  }
  SklMarker marker = [&](size_t i, const BitVec& x) {
    return wpke_dk_to_bits(base, wpke_mark(msks[i], x));
  };
  SplitRng r2 = rng.split("ni-lessor");
  // no transcript recording: for this variant it comes from the public ek
  ct.msg2 = skl_lessor_round2(su.params, su.pub, marker, ek.bundle, nullptr, r2);
  for (size_t i = 0; i < total; i++) {
    SplitRng r = rng.split("ni-enc", uint64_t(i));
    ct.inner.cts.push_back(
        wpke_enc(ct.wpke_eks[i], m.slice(i * ell, ell), r));
  }
  return ct;
}

NiQDecOut ni_qdec(const NiSetupOut& su, const PkeScheme& base, NiHalfKey&& key,
                  const NiCt& ct, SplitRng& rng) {
  const size_t total = su.pub.inst.size();
  if (ct.msg2.msg2.size() != total || ct.inner.cts.size() != total)
    throw std::invalid_argument("ni_qdec: malformed ciphertext");
  QuantumKey full = skl_lessee_finish(su.params, su.pub, key.state, ct.msg2);
  PkeSklScheme s;
  s.params = su.params;
  s.base = base;
  s.ell = size_t(su.params.w);
  QDecOut out = pke_skl_qdec(s, std::move(full), ct.inner, rng);
  // peel the payload back off so the half key is ready for the next bundle
  for (size_t i = 0; i < total; i++) {
    const SfeCrs& crs = su.pub.inst[i].sfe_crs;
    const SfeMsg2& m2 = ct.msg2.msg2[i];
    key.state.states[i] = uncompute(
        out.key.states[i], "payload",
        [&](const BranchState::Branch& b) -> std::optional<BitVec> {
          SfeState st = sfe_state_from_bits(su.params.lat, su.params.w, b.reg("st"));
          return sfe_receive2(su.params.lat, crs, b.reg("x"), st, m2);
        });
  }
  return {std::move(out.m), std::move(key)};
}

DeletionCert ni_del(const NiSetupOut& su, NiHalfKey&& key, SplitRng& rng) {
  return skl_del_halfkey(su.params, std::move(key.state), rng);
}

}  // namespace skl
