#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "skl/skl_pke.hpp"
#include "skl/skl_prf.hpp"

using namespace skl;

namespace {
const int kN = 3;
const int kW = 4;

PkeSklSetupOut small_setup(uint64_t seed) {
  SplitRng rng(seed);
  return pke_skl_setup(kN, kW, LatticeParams::demo_preset(),
                       PkeScheme::toy_scheme(), rng);
}
}  // namespace

TEST_CASE("setup wires modes to the hidden subset") {
  PkeSklSetupOut su = small_setup(1);
  CHECK(su.ek.pub.inst.size() == 2 * size_t(kN));
  CHECK(su.ek.wpke.size() == 2 * size_t(kN));
  int in_s = 0;
  for (size_t i = 0; i < su.secrets.in_s.size(); i++) {
    bool s = su.secrets.in_s[i];
    in_s += s ? 1 : 0;
    CHECK(su.ek.pub.inst[i].ntcf_pp.mode ==
          (s ? NtcfMode::injective : NtcfMode::two_to_one));
    CHECK(su.secrets.sfe_td[i].mode == (s ? 1 : 2));
    CHECK(su.dvk.in_s[i] == s);
    CHECK(su.dvk.ntcf_td[i].has_value() == !s);
  }
  CHECK(in_s == kN);
  // instances are independent: distinct seeds
  for (size_t i = 0; i < su.ek.pub.inst.size(); i++)
    for (size_t j = i + 1; j < su.ek.pub.inst.size(); j++)
      CHECK(su.ek.pub.inst[i].ntcf_pp.seed != su.ek.pub.inst[j].ntcf_pp.seed);
}

TEST_CASE("keygen payload equals the marked key on every branch") {
  PkeSklSetupOut su = small_setup(2);
  SplitRng rng(22);
  QuantumKey key = pke_skl_keygen(su, rng);
  for (size_t i = 0; i < key.states.size(); i++) {
    const auto& st = key.states[i];
    if (su.secrets.in_s[i]) {
      CHECK(st.branch_count() == 1);
    } else {
      CHECK(st.branch_count() == 2);
    }
    for (const auto& b : st.branches()) {
      const BitVec& payload = b.reg("payload");
      REQUIRE(payload.get(0));  // validity flag
      BitVec expect =
          wpke_dk_to_bits(su.scheme.base, wpke_mark(su.msk.wpke[i], b.reg("x")));
      CHECK(payload.slice(1, payload.size() - 1) == expect);
    }
  }
}

TEST_CASE("encrypt/decrypt round-trips through every path") {
  PkeSklSetupOut su = small_setup(3);
  SplitRng rng(33);
  QuantumKey key = pke_skl_keygen(su, rng);
  for (int t = 0; t < 5; t++) {
    BitVec m = BitVec::random(su.scheme.message_bits(), rng);
    SplitRng er = rng.split("enc", uint64_t(t));
    PkeSklCt ct = pke_skl_enc(su.scheme, su.ek, m, er);
    CHECK(pke_skl_dec(su.scheme, su.msk, ct) == m);
    SplitRng qr = rng.split("qdec", uint64_t(t));
    QDecOut out = pke_skl_qdec(su.scheme, std::move(key), ct, qr);
    CHECK(out.m == m);
    key = std::move(out.key);
  }
  // blockwise independence: swapping one index block flips only that block
  BitVec m = BitVec::random(su.scheme.message_bits(), rng);
  PkeSklCt ct = pke_skl_enc(su.scheme, su.ek, m, rng);
  BitVec m2 = m;
  for (size_t j = 0; j < su.scheme.ell; j++) m2.set(j, !m2.get(j));
  PkeSklCt ct2 = pke_skl_enc(su.scheme, su.ek, m2, rng);
  ct.cts[0] = ct2.cts[0];
  BitVec dec = pke_skl_dec(su.scheme, su.msk, ct);
  CHECK(dec.slice(0, su.scheme.ell) == m2.slice(0, su.scheme.ell));
  CHECK(dec.slice(su.scheme.ell, dec.size() - su.scheme.ell) ==
        m.slice(su.scheme.ell, m.size() - su.scheme.ell));
}

TEST_CASE("qdec is gentle: amplitudes are bit-identical afterwards") {
  PkeSklSetupOut su = small_setup(4);
  SplitRng rng(44);
  QuantumKey key = pke_skl_keygen(su, rng);
  std::vector<std::vector<double>> amps;
  for (const auto& st : key.states) {
    std::vector<double> a;
    for (const auto& b : st.branches()) a.push_back(b.amp);
    amps.push_back(a);
  }
  for (int t = 0; t < 20; t++) {
    BitVec m = BitVec::random(su.scheme.message_bits(), rng);
    PkeSklCt ct = pke_skl_enc(su.scheme, su.ek, m, rng);
    QDecOut out = pke_skl_qdec(su.scheme, std::move(key), ct, rng);
    key = std::move(out.key);
  }
  for (size_t i = 0; i < key.states.size(); i++) {
    REQUIRE(key.states[i].branch_count() == amps[i].size());
    for (size_t b = 0; b < amps[i].size(); b++)
      CHECK(key.states[i].branches()[b].amp == amps[i][b]);
  }
  // and deletion still verifies
  SplitRng dr = rng.split("del");
  DeletionCert cert = skl_del(su.scheme.params, su.ek.pub, std::move(key), dr);
  CHECK(skl_del_vrfy(su.scheme.params, su.dvk, cert).ok);
}

TEST_CASE("honest deletion certificates verify") {
  int pass = 0;
  for (int t = 0; t < 20; t++) {
    PkeSklSetupOut su = small_setup(100 + uint64_t(t));
    SplitRng rng(200 + uint64_t(t));
    QuantumKey key = pke_skl_keygen(su, rng);
    DeletionCert cert = skl_del(su.scheme.params, su.ek.pub, std::move(key), rng);
    if (skl_del_vrfy(su.scheme.params, su.dvk, cert).ok) pass++;
  }
  CHECK(pass == 20);
}

TEST_CASE("random certificates are rejected at roughly 2^-n") {
  PkeSklSetupOut su = small_setup(5);
  SplitRng rng(55);
  QuantumKey key = pke_skl_keygen(su, rng);
  DeletionCert cert = skl_del(su.scheme.params, su.ek.pub, std::move(key), rng);
  PreparedVerifier ver(su.scheme.params, su.dvk);
  CHECK(ver.verify(cert) == skl_del_vrfy(su.scheme.params, su.dvk, cert).ok);
  const size_t u = su.scheme.params.block_bits();
  int accept = 0;
  const int trials = 4000;
  for (int t = 0; t < trials; t++) {
    DeletionCert r;
    for (int i = 0; i < 2 * kN; i++) {
      r.d.push_back(BitVec::random(size_t(kW), rng));
      r.c.push_back(BitVec::random(u * size_t(kW), rng));
    }
    accept += ver.verify(r) ? 1 : 0;
  }
  // per-index pass ~ 1/2 over n = 3 indices => ~ 1/8
  double rate = double(accept) / trials;
  CHECK(rate > 0.06);
  CHECK(rate < 0.20);
}

TEST_CASE("targeted mutation flips the parity check") {
  // find a session whose first free index has an odd-weight claw difference
  for (uint64_t seed = 0;; seed++) {
    PkeSklSetupOut su = small_setup(600 + seed);
    SplitRng rng(700 + seed);
    QuantumKey key = pke_skl_keygen(su, rng);
    size_t idx = 0;
    while (su.secrets.in_s[idx]) idx++;
    auto claw = ntcf_invert(su.secrets.ntcf_td[idx], su.dvk.transcript[idx]->y);
    REQUIRE(claw.has_value());
    BitVec delta = (*claw)[0] ^ (*claw)[1];
    if (delta.weight() % 2 == 0) continue;
    DeletionCert cert = skl_del(su.scheme.params, su.ek.pub, std::move(key), rng);
    REQUIRE(skl_del_vrfy(su.scheme.params, su.dvk, cert).ok);
    cert.d[idx] ^= delta;  // <delta, delta> = 1 flips the corrected parity
    auto rep = skl_del_vrfy(su.scheme.params, su.dvk, cert);
    CHECK(!rep.ok);
    CHECK(rep.diagnostic.find("index " + std::to_string(idx)) != std::string::npos);
    break;
  }
}

TEST_CASE("malformed certificates are rejected with diagnostics") {
  PkeSklSetupOut su = small_setup(6);
  SplitRng rng(66);
  QuantumKey key = pke_skl_keygen(su, rng);
  DeletionCert cert = skl_del(su.scheme.params, su.ek.pub, std::move(key), rng);
  DeletionCert bad = cert;
  bad.d.pop_back();
  bad.c.pop_back();
  CHECK(!skl_del_vrfy(su.scheme.params, su.dvk, bad).ok);
  DeletionCert bad2 = cert;
  size_t idx = 0;
  while (su.secrets.in_s[idx]) idx++;
  bad2.d[idx] = BitVec(size_t(kW) + 1);
  auto rep = skl_del_vrfy(su.scheme.params, su.dvk, bad2);
  CHECK(!rep.ok);
  CHECK(!rep.diagnostic.empty());
}

TEST_CASE("lessor aborts on malformed first messages") {
  PkeSklSetupOut su = small_setup(7);
  SplitRng rng(77);
  auto [bundle, state] =
      skl_lessee_round1(su.scheme.params, su.ek.pub, su.secrets, rng);
  SklMsg1Bundle bad = bundle;
  bad.y[0] = BitVec(size_t(kW) + 2);
  CHECK_THROWS(pke_skl_lessor_round2(su, bad, su.dvk, rng));
  SklMsg1Bundle bad2 = bundle;
  bad2.msg1[0].per_wire.pop_back();
  CHECK_THROWS(pke_skl_lessor_round2(su, bad2, su.dvk, rng));
}

TEST_CASE("hardcore-bit encryption round-trips") {
  PkeSklSetupOut su = small_setup(8);
  SplitRng rng(88);
  QuantumKey key = pke_skl_keygen(su, rng);
  for (int m = 0; m < 2; m++) {
    for (int t = 0; t < 4; t++) {
      SplitRng r = rng.split("gl", uint64_t(m * 10 + t));
      GlCiphertext ct = gl_encrypt(su.scheme, su.ek, m, r);
      CHECK(gl_decrypt_msk(su.scheme, su.msk, ct) == m);
      auto [bit, key2] = gl_decrypt_q(su.scheme, std::move(key), ct, r);
      CHECK(bit == m);
      key = std::move(key2);
    }
  }
  // r = 0 pins the bit directly
  GlCiphertext ct = gl_encrypt(su.scheme, su.ek, 1, rng);
  ct.r = BitVec(su.scheme.message_bits());
  ct.b = 1;
  CHECK(gl_decrypt_msk(su.scheme, su.msk, ct) == 1);
}

// ---- non-interactive variant ----

TEST_CASE("non-interactive round trip") {
  SplitRng rng(9);
  NiSetupOut su = ni_setup(kN, kW, LatticeParams::demo_preset(), rng);
  PkeScheme base = PkeScheme::toy_scheme();
  auto [ek, half] = ni_kg(su, rng);
  ni_record_transcript(su, ek);
  const size_t mbits = 2 * size_t(kN) * size_t(kW);
  for (int t = 0; t < 3; t++) {
    BitVec m = BitVec::random(mbits, rng);
    SplitRng er = rng.split("enc", uint64_t(t));
    NiCt ct = ni_enc(su, base, ek, m, er);
    SplitRng qr = rng.split("qdec", uint64_t(t));
    NiQDecOut out = ni_qdec(su, base, std::move(half), ct, qr);
    CHECK(out.m == m);
    half = std::move(out.key);
  }
  DeletionCert cert = ni_del(su, std::move(half), rng);
  CHECK(skl_del_vrfy(su.params, su.dvk, cert).ok);
}

TEST_CASE("non-interactive: deletion before any ciphertext still verifies") {
  SplitRng rng(10);
  NiSetupOut su = ni_setup(kN, kW, LatticeParams::demo_preset(), rng);
  auto [ek, half] = ni_kg(su, rng);
  ni_record_transcript(su, ek);
  DeletionCert cert = ni_del(su, std::move(half), rng);
  CHECK(skl_del_vrfy(su.params, su.dvk, cert).ok);
}

TEST_CASE("non-interactive: two ciphertexts under independent keys decrypt "
          "from the same half key") {
  SplitRng rng(11);
  NiSetupOut su = ni_setup(kN, kW, LatticeParams::demo_preset(), rng);
  PkeScheme base = PkeScheme::toy_scheme();
  auto [ek, half] = ni_kg(su, rng);
  ni_record_transcript(su, ek);
  const size_t mbits = 2 * size_t(kN) * size_t(kW);
  BitVec m1 = BitVec::random(mbits, rng);
  BitVec m2 = BitVec::random(mbits, rng);
  NiCt ct1 = ni_enc(su, base, ek, m1, rng);
  NiCt ct2 = ni_enc(su, base, ek, m2, rng);
  // the bundled watermarkable keys are independent
  CHECK(ct1.wpke_eks[0].eks[0] != ct2.wpke_eks[0].eks[0]);
  SplitRng q1 = rng.split("q1");
  NiQDecOut o1 = ni_qdec(su, base, std::move(half), ct1, q1);
  CHECK(o1.m == m1);
  SplitRng q2 = rng.split("q2");
  NiQDecOut o2 = ni_qdec(su, base, std::move(o1.key), ct2, q2);
  CHECK(o2.m == m2);
}

// ---- PRF side ----

TEST_CASE("prf-skl: leased evaluation agrees with the master key") {
  SplitRng rng(12);
  PrfSklSetupOut su =
      prf_skl_setup(kN, kW, 16, LatticeParams::demo_preset(), rng);
  QuantumKey key = prf_skl_keygen(su, rng);
  for (int t = 0; t < 30; t++) {
    BitVec s = BitVec::random(su.scheme.input_bits(), rng);
    QLEvalOut out = prf_skl_qleval(su.scheme, std::move(key), s, rng);
    CHECK(out.t == prf_skl_eval(su.scheme, su.msk, s));
    CHECK(out.collapsed_indices.empty());
    key = std::move(out.key);
  }
  SplitRng dr = rng.split("del");
  DeletionCert cert = skl_del(su.scheme.params, su.pub, std::move(key), dr);
  CHECK(skl_del_vrfy(su.scheme.params, su.dvk, cert).ok);
}

TEST_CASE("prf-skl: planted differing points trigger the collapse diagnostic") {
  // find a session with a two-branch index whose branches hold different
  // key selections at some block, then hit that block's differing point
  for (uint64_t seed = 40;; seed++) {
    SplitRng rng(seed);
    PrfSklSetupOut su =
        prf_skl_setup(kN, kW, 16, LatticeParams::demo_preset(), rng);
    QuantumKey key = prf_skl_keygen(su, rng);
    size_t idx = 0;
    while (su.secrets.in_s[idx]) idx++;
    const auto& st = key.states[idx];
    REQUIRE(st.branch_count() == 2);
    const BitVec x0 = st.branches()[0].reg("x");
    const BitVec x1 = st.branches()[1].reg("x");
    int block = -1;
    for (int j = 0; j < kW; j++)
      if (x0.get(size_t(j)) != x1.get(size_t(j))) {
        block = j;
        break;
      }
    REQUIRE(block >= 0);
    // adversarial input: hit s*_block of that index, random elsewhere
    BitVec s = BitVec::random(su.scheme.input_bits(), rng);
    const size_t ell = su.scheme.ell;
    const size_t base = idx * su.scheme.index_input_bits() + size_t(block) * ell;
    const BitVec& sstar = su.xk.wupf[idx].s_stars[size_t(block)];
    for (size_t b = 0; b < ell; b++) s.set(base + b, sstar.get(b));
    QLEvalOut out = prf_skl_qleval(su.scheme, std::move(key), s, rng);
    REQUIRE(out.collapsed_indices.size() == 1);
    CHECK(out.collapsed_indices[0] == idx);
    CHECK(out.key.states[idx].branch_count() == 1);
    break;
  }
}

TEST_CASE("prf-skl: hardcore bit is linear in r") {
  SplitRng rng(13);
  PrfSklSetupOut su =
      prf_skl_setup(kN, kW, 8, LatticeParams::demo_preset(), rng);
  BitVec s = BitVec::random(su.scheme.input_bits(), rng);
  BitVec zero(su.scheme.output_bits());
  CHECK(prf_gl_eval(su.scheme, su.msk, s, zero) == 0);
  for (int t = 0; t < 20; t++) {
    BitVec r1 = BitVec::random(su.scheme.output_bits(), rng);
    BitVec r2 = BitVec::random(su.scheme.output_bits(), rng);
    CHECK((prf_gl_eval(su.scheme, su.msk, s, r1) ^
           prf_gl_eval(su.scheme, su.msk, s, r2)) ==
          prf_gl_eval(su.scheme, su.msk, s, r1 ^ r2));
  }
  // consistency with the leased evaluation
  QuantumKey key = prf_skl_keygen(su, rng);
  BitVec r = BitVec::random(su.scheme.output_bits(), rng);
  QLEvalOut out = prf_skl_qleval(su.scheme, std::move(key), s, rng);
  CHECK(gf2_inner(out.t, r) == prf_gl_eval(su.scheme, su.msk, s, r));
}
