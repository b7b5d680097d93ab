#include "skl/skl_core.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

namespace skl {

std::pair<SklPublic, SklSecrets> skl_setup(const SklParams& p, SplitRng& rng) {
  if (p.n <= 0 || p.w < 2) throw std::invalid_argument("skl_setup: bad params");
  const int total = 2 * p.n;

  // uniform subset S of size n
  std::vector<int> idx((size_t(total)));
  for (int i = 0; i < total; i++) idx[size_t(i)] = i;
  SplitRng srng = rng.split("subset");
  for (int i = total - 1; i > 0; i--)
    std::swap(idx[size_t(i)], idx[size_t(srng.below(uint64_t(i + 1)))]);
  std::vector<bool> in_s((size_t(total)), false);
  for (int i = 0; i < p.n; i++) in_s[size_t(idx[size_t(i)])] = true;

  SklPublic pub;
  SklSecrets sec;
  sec.in_s = in_s;
  pub.inst.resize(size_t(total));
  sec.ntcf_td.resize(size_t(total));
  sec.sfe_td.resize(size_t(total));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < total; i++) {
    SplitRng r = rng.split("instance", uint64_t(i));
    const int mode = in_s[size_t(i)] ? 1 : 2;
    SplitRng rn = r.split("ntcf");
    auto [pp, td] = ntcf_func_gen(p.w, NtcfMode(mode), rn);
    SplitRng rs = r.split("sfe");
    auto [crs, sfetd] = sfe_crs_gen(p.lat, mode, p.w, rs);
    pub.inst[size_t(i)] = {std::move(pp), std::move(crs)};
    sec.ntcf_td[size_t(i)] = std::move(td);
    sec.sfe_td[size_t(i)] = std::move(sfetd);
  }
  return {std::move(pub), std::move(sec)};
}

SklDvk skl_dvk_init(const SklParams& p, const SklSecrets& sec) {
  SklDvk dvk;
  dvk.n = p.n;
  dvk.w = p.w;
  dvk.in_s = sec.in_s;
  const size_t total = sec.in_s.size();
  dvk.ntcf_td.resize(total);
  dvk.sfe_td.resize(total);
  dvk.transcript.resize(total);
  for (size_t i = 0; i < total; i++) {
    if (!sec.in_s[i]) {
      dvk.ntcf_td[i] = sec.ntcf_td[i];
      dvk.sfe_td[i] = sec.sfe_td[i];
    }
  }
  return dvk;
}

std::pair<SklMsg1Bundle, LesseeState> skl_lessee_round1(const SklParams& p,
                                                        const SklPublic& pub,
                                                        const SklSecrets& god,
                                                        SplitRng& rng) {
  const size_t total = pub.inst.size();
  SklMsg1Bundle bundle;
  LesseeState state;
  bundle.y.resize(total);
  bundle.msg1.resize(total);
  state.states.resize(total);
  state.y.resize(total);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < long(total); i++) {
    SplitRng r = rng.split("lessee1", uint64_t(i));
    SplitRng rg = r.split("stategen");
    auto [y, psi] = ntcf_state_gen(pub.inst[size_t(i)].ntcf_pp,
                                   god.ntcf_td[size_t(i)], rg);
    SplitRng rq = r.split("qreceive");
    auto out = sfe_coherent_receive1(p.lat, pub.inst[size_t(i)].sfe_crs, psi,
                                     god.sfe_td[size_t(i)], rq);
    bundle.y[size_t(i)] = y;
    bundle.msg1[size_t(i)] = out.msg1;
    state.states[size_t(i)] = std::move(out.state);
    state.y[size_t(i)] = std::move(y);
  }
  return {std::move(bundle), std::move(state)};
}

BoolCircuit skl_keygen_circuit(const NtcfPp& pp, const BitVec& y,
                               int payload_bits,
                               const std::function<BitVec(const BitVec&)>& mark) {
  std::vector<std::pair<BitVec, BitVec>> rows;
  for (const BitVec& x : ntcf_preimages(pp, y)) {
    BitVec payload = mark(x);
    if (int(payload.size()) != payload_bits)
      throw std::invalid_argument("skl_keygen_circuit: payload width mismatch");
    rows.emplace_back(x, std::move(payload));
  }
  return build_select_circuit(pp.w, payload_bits, rows);
}

SklMsg2Bundle skl_lessor_round2(const SklParams& p, const SklPublic& pub,
                                const SklMarker& marker,
                                const SklMsg1Bundle& bundle, SklDvk* dvk,
                                SplitRng& rng) {
  const size_t total = pub.inst.size();
  if (bundle.y.size() != total || bundle.msg1.size() != total)
    throw std::invalid_argument("skl_lessor_round2: malformed bundle");
  for (size_t i = 0; i < total; i++) {
    if (bundle.y[i].size() != size_t(p.w))
      throw std::invalid_argument("skl_lessor_round2: bad y width");
    if (bundle.msg1[i].per_wire.size() != size_t(p.w))
      throw std::invalid_argument("skl_lessor_round2: bad msg1 width");
    for (const auto& v : bundle.msg1[i].per_wire)
      if (v.size() != size_t(p.lat.m))
        throw std::invalid_argument("skl_lessor_round2: bad msg1 vector length");
  }

  SklMsg2Bundle out;
  out.msg2.resize(total);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < long(total); i++) {
    SplitRng r = rng.split("lessor2", uint64_t(i));
    BoolCircuit c = skl_keygen_circuit(
        pub.inst[size_t(i)].ntcf_pp, bundle.y[size_t(i)], p.payload_bits,
        [&](const BitVec& x) { return marker(size_t(i), x); });
    out.msg2[size_t(i)] =
        sfe_send(p.lat, pub.inst[size_t(i)].sfe_crs, bundle.msg1[size_t(i)], c, r);
  }
  if (dvk)
    for (size_t i = 0; i < total; i++)
      dvk->transcript[i] = SklTranscriptEntry{bundle.y[i], bundle.msg1[i]};
  return out;
}

QuantumKey skl_lessee_finish(const SklParams& p, const SklPublic& pub,
                             const LesseeState& state,
                             const SklMsg2Bundle& msg2) {
  const size_t total = pub.inst.size();
  if (msg2.msg2.size() != total)
    throw std::invalid_argument("skl_lessee_finish: malformed bundle");
  QuantumKey key;
  key.msg2 = msg2;
  key.states.resize(total);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < long(total); i++) {
    const SfeCrs& crs = pub.inst[size_t(i)].sfe_crs;
    const SfeMsg2& m2 = msg2.msg2[size_t(i)];
    key.states[size_t(i)] = apply_map(
        state.states[size_t(i)], "payload",
        [&](const BranchState::Branch& b) -> std::optional<BitVec> {
          SfeState st = sfe_state_from_bits(p.lat, p.w, b.reg("st"));
          return sfe_receive2(p.lat, crs, b.reg("x"), st, m2);
        });
  }
  return key;
}

DeletionCert skl_del(const SklParams& p, const SklPublic& pub, QuantumKey&& key,
                     SplitRng& rng) {
  const size_t total = key.states.size();
  DeletionCert cert;
  cert.d.resize(total);
  cert.c.resize(total);
  for (size_t i = 0; i < total; i++) {
    const SfeCrs& crs = pub.inst[i].sfe_crs;
    const SfeMsg2& m2 = key.msg2.msg2[i];
    BranchState psi = uncompute(
        key.states[i], "payload",
        [&](const BranchState::Branch& b) -> std::optional<BitVec> {
          SfeState st = sfe_state_from_bits(p.lat, p.w, b.reg("st"));
          return sfe_receive2(p.lat, crs, b.reg("x"), st, m2);
        });
    SplitRng r = rng.split("del", uint64_t(i));
    BitVec outcome = measure_hadamard_all(psi, r);
    cert.d[i] = outcome.slice(0, size_t(p.w));
    cert.c[i] = outcome.slice(size_t(p.w), outcome.size() - size_t(p.w));
  }
  key.states.clear();  // the key is consumed
  return cert;
}

DeletionCert skl_del_halfkey(const SklParams& p, LesseeState&& state,
                             SplitRng& rng) {
  const size_t total = state.states.size();
  DeletionCert cert;
  cert.d.resize(total);
  cert.c.resize(total);
  for (size_t i = 0; i < total; i++) {
    SplitRng r = rng.split("del", uint64_t(i));
    BitVec outcome = measure_hadamard_all(state.states[i], r);
    cert.d[i] = outcome.slice(0, size_t(p.w));
    cert.c[i] = outcome.slice(size_t(p.w), outcome.size() - size_t(p.w));
  }
  state.states.clear();
  return cert;
}

namespace {

struct IndexCheck {
  bool ok;
  std::string why;
};

IndexCheck check_index(const SklParams& p, const NtcfTd& ntd,
                       const SfeTrapdoor& std_, const SklTranscriptEntry& tr,
                       const BitVec& d, const BitVec& c) {
  const size_t u = p.block_bits();
  if (d.size() != size_t(p.w)) return {false, "bad d length"};
  if (c.size() != u * size_t(p.w)) return {false, "bad c length"};

  auto claw = ntcf_invert(ntd, tr.y);
  if (!claw || claw->size() != 2) return {false, "claw inversion failed"};
  BitVec dx = (*claw)[0] ^ (*claw)[1];

  auto table = sfe_sta_rcv(p.lat, std_, tr.msg1);
  if (!table) return {false, "state recovery failed"};

  BitVec dstar(size_t(p.w));
  for (size_t j = 0; j < size_t(p.w); j++) {
    BitVec cj = c.slice(j * u, u);
    dstar.set(j, gf2_inner(cj, table->alpha(j, 0) ^ table->alpha(j, 1)) != 0);
  }
  BitVec corrected = d ^ dstar;
  if (gf2_inner(corrected, dx) != 0) return {false, "parity check failed"};
  if (!ntcf_good_set(ntd, tr.y, corrected)) return {false, "good-set check failed"};
  return {true, ""};
}

}  // namespace

DelVrfyReport skl_del_vrfy(const SklParams& p, const SklDvk& dvk,
                           const DeletionCert& cert) {
  const size_t total = dvk.in_s.size();
  if (cert.d.size() != total || cert.c.size() != total)
    return {false, "certificate index count mismatch"};
  for (size_t i = 0; i < total; i++) {
    if (dvk.in_s[i]) continue;
    if (!dvk.transcript[i]) return {false, "missing keygen transcript"};
    auto res = check_index(p, *dvk.ntcf_td[i], *dvk.sfe_td[i],
                           *dvk.transcript[i], cert.d[i], cert.c[i]);
    if (!res.ok)
      return {false, "index " + std::to_string(i) + ": " + res.why};
  }
  return {true, ""};
}

PreparedVerifier::PreparedVerifier(const SklParams& p, const SklDvk& dvk)
    : p_(p), total_(int(dvk.in_s.size())) {
  for (size_t i = 0; i < dvk.in_s.size(); i++) {
    if (dvk.in_s[i]) continue;
    if (!dvk.transcript[i]) {
      transcript_ok_ = false;
      return;
    }
    Entry e;
    e.index = i;
    auto claw = ntcf_invert(*dvk.ntcf_td[i], dvk.transcript[i]->y);
    e.y_in_image = claw && claw->size() == 2;
    if (e.y_in_image) e.dx = (*claw)[0] ^ (*claw)[1];
    auto table = sfe_sta_rcv(p.lat, *dvk.sfe_td[i], dvk.transcript[i]->msg1);
    if (!table) {
      e.y_in_image = false;
    } else {
      for (size_t j = 0; j < size_t(p.w); j++)
        e.alpha_xor.push_back(table->alpha(j, 0) ^ table->alpha(j, 1));
    }
    entries_.push_back(std::move(e));
  }
}

bool PreparedVerifier::verify(const DeletionCert& cert) const {
  if (!transcript_ok_) return false;
  if (cert.d.size() != size_t(total_) || cert.c.size() != size_t(total_))
    return false;
  const size_t u = p_.block_bits();
  for (const Entry& e : entries_) {
    if (!e.y_in_image) return false;
    const BitVec& d = cert.d[e.index];
    const BitVec& c = cert.c[e.index];
    if (d.size() != size_t(p_.w) || c.size() != u * size_t(p_.w)) return false;
    BitVec corrected = d;
    for (size_t j = 0; j < size_t(p_.w); j++) {
      if (gf2_inner(c.slice(j * u, u), e.alpha_xor[j]) != 0)
        corrected.set(j, !corrected.get(j));
    }
    if (gf2_inner(corrected, e.dx) != 0) return false;
    if (corrected.is_zero()) return false;  // good-set: nonzero required
  }
  return true;
}

std::vector<uint8_t> skl_cert_serialize(const DeletionCert& cert) {
  std::vector<uint8_t> out;
  auto put_u32 = [&](uint32_t v) {
    for (int i = 0; i < 4; i++) out.push_back(uint8_t(v >> (8 * i)));
  };
  put_u32(uint32_t(cert.d.size()));
  for (size_t i = 0; i < cert.d.size(); i++) {
    put_u32(uint32_t(cert.d[i].size()));
    auto db = cert.d[i].to_bytes();
    out.insert(out.end(), db.begin(), db.end());
    put_u32(uint32_t(cert.c[i].size()));
    auto cb = cert.c[i].to_bytes();
    out.insert(out.end(), cb.begin(), cb.end());
  }
  return out;
}

DeletionCert skl_cert_deserialize(const std::vector<uint8_t>& in, size_t& pos) {
  auto get_u32 = [&]() {
    if (pos + 4 > in.size()) throw std::runtime_error("cert: truncated");
    uint32_t v = 0;
    for (int i = 0; i < 4; i++) v |= uint32_t(in[pos + i]) << (8 * i);
    pos += 4;
    return v;
  };
  auto get_bits = [&]() {
    uint32_t len = get_u32();
    size_t nbytes = (len + 7) / 8;
    if (pos + nbytes > in.size()) throw std::runtime_error("cert: truncated");
    std::vector<uint8_t> bytes(in.begin() + long(pos), in.begin() + long(pos + nbytes));
    pos += nbytes;
    return BitVec::from_bytes(bytes, len);
  };
  uint32_t total = get_u32();
  DeletionCert cert;
  for (uint32_t i = 0; i < total; i++) {
    cert.d.push_back(get_bits());
    cert.c.push_back(get_bits());
  }
  return cert;
}

}  // namespace skl
