#include "skl/wire.hpp"

namespace skl {

std::vector<uint8_t> encode_msg(const WireMessage& m) {
  ByteWriter w;
  w.u8(uint8_t(m.tag));
  w.u8(m.version);
  w.u32(uint32_t(m.items.size()));
  for (const auto& it : m.items) w.blob(it);
  return std::move(w.out);
}

WireMessage decode_msg(const std::vector<uint8_t>& bytes) {
  ByteReader r(bytes);
  WireMessage m;
  uint8_t tag = r.u8();
  switch (tag) {
    case 0x01: case 0x02: case 0x03: case 0x04: case 0x05:
    case 0x10: case 0x11: case 0x12: case 0x13:
      m.tag = MsgTag(tag);
      break;
    default:
      throw std::runtime_error("wire: unknown tag");
  }
  m.version = r.u8();
  if (m.version != kWireVersion) throw std::runtime_error("wire: unknown version");
  uint32_t count = r.u32();
  for (uint32_t i = 0; i < count; i++) m.items.push_back(r.blob());
  if (!r.done()) throw std::runtime_error("wire: trailing bytes");
  return m;
}

// ---- protocol payload conversions ----

WireMessage msg1_to_wire(const SklMsg1Bundle& b) {
  WireMessage m;
  m.tag = MsgTag::keygen_msg1;
  for (size_t i = 0; i < b.y.size(); i++) {
    ByteWriter w;
    w.bits(b.y[i]);
    w.bytes(sfe_msg1_serialize(b.msg1[i]));
    m.items.push_back(std::move(w.out));
  }
  return m;
}

SklMsg1Bundle msg1_from_wire(const WireMessage& m) {
  if (m.tag != MsgTag::keygen_msg1) throw std::runtime_error("wire: tag mismatch");
  SklMsg1Bundle b;
  for (const auto& it : m.items) {
    ByteReader r(it);
    b.y.push_back(r.bits());
    size_t pos = r.pos();
    b.msg1.push_back(sfe_msg1_deserialize(it, pos));
    if (pos != it.size()) throw std::runtime_error("wire: trailing bytes in item");
  }
  return b;
}

WireMessage msg2_to_wire(const SklMsg2Bundle& b) {
  WireMessage m;
  m.tag = MsgTag::keygen_msg2;
  for (const auto& m2 : b.msg2) m.items.push_back(sfe_msg2_serialize(m2));
  return m;
}

SklMsg2Bundle msg2_from_wire(const WireMessage& m) {
  if (m.tag != MsgTag::keygen_msg2) throw std::runtime_error("wire: tag mismatch");
  SklMsg2Bundle b;
  for (const auto& it : m.items) {
    size_t pos = 0;
    b.msg2.push_back(sfe_msg2_deserialize(it, pos));
    if (pos != it.size()) throw std::runtime_error("wire: trailing bytes in item");
  }
  return b;
}

WireMessage cert_to_wire(const DeletionCert& c) {
  WireMessage m;
  m.tag = MsgTag::cert;
  for (size_t i = 0; i < c.d.size(); i++) {
    ByteWriter w;
    w.bits(c.d[i]);
    w.bits(c.c[i]);
    m.items.push_back(std::move(w.out));
  }
  return m;
}

DeletionCert cert_from_wire(const WireMessage& m) {
  if (m.tag != MsgTag::cert) throw std::runtime_error("wire: tag mismatch");
  DeletionCert c;
  for (const auto& it : m.items) {
    ByteReader r(it);
    c.d.push_back(r.bits());
    c.c.push_back(r.bits());
    if (!r.done()) throw std::runtime_error("wire: trailing bytes in item");
  }
  return c;
}

void write_wpke_ct(ByteWriter& w, const WpkeCt& ct) {
  w.u32(uint32_t(ct.cts.size()));
  for (const auto& b : ct.cts) w.blob(b);
}

WpkeCt read_wpke_ct(ByteReader& r) {
  WpkeCt ct;
  uint32_t n = r.u32();
  for (uint32_t i = 0; i < n; i++) ct.cts.push_back(r.blob());
  return ct;
}

WireMessage ct_to_wire(const PkeSklCt& ct) {
  WireMessage m;
  m.tag = MsgTag::ciphertext;
  for (const auto& wct : ct.cts) {
    ByteWriter w;
    write_wpke_ct(w, wct);
    m.items.push_back(std::move(w.out));
  }
  return m;
}

PkeSklCt ct_from_wire(const WireMessage& m) {
  if (m.tag != MsgTag::ciphertext) throw std::runtime_error("wire: tag mismatch");
  PkeSklCt ct;
  for (const auto& it : m.items) {
    ByteReader r(it);
    ct.cts.push_back(read_wpke_ct(r));
    if (!r.done()) throw std::runtime_error("wire: trailing bytes in item");
  }
  return ct;
}

void write_wpke_ek(ByteWriter& w, const WpkeEk& ek) {
  w.u8(uint8_t(ek.scheme.kind));
  w.u32(uint32_t(ek.ell));
  w.u32(uint32_t(ek.eks.size()));
  for (const auto& b : ek.eks) w.blob(b);
}

WpkeEk read_wpke_ek(ByteReader& r) {
  WpkeEk ek;
  ek.scheme.kind = PkeKind(r.u8());
  ek.ell = r.u32();
  uint32_t n = r.u32();
  for (uint32_t i = 0; i < n; i++) ek.eks.push_back(r.blob());
  return ek;
}

WireMessage nict_to_wire(const NiCt& ct) {
  WireMessage m;
  m.tag = MsgTag::ni_bundle;
  for (size_t i = 0; i < ct.wpke_eks.size(); i++) {
    ByteWriter w;
    write_wpke_ek(w, ct.wpke_eks[i]);
    w.bytes(sfe_msg2_serialize(ct.msg2.msg2[i]));
    write_wpke_ct(w, ct.inner.cts[i]);
    m.items.push_back(std::move(w.out));
  }
  return m;
}

NiCt nict_from_wire(const WireMessage& m, const PkeScheme& base) {
  if (m.tag != MsgTag::ni_bundle) throw std::runtime_error("wire: tag mismatch");
  NiCt ct;
  for (const auto& it : m.items) {
    ByteReader r(it);
    WpkeEk ek = read_wpke_ek(r);
    if (ek.scheme.kind != base.kind)
      throw std::runtime_error("wire: base scheme mismatch");
    ct.wpke_eks.push_back(std::move(ek));
    size_t pos = r.pos();
    ct.msg2.msg2.push_back(sfe_msg2_deserialize(it, pos));
    ByteReader r2(it, pos);
    ct.inner.cts.push_back(read_wpke_ct(r2));
    if (!r2.done()) throw std::runtime_error("wire: trailing bytes in item");
  }
  return ct;
}

// ---- component serializers ----

void write_lattice_params(ByteWriter& w, const LatticeParams& p) {
  w.str(p.name);
  w.u32(uint32_t(p.n));
  w.u32(uint32_t(p.m));
  w.u32(uint32_t(p.k));
  w.wide(p.q);
  w.u64(uint64_t(p.sigma));
  w.u64(uint64_t(p.sigma_prime));
  w.wide(p.tau);
  w.u64(uint64_t(p.trap_c * 1000));
  w.u8(p.messy_enabled ? 1 : 0);
}

LatticeParams read_lattice_params(ByteReader& r) {
  LatticeParams p;
  p.name = r.str();
  p.n = int(r.u32());
  p.m = int(r.u32());
  p.k = int(r.u32());
  p.q = r.wide();
  p.sigma = int64_t(r.u64());
  p.sigma_prime = int64_t(r.u64());
  p.tau = r.wide();
  p.trap_c = double(r.u64()) / 1000.0;
  p.messy_enabled = r.u8() != 0;
  p.validate();
  return p;
}

void write_skl_params(ByteWriter& w, const SklParams& p) {
  w.u32(uint32_t(p.n));
  w.u32(uint32_t(p.w));
  w.u32(uint32_t(p.payload_bits));
  write_lattice_params(w, p.lat);
}

SklParams read_skl_params(ByteReader& r) {
  SklParams p;
  p.n = int(r.u32());
  p.w = int(r.u32());
  p.payload_bits = int(r.u32());
  p.lat = read_lattice_params(r);
  return p;
}

static void write_sign_matrix(ByteWriter& w, const SignMatrix& m) {
  w.u32(uint32_t(m.rows));
  w.u32(uint32_t(m.cols));
  for (int8_t v : m.a) w.u8(uint8_t(v + 1));
}

static SignMatrix read_sign_matrix(ByteReader& r) {
  uint32_t rows = r.u32(), cols = r.u32();
  SignMatrix m(rows, cols);
  for (auto& v : m.a) {
    uint8_t b = r.u8();
    if (b > 2) throw std::runtime_error("wire: bad sign entry");
    v = int8_t(int(b) - 1);
  }
  return m;
}

void write_sfe_crs(ByteWriter& w, const SfeCrs& crs) {
  w.u32(uint32_t(crs.ots.size()));
  for (const auto& ot : crs.ots) {
    encode_mat(w.out, ot.A);
    encode_vec(w.out, ot.v);
  }
}

SfeCrs read_sfe_crs(ByteReader& r) {
  SfeCrs crs;
  uint32_t n = r.u32();
  for (uint32_t i = 0; i < n; i++) {
    OtCrs ot;
    // decode against the raw buffer via a positional scan
    size_t pos = r.pos();
    ot.A = decode_mat(r.raw(), pos);
    ot.v = decode_vec(r.raw(), pos);
    r.seek(pos);
    crs.ots.push_back(std::move(ot));
  }
  return crs;
}

void write_sfe_td(ByteWriter& w, const SfeTrapdoor& td) {
  w.u32(uint32_t(td.mode));
  w.u32(uint32_t(td.ots.size()));
  for (const auto& ot : td.ots) {
    encode_mat(w.out, ot.gt.A);
    write_sign_matrix(w, ot.gt.R);
    encode_vec(w.out, ot.v);
    w.u32(uint32_t(ot.mode));
  }
}

SfeTrapdoor read_sfe_td(ByteReader& r) {
  SfeTrapdoor td;
  td.mode = int(r.u32());
  uint32_t n = r.u32();
  for (uint32_t i = 0; i < n; i++) {
    OtTrapdoor ot;
    size_t pos = r.pos();
    ot.gt.A = decode_mat(r.raw(), pos);
    r.seek(pos);
    ot.gt.R = read_sign_matrix(r);
    pos = r.pos();
    ot.v = decode_vec(r.raw(), pos);
    r.seek(pos);
    ot.mode = int(r.u32());
    td.ots.push_back(std::move(ot));
  }
  return td;
}

void write_public(ByteWriter& w, const SklPublic& pub) {
  w.u32(uint32_t(pub.inst.size()));
  for (const auto& inst : pub.inst) {
    w.blob(inst.ntcf_pp.serialize());
    write_sfe_crs(w, inst.sfe_crs);
  }
}

SklPublic read_public(ByteReader& r) {
  SklPublic pub;
  uint32_t n = r.u32();
  for (uint32_t i = 0; i < n; i++) {
    SklInstance inst;
    auto blob = r.blob();
    size_t pos = 0;
    inst.ntcf_pp = NtcfPp::deserialize(blob, pos);
    inst.sfe_crs = read_sfe_crs(r);
    pub.inst.push_back(std::move(inst));
  }
  return pub;
}

void write_dvk(ByteWriter& w, const SklDvk& dvk) {
  w.u32(uint32_t(dvk.n));
  w.u32(uint32_t(dvk.w));
  w.u32(uint32_t(dvk.in_s.size()));
  for (size_t i = 0; i < dvk.in_s.size(); i++) {
    w.u8(dvk.in_s[i] ? 1 : 0);
    if (!dvk.in_s[i]) {
      w.blob(dvk.ntcf_td[i]->serialize());
      write_sfe_td(w, *dvk.sfe_td[i]);
    }
    w.u8(dvk.transcript[i] ? 1 : 0);
    if (dvk.transcript[i]) {
      w.bits(dvk.transcript[i]->y);
      w.bytes(sfe_msg1_serialize(dvk.transcript[i]->msg1));
    }
  }
}

SklDvk read_dvk(ByteReader& r) {
  SklDvk dvk;
  dvk.n = int(r.u32());
  dvk.w = int(r.u32());
  uint32_t total = r.u32();
  dvk.in_s.resize(total);
  dvk.ntcf_td.resize(total);
  dvk.sfe_td.resize(total);
  dvk.transcript.resize(total);
  for (uint32_t i = 0; i < total; i++) {
    dvk.in_s[i] = r.u8() != 0;
    if (!dvk.in_s[i]) {
      auto blob = r.blob();
      size_t pos = 0;
      dvk.ntcf_td[i] = NtcfTd::deserialize(blob, pos);
      dvk.sfe_td[i] = read_sfe_td(r);
    }
    if (r.u8()) {
      SklTranscriptEntry e;
      e.y = r.bits();
      size_t pos = r.pos();
      e.msg1 = sfe_msg1_deserialize(r.raw(), pos);
      r.seek(pos);
      dvk.transcript[i] = std::move(e);
    }
  }
  return dvk;
}

// ---- file payloads ----

static void write_scheme(ByteWriter& w, const PkeSklScheme& s) {
  write_skl_params(w, s.params);
  w.u8(uint8_t(s.base.kind));
  w.u32(uint32_t(s.ell));
}

static PkeSklScheme read_scheme(ByteReader& r) {
  PkeSklScheme s;
  s.params = read_skl_params(r);
  s.base.kind = PkeKind(r.u8());
  s.ell = r.u32();
  return s;
}

std::vector<uint8_t> ek_file(const PkeSklScheme& s, const PkeSklEk& ek) {
  ByteWriter w;
  write_scheme(w, s);
  write_public(w, ek.pub);
  w.u32(uint32_t(ek.wpke.size()));
  for (const auto& e : ek.wpke) write_wpke_ek(w, e);
  WireMessage m;
  m.tag = MsgTag::file_ek;
  m.items.push_back(std::move(w.out));
  return encode_msg(m);
}

std::pair<PkeSklScheme, PkeSklEk> parse_ek_file(const std::vector<uint8_t>& bytes) {
  WireMessage m = decode_msg(bytes);
  if (m.tag != MsgTag::file_ek || m.items.size() != 1)
    throw std::runtime_error("ek file: bad frame");
  ByteReader r(m.items[0]);
  PkeSklScheme s = read_scheme(r);
  PkeSklEk ek;
  ek.pub = read_public(r);
  uint32_t n = r.u32();
  for (uint32_t i = 0; i < n; i++) ek.wpke.push_back(read_wpke_ek(r));
  return {std::move(s), std::move(ek)};
}

std::vector<uint8_t> msk_file(const PkeSklScheme& s, const PkeSklMsk& msk) {
  ByteWriter w;
  write_scheme(w, s);
  w.u32(uint32_t(msk.wpke.size()));
  for (const auto& m : msk.wpke) {
    w.u8(uint8_t(m.scheme.kind));
    w.u32(uint32_t(m.ell));
    w.u32(uint32_t(m.dks.size()));
    for (const auto& b : m.dks) w.blob(b);
  }
  WireMessage m;
  m.tag = MsgTag::file_msk;
  m.items.push_back(std::move(w.out));
  return encode_msg(m);
}

std::pair<PkeSklScheme, PkeSklMsk> parse_msk_file(const std::vector<uint8_t>& bytes) {
  WireMessage m = decode_msg(bytes);
  if (m.tag != MsgTag::file_msk || m.items.size() != 1)
    throw std::runtime_error("msk file: bad frame");
  ByteReader r(m.items[0]);
  PkeSklScheme s = read_scheme(r);
  PkeSklMsk msk;
  uint32_t n = r.u32();
  for (uint32_t i = 0; i < n; i++) {
    WpkeMsk wm;
    wm.scheme.kind = PkeKind(r.u8());
    wm.ell = r.u32();
    uint32_t nk = r.u32();
    for (uint32_t j = 0; j < nk; j++) wm.dks.push_back(r.blob());
    msk.wpke.push_back(std::move(wm));
  }
  return {std::move(s), std::move(msk)};
}

std::vector<uint8_t> dvk_file(const PkeSklScheme& s, const SklDvk& dvk) {
  ByteWriter w;
  write_scheme(w, s);
  write_dvk(w, dvk);
  WireMessage m;
  m.tag = MsgTag::file_dvk;
  m.items.push_back(std::move(w.out));
  return encode_msg(m);
}

std::pair<PkeSklScheme, SklDvk> parse_dvk_file(const std::vector<uint8_t>& bytes) {
  WireMessage m = decode_msg(bytes);
  if (m.tag != MsgTag::file_dvk || m.items.size() != 1)
    throw std::runtime_error("dvk file: bad frame");
  ByteReader r(m.items[0]);
  PkeSklScheme s = read_scheme(r);
  SklDvk dvk = read_dvk(r);
  return {std::move(s), std::move(dvk)};
}

std::vector<uint8_t> qdk_file(const PkeSklScheme& s, const QuantumKey& key) {
  ByteWriter w;
  write_scheme(w, s);
  w.u32(uint32_t(key.states.size()));
  for (const auto& st : key.states) w.blob(st.serialize());
  for (const auto& m2 : key.msg2.msg2) w.blob(sfe_msg2_serialize(m2));
  WireMessage m;
  m.tag = MsgTag::file_qdk;
  m.items.push_back(std::move(w.out));
  return encode_msg(m);
}

std::pair<PkeSklScheme, QuantumKey> parse_qdk_file(const std::vector<uint8_t>& bytes) {
  WireMessage m = decode_msg(bytes);
  if (m.tag != MsgTag::file_qdk || m.items.size() != 1)
    throw std::runtime_error("qdk file: bad frame");
  ByteReader r(m.items[0]);
  PkeSklScheme s = read_scheme(r);
  QuantumKey key;
  uint32_t n = r.u32();
  for (uint32_t i = 0; i < n; i++) {
    auto blob = r.blob();
    size_t pos = 0;
    key.states.push_back(BranchState::deserialize(blob, pos));
  }
  for (uint32_t i = 0; i < n; i++) {
    auto blob = r.blob();
    size_t pos = 0;
    key.msg2.msg2.push_back(sfe_msg2_deserialize(blob, pos));
  }
  return {std::move(s), std::move(key)};
}

std::string hex_digest(const std::vector<uint8_t>& bytes) {
  auto h = prf_hash32(nullptr, 0, bytes.data(), bytes.size());
  static const char* hexd = "0123456789abcdef";
  std::string out;
  for (int i = 0; i < 16; i++) {
    out.push_back(hexd[h[size_t(i)] >> 4]);
    out.push_back(hexd[h[size_t(i)] & 15]);
  }
  return out;
}

}  // namespace skl
