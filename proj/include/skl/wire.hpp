#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "skl/skl_pke.hpp"
#include "skl/skl_prf.hpp"

namespace skl {

// Framed message format shared by the two-party channels and the on-disk
// key/cert/ciphertext files: tag, version, little-endian item count, then
// length-prefixed per-index blobs.

enum class MsgTag : uint8_t {
  keygen_msg1 = 0x01,
  keygen_msg2 = 0x02,
  cert = 0x03,
  ciphertext = 0x04,
  ni_bundle = 0x05,
  // file containers (not sent on protocol channels)
  file_ek = 0x10,
  file_msk = 0x11,
  file_dvk = 0x12,
  file_qdk = 0x13,
};

constexpr uint8_t kWireVersion = 1;

struct WireMessage {
  MsgTag tag = MsgTag::keygen_msg1;
  uint8_t version = kWireVersion;
  std::vector<std::vector<uint8_t>> items;
};

std::vector<uint8_t> encode_msg(const WireMessage& m);
WireMessage decode_msg(const std::vector<uint8_t>& bytes);

// ---- byte stream helpers ----

class ByteWriter {
 public:
  std::vector<uint8_t> out;
  void u8(uint8_t v) { out.push_back(v); }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; i++) out.push_back(uint8_t(v >> (8 * i)));
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; i++) out.push_back(uint8_t(v >> (8 * i)));
  }
  void bytes(const std::vector<uint8_t>& b) { out.insert(out.end(), b.begin(), b.end()); }
  void blob(const std::vector<uint8_t>& b) {
    u32(uint32_t(b.size()));
    bytes(b);
  }
  void str(const std::string& s) {
    u32(uint32_t(s.size()));
    out.insert(out.end(), s.begin(), s.end());
  }
  void bits(const BitVec& v) {
    u32(uint32_t(v.size()));
    bytes(v.to_bytes());
  }
  void wide(const Int& v) { encode_int(out, v); }
};

class ByteReader {
 public:
  ByteReader(const std::vector<uint8_t>& in, size_t pos = 0) : in_(in), pos_(pos) {}
  uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; i++) v |= uint32_t(in_[pos_ + size_t(i)]) << (8 * i);
    pos_ += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= uint64_t(in_[pos_ + size_t(i)]) << (8 * i);
    pos_ += 8;
    return v;
  }
  std::vector<uint8_t> bytes(size_t n) {
    need(n);
    std::vector<uint8_t> b(in_.begin() + long(pos_), in_.begin() + long(pos_ + n));
    pos_ += n;
    return b;
  }
  std::vector<uint8_t> blob() { return bytes(u32()); }
  std::string str() {
    auto b = blob();
    return std::string(b.begin(), b.end());
  }
  BitVec bits() {
    uint32_t len = u32();
    return BitVec::from_bytes(bytes((len + 7) / 8), len);
  }
  Int wide() { return decode_int(in_, pos_); }
  size_t pos() const { return pos_; }
  void seek(size_t p) {
    if (p > in_.size()) throw std::runtime_error("wire: bad seek");
    pos_ = p;
  }
  const std::vector<uint8_t>& raw() const { return in_; }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(size_t n) const {
    if (pos_ + n > in_.size()) throw std::runtime_error("wire: truncated");
  }
  const std::vector<uint8_t>& in_;
  size_t pos_;
};

// ---- protocol payload conversions ----

WireMessage msg1_to_wire(const SklMsg1Bundle& b);
SklMsg1Bundle msg1_from_wire(const WireMessage& m);
WireMessage msg2_to_wire(const SklMsg2Bundle& b);
SklMsg2Bundle msg2_from_wire(const WireMessage& m);
WireMessage cert_to_wire(const DeletionCert& c);
DeletionCert cert_from_wire(const WireMessage& m);
WireMessage ct_to_wire(const PkeSklCt& ct);
PkeSklCt ct_from_wire(const WireMessage& m);
WireMessage nict_to_wire(const NiCt& ct);
NiCt nict_from_wire(const WireMessage& m, const PkeScheme& base);

// ---- component serializers used by the file formats ----

void write_lattice_params(ByteWriter& w, const LatticeParams& p);
LatticeParams read_lattice_params(ByteReader& r);
void write_skl_params(ByteWriter& w, const SklParams& p);
SklParams read_skl_params(ByteReader& r);
void write_sfe_crs(ByteWriter& w, const SfeCrs& crs);
SfeCrs read_sfe_crs(ByteReader& r);
void write_sfe_td(ByteWriter& w, const SfeTrapdoor& td);
SfeTrapdoor read_sfe_td(ByteReader& r);
void write_public(ByteWriter& w, const SklPublic& pub);
SklPublic read_public(ByteReader& r);
void write_dvk(ByteWriter& w, const SklDvk& dvk);
SklDvk read_dvk(ByteReader& r);
void write_wpke_ek(ByteWriter& w, const WpkeEk& ek);
WpkeEk read_wpke_ek(ByteReader& r);
void write_wpke_ct(ByteWriter& w, const WpkeCt& ct);
WpkeCt read_wpke_ct(ByteReader& r);

// ---- file payloads for the CLI ----

std::vector<uint8_t> ek_file(const PkeSklScheme& s, const PkeSklEk& ek);
std::pair<PkeSklScheme, PkeSklEk> parse_ek_file(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> msk_file(const PkeSklScheme& s, const PkeSklMsk& msk);
std::pair<PkeSklScheme, PkeSklMsk> parse_msk_file(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> dvk_file(const PkeSklScheme& s, const SklDvk& dvk);
std::pair<PkeSklScheme, SklDvk> parse_dvk_file(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> qdk_file(const PkeSklScheme& s, const QuantumKey& key);
std::pair<PkeSklScheme, QuantumKey> parse_qdk_file(const std::vector<uint8_t>& bytes);

// digest of a byte string, for transcript comparison
std::string hex_digest(const std::vector<uint8_t>& bytes);

}  // namespace skl
