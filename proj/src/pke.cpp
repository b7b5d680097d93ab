#include "skl/pke.hpp"

#include <stdexcept>

namespace skl {

const RegevParams& regev_params() {
  static const RegevParams p = [] {
    RegevParams r;
    r.q = Int("1073741789");  // 2^30 - 35, prime
    r.n = 32;
    r.m = 256;
    r.k = 30;
    r.sigma = 3;
    return r;
  }();
  return p;
}

size_t PkeScheme::dk_bits() const {
  if (kind == PkeKind::toy) return 64;
  return size_t(regev_params().n) * size_t(regev_params().k);
}

namespace {

const GaussSampler& regev_gauss() {
  static const GaussSampler g(regev_params().sigma, regev_params().m);
  return g;
}

PkeKeyPair toy_kg(SplitRng& rng) {
  PkeKeyPair kp;
  kp.dk.resize(8);
  rng.fill_bytes(kp.dk.data(), kp.dk.size());
  kp.ek = kp.dk;  // the mask key must be known to the encryptor
  return kp;
}

std::vector<uint8_t> toy_enc(const std::vector<uint8_t>& ek, int m, SplitRng& rng) {
  std::vector<uint8_t> ct(9);
  rng.fill_bytes(ct.data(), 8);  // nonce
  uint8_t pad;
  prf_hash(ek.data(), ek.size(), ct.data(), 8, &pad, 1);
  ct[8] = uint8_t((pad & 1) ^ (m & 1));
  return ct;
}

int toy_dec(const std::vector<uint8_t>& dk, const std::vector<uint8_t>& ct) {
  if (ct.size() != 9) throw std::runtime_error("toy pke: malformed ciphertext");
  uint8_t pad;
  prf_hash(dk.data(), dk.size(), ct.data(), 8, &pad, 1);
  return (pad & 1) ^ (ct[8] & 1);
}

PkeKeyPair regev_kg(SplitRng& rng) {
  const RegevParams& rp = regev_params();
  const Zq zq(rp.q);
  ModQMatrix A = uniform_mat(zq, rp.k, rp.n, rp.m, rng);
  ModQVector s = uniform_vec(zq, rp.k, rp.n, rng);
  ModQVector e = sample_gauss_vec(regev_gauss(), rp.m, rng.split("pke-noise"));
  ModQVector b = vec_add(zq, vec_mat(zq, s, A), e);
  PkeKeyPair kp;
  encode_mat(kp.ek, A);
  encode_vec(kp.ek, b);
  encode_vec(kp.dk, s);
  return kp;
}

std::vector<uint8_t> regev_enc(const std::vector<uint8_t>& ek, int m, SplitRng& rng) {
  const RegevParams& rp = regev_params();
  const Zq zq(rp.q);
  size_t pos = 0;
  ModQMatrix A = decode_mat(ek, pos);
  ModQVector b = decode_vec(ek, pos);
  ModQVector x(size_t(rp.m));
  for (auto& xi : x) xi = Int(rng.next_bit() ? 1 : 0);
  ModQVector c1 = mat_vec(zq, A, x);
  Int c2 = dot(zq, b, x);
  if (m & 1) c2 = zq.add(c2, rp.q / 2);
  std::vector<uint8_t> ct;
  encode_vec(ct, c1);
  encode_int(ct, c2);
  return ct;
}

int regev_dec(const std::vector<uint8_t>& dk, const std::vector<uint8_t>& ct) {
  const RegevParams& rp = regev_params();
  const Zq zq(rp.q);
  size_t pos = 0;
  ModQVector s = decode_vec(dk, pos);
  pos = 0;
  ModQVector c1 = decode_vec(ct, pos);
  Int c2 = decode_int(ct, pos);
  if (c1.size() != size_t(rp.n)) throw std::runtime_error("regev pke: malformed ciphertext");
  Int res = zq.sub(c2, dot(zq, s, c1));
  Int mag = res < 0 ? Int(-res) : res;
  return mag * 4 < rp.q ? 0 : 1;
}

}  // namespace

PkeKeyPair pke_kg(const PkeScheme& s, SplitRng& rng) {
  return s.kind == PkeKind::toy ? toy_kg(rng) : regev_kg(rng);
}

std::vector<uint8_t> pke_enc(const PkeScheme& s, const std::vector<uint8_t>& ek,
                             int m, SplitRng& rng) {
  return s.kind == PkeKind::toy ? toy_enc(ek, m, rng) : regev_enc(ek, m, rng);
}

int pke_dec(const PkeScheme& s, const std::vector<uint8_t>& dk,
            const std::vector<uint8_t>& ct) {
  return s.kind == PkeKind::toy ? toy_dec(dk, ct) : regev_dec(dk, ct);
}

}  // namespace skl
