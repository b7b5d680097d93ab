#include "skl/wpke.hpp"

#include <stdexcept>

namespace skl {

std::pair<WpkeEk, WpkeMsk> wpke_kg(const PkeScheme& s, size_t ell, SplitRng& rng) {
  WpkeEk ek;
  WpkeMsk msk;
  ek.scheme = msk.scheme = s;
  ek.ell = msk.ell = ell;
  ek.eks.resize(2 * ell);
  msk.dks.resize(2 * ell);
  for (size_t i = 0; i < 2 * ell; i++) {
    SplitRng r = rng.split("wpke-kg", uint64_t(i));
    PkeKeyPair kp = pke_kg(s, r);
    ek.eks[i] = std::move(kp.ek);
    msk.dks[i] = std::move(kp.dk);
  }
  return {std::move(ek), std::move(msk)};
}

WpkeDk wpke_mark(const WpkeMsk& msk, const BitVec& x) {
  if (x.size() != msk.ell) throw std::invalid_argument("wpke_mark: mark length mismatch");
  WpkeDk dk;
  dk.x = x;
  dk.dks.resize(msk.ell);
  for (size_t j = 0; j < msk.ell; j++)
    dk.dks[j] = msk.dks[2 * j + (x.get(j) ? 1 : 0)];
  return dk;
}

WpkeCt wpke_enc(const WpkeEk& ek, const BitVec& m, SplitRng& rng) {
  if (m.size() != ek.ell) throw std::invalid_argument("wpke_enc: message length mismatch");
  WpkeCt ct;
  ct.cts.resize(2 * ek.ell);
  for (size_t j = 0; j < ek.ell; j++)
    for (int b = 0; b < 2; b++) {
      SplitRng r = rng.split("wpke-enc", uint64_t(2 * j + size_t(b)));
      ct.cts[2 * j + size_t(b)] = pke_enc(ek.scheme, ek.eks[2 * j + size_t(b)],
                                          m.get(j) ? 1 : 0, r);
    }
  return ct;
}

BitVec wpke_dec(const PkeScheme& s, const WpkeDk& dk, const WpkeCt& ct) {
  const size_t ell = dk.x.size();
  if (ct.cts.size() != 2 * ell) throw std::runtime_error("wpke_dec: malformed ciphertext");
  BitVec m(ell);
  for (size_t j = 0; j < ell; j++) {
    int b = dk.x.get(j) ? 1 : 0;
    m.set(j, pke_dec(s, dk.dks[j], ct.cts[2 * j + size_t(b)]) != 0);
  }
  return m;
}

BitVec wpke_dec_msk(const WpkeMsk& msk, const WpkeCt& ct) {
  if (ct.cts.size() != 2 * msk.ell)
    throw std::runtime_error("wpke_dec_msk: malformed ciphertext");
  BitVec m(msk.ell);
  for (size_t j = 0; j < msk.ell; j++)
    m.set(j, pke_dec(msk.scheme, msk.dks[2 * j], ct.cts[2 * j]) != 0);
  return m;
}

size_t wpke_dk_bits(const PkeScheme& s, size_t ell) {
  return ell + ell * s.dk_bits();
}

BitVec wpke_dk_to_bits(const PkeScheme& s, const WpkeDk& dk) {
  const size_t kb = s.dk_bits();
  BitVec out = dk.x;
  for (const auto& blob : dk.dks) {
    if (blob.size() * 8 != kb)
      throw std::invalid_argument("wpke_dk_to_bits: key width not fixed");
    out = out.concat(BitVec::from_bytes(blob, kb));
  }
  return out;
}

WpkeDk wpke_dk_from_bits(const PkeScheme& s, size_t ell, const BitVec& bits) {
  const size_t kb = s.dk_bits();
  if (bits.size() != ell + ell * kb)
    throw std::invalid_argument("wpke_dk_from_bits: length mismatch");
  WpkeDk dk;
  dk.x = bits.slice(0, ell);
  for (size_t j = 0; j < ell; j++)
    dk.dks.push_back(bits.slice(ell + j * kb, kb).to_bytes());
  return dk;
}

std::vector<BitVec> wpke_parallel_extract(const PkeScheme& s,
                                          const std::vector<WpkeEk>& eks,
                                          const WpkeDecryptor& decryptor,
                                          SplitRng& rng) {
  const size_t n = eks.size();
  std::vector<WpkeCt> cts(n);
  std::vector<BitVec> m0(n);  // payload planted on the 0-branch of each position
  for (size_t i = 0; i < n; i++) {
    const size_t ell = eks[i].ell;
    m0[i] = BitVec::random(ell, rng);
    cts[i].cts.resize(2 * ell);
    for (size_t j = 0; j < ell; j++)
      for (int b = 0; b < 2; b++) {
        int payload = (m0[i].get(j) ? 1 : 0) ^ b;  // branch 1 gets the complement
        SplitRng r = rng.split("wpke-ext", uint64_t(i * 1000 + 2 * j + size_t(b)));
        cts[i].cts[2 * j + size_t(b)] =
            pke_enc(s, eks[i].eks[2 * j + size_t(b)], payload, r);
      }
  }
  std::vector<BitVec> replies = decryptor(cts);
  if (replies.size() != n)
    throw std::runtime_error("wpke_parallel_extract: decryptor arity mismatch");
  std::vector<BitVec> marks(n);
  for (size_t i = 0; i < n; i++) {
    const size_t ell = eks[i].ell;
    if (replies[i].size() != ell)
      throw std::runtime_error("wpke_parallel_extract: reply length mismatch");
    BitVec x(ell);
    for (size_t j = 0; j < ell; j++)
      x.set(j, replies[i].get(j) != m0[i].get(j));
    marks[i] = std::move(x);
  }
  return marks;
}

}  // namespace skl
