#include "skl/wupf.hpp"

#include <stdexcept>

namespace skl {

std::pair<TeprfKey, TeprfKey> teprf_kg(size_t ell, const BitVec& s_star,
                                       SplitRng& rng) {
  if (s_star.size() != ell) throw std::invalid_argument("teprf_kg: bad s*");
  TeprfKey k0, k1;
  rng.fill_bytes(k0.seed.data(), k0.seed.size());
  k1.seed = k0.seed;
  k0.s_star = k1.s_star = s_star;
  k0.v = int(rng.next_bit());
  k1.v = 1 - k0.v;
  return {std::move(k0), std::move(k1)};
}

int teprf_eval(const TeprfKey& key, const BitVec& s) {
  if (s.size() != key.s_star.size())
    throw std::invalid_argument("teprf_eval: input length mismatch");
  if (s == key.s_star) return key.v;
  auto bytes = s.to_bytes();
  uint8_t out;
  prf_hash(key.seed.data(), key.seed.size(), bytes.data(), bytes.size(), &out, 1);
  return out & 1;
}

std::pair<WupfMsk, WupfXk> wupf_kg(size_t w, size_t ell, SplitRng& rng) {
  WupfMsk msk;
  WupfXk xk;
  msk.w = xk.w = w;
  msk.ell = xk.ell = ell;
  msk.c = BitVec::random(w, rng);
  xk.c = msk.c;
  for (size_t j = 0; j < w; j++) {
    BitVec s_star = BitVec::random(ell, rng);
    auto [k0, k1] = teprf_kg(ell, s_star, rng);
    msk.keys.push_back({k0, k1});
    xk.keys.push_back({std::move(k0), std::move(k1)});
    xk.s_stars.push_back(std::move(s_star));
  }
  return {std::move(msk), std::move(xk)};
}

WupfKey wupf_mark(const WupfMsk& msk, const BitVec& x) {
  if (x.size() != msk.w) throw std::invalid_argument("wupf_mark: mark length mismatch");
  WupfKey key;
  for (size_t j = 0; j < msk.w; j++)
    key.keys.push_back(msk.keys[j][size_t(x.get(j) != msk.c.get(j))]);
  return key;
}

BitVec wupf_eval_msk(const WupfMsk& msk, const BitVec& s) {
  if (s.size() != msk.w * msk.ell)
    throw std::invalid_argument("wupf_eval: input length mismatch");
  BitVec t(msk.w);
  for (size_t j = 0; j < msk.w; j++)
    t.set(j, teprf_eval(msk.keys[j][0], s.slice(j * msk.ell, msk.ell)) != 0);
  return t;
}

BitVec wupf_eval_key(const WupfKey& key, size_t ell, const BitVec& s) {
  const size_t w = key.keys.size();
  if (s.size() != w * ell)
    throw std::invalid_argument("wupf_eval: input length mismatch");
  BitVec t(w);
  for (size_t j = 0; j < w; j++)
    t.set(j, teprf_eval(key.keys[j], s.slice(j * ell, ell)) != 0);
  return t;
}

WupfKey wupf_sim(size_t w, size_t ell, SplitRng& rng) {
  BitVec c_star = BitVec::random(w, rng);
  WupfKey key;
  for (size_t j = 0; j < w; j++) {
    BitVec s_star = BitVec::random(ell, rng);
    auto [k0, k1] = teprf_kg(ell, s_star, rng);
    key.keys.push_back(c_star.get(j) ? std::move(k1) : std::move(k0));
  }
  return key;
}

size_t wupf_key_bits(size_t w, size_t ell) { return w * (64 + ell + 1); }

BitVec wupf_key_to_bits(const WupfKey& key, size_t ell) {
  BitVec out;
  for (const auto& k : key.keys) {
    std::vector<uint8_t> seed(k.seed.begin(), k.seed.end());
    out = out.concat(BitVec::from_bytes(seed, 64));
    if (k.s_star.size() != ell)
      throw std::invalid_argument("wupf_key_to_bits: s* width mismatch");
    out = out.concat(k.s_star);
    out = out.concat(BitVec::from_u64(uint64_t(k.v), 1));
  }
  return out;
}

WupfKey wupf_key_from_bits(size_t w, size_t ell, const BitVec& bits) {
  if (bits.size() != wupf_key_bits(w, ell))
    throw std::invalid_argument("wupf_key_from_bits: length mismatch");
  WupfKey key;
  const size_t stride = 64 + ell + 1;
  for (size_t j = 0; j < w; j++) {
    TeprfKey k;
    auto seed = bits.slice(j * stride, 64).to_bytes();
    std::copy(seed.begin(), seed.end(), k.seed.begin());
    k.s_star = bits.slice(j * stride + 64, ell);
    k.v = bits.get(j * stride + 64 + ell) ? 1 : 0;
    key.keys.push_back(std::move(k));
  }
  return key;
}

std::vector<BitVec> wupf_parallel_extract(const std::vector<WupfXk>& xks,
                                          const WupfPredictor& predictor) {
  const size_t n = xks.size();
  std::vector<BitVec> challenges(n);
  for (size_t i = 0; i < n; i++) {
    BitVec s;
    for (const auto& st : xks[i].s_stars) s = s.concat(st);
    challenges[i] = std::move(s);
  }
  std::vector<BitVec> replies = predictor(challenges);
  if (replies.size() != n)
    throw std::runtime_error("wupf_parallel_extract: predictor arity mismatch");
  std::vector<BitVec> marks(n);
  for (size_t i = 0; i < n; i++) {
    const WupfXk& xk = xks[i];
    if (replies[i].size() != xk.w)
      throw std::runtime_error("wupf_parallel_extract: reply length mismatch");
    BitVec x(xk.w);
    for (size_t j = 0; j < xk.w; j++) {
      int d = replies[i].get(j) == (teprf_eval(xk.keys[j][0], xk.s_stars[j]) != 0)
                  ? 0
                  : 1;
      x.set(j, (d ^ (xk.c.get(j) ? 1 : 0)) != 0);
    }
    marks[i] = std::move(x);
  }
  return marks;
}

BitVec wupf_plain_eval(const WupfPlainKey& key, size_t w, size_t ell,
                       const BitVec& s) {
  BitVec base = wupf_eval_key(key.key, ell, s);
  auto bytes = s.to_bytes();
  std::vector<uint8_t> out((w + 7) / 8);
  prf_hash(key.aux.data(), key.aux.size(), bytes.data(), bytes.size(),
           out.data(), out.size());
  BitVec extra = BitVec::from_bytes(out, (out.size()) * 8).slice(0, w);
  return base.concat(extra);
}

}  // namespace skl
