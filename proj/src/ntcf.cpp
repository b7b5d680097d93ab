#include "skl/ntcf.hpp"

#include <cmath>
#include <stdexcept>

namespace skl {

namespace {

constexpr int kRounds = 4;

// round function: PRF(seed, round || value) truncated to `width` bits
uint64_t feistel_f(const std::array<uint8_t, 16>& seed, int round, uint64_t r,
                   int width) {
  uint8_t msg[9];
  msg[0] = uint8_t(round);
  for (int i = 0; i < 8; i++) msg[1 + i] = uint8_t(r >> (8 * i));
  uint8_t out[8];
  prf_hash(seed.data(), seed.size(), msg, sizeof msg, out, sizeof out);
  uint64_t v = 0;
  for (int i = 0; i < 8; i++) v |= uint64_t(out[i]) << (8 * i);
  return width == 64 ? v : (v & ((uint64_t(1) << width) - 1));
}

// balanced Feistel over `width` bits (width even, <= 64)
uint64_t feistel_fwd(const std::array<uint8_t, 16>& seed, uint64_t x, int width) {
  const int h = width / 2;
  const uint64_t mask = (uint64_t(1) << h) - 1;
  uint64_t l = x & mask, r = (x >> h) & mask;
  for (int round = 0; round < kRounds; round++) {
    uint64_t nl = r;
    uint64_t nr = l ^ feistel_f(seed, round, r, h);
    l = nl;
    r = nr;
  }
  return l | (r << h);
}

uint64_t feistel_inv(const std::array<uint8_t, 16>& seed, uint64_t y, int width) {
  const int h = width / 2;
  const uint64_t mask = (uint64_t(1) << h) - 1;
  uint64_t l = y & mask, r = (y >> h) & mask;
  for (int round = kRounds - 1; round >= 0; round--) {
    uint64_t pr = l;
    uint64_t pl = r ^ feistel_f(seed, round, pr, h);
    l = pl;
    r = pr;
  }
  return l | (r << h);
}

// odd widths run a (w+1)-bit Feistel with cycle walking
uint64_t perm_fwd(const std::array<uint8_t, 16>& seed, uint64_t x, int w) {
  if (w % 2 == 0) return feistel_fwd(seed, x, w);
  const uint64_t lim = uint64_t(1) << w;
  uint64_t v = x;
  do {
    v = feistel_fwd(seed, v, w + 1);
  } while (v >= lim);
  return v;
}

uint64_t perm_inv(const std::array<uint8_t, 16>& seed, uint64_t y, int w) {
  if (w % 2 == 0) return feistel_inv(seed, y, w);
  const uint64_t lim = uint64_t(1) << w;
  uint64_t v = y;
  do {
    v = feistel_inv(seed, v, w + 1);
  } while (v >= lim);
  return v;
}

BitVec derive_delta(const std::array<uint8_t, 16>& seed, int w) {
  for (uint8_t ctr = 0;; ctr++) {
    uint8_t msg[7] = {'d', 'e', 'l', 't', 'a', 0, ctr};
    uint8_t out[8];
    prf_hash(seed.data(), seed.size(), msg, sizeof msg, out, sizeof out);
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= uint64_t(out[i]) << (8 * i);
    if (w < 64) v &= (uint64_t(1) << w) - 1;
    if (v != 0) return BitVec::from_u64(v, size_t(w));
  }
}

void check_w(const NtcfPp& pp, const BitVec& x) {
  if (int(x.size()) != pp.w) throw std::invalid_argument("ntcf: bad input width");
}

}  // namespace

std::pair<NtcfPp, NtcfTd> ntcf_func_gen(int w, NtcfMode mode, SplitRng& rng) {
  if (w < 2 || w > 62) throw std::invalid_argument("ntcf_func_gen: need 2 <= w <= 62");
  NtcfPp pp;
  pp.w = w;
  pp.mode = mode;
  rng.fill_bytes(pp.seed.data(), pp.seed.size());
  NtcfTd td;
  td.pp = pp;
  if (mode == NtcfMode::two_to_one) td.delta = derive_delta(pp.seed, w);
  return {pp, td};
}

BitVec ntcf_perm(const NtcfPp& pp, const BitVec& x) {
  check_w(pp, x);
  return BitVec::from_u64(perm_fwd(pp.seed, x.to_u64(), pp.w), size_t(pp.w));
}

BitVec ntcf_perm_inv(const NtcfPp& pp, const BitVec& y) {
  check_w(pp, y);
  return BitVec::from_u64(perm_inv(pp.seed, y.to_u64(), pp.w), size_t(pp.w));
}

BitVec ntcf_eval(const NtcfPp& pp, const BitVec& x) {
  check_w(pp, x);
  if (pp.mode == NtcfMode::injective) return ntcf_perm(pp, x);
  BitVec delta = derive_delta(pp.seed, pp.w);
  BitVec alt = x ^ delta;
  return ntcf_perm(pp, alt < x ? alt : x);
}

bool ntcf_chk(const NtcfPp& pp, const BitVec& x, const BitVec& y) {
  if (int(x.size()) != pp.w || int(y.size()) != pp.w) return false;
  return ntcf_eval(pp, x) == y;
}

std::vector<BitVec> ntcf_preimages(const NtcfPp& pp, const BitVec& y) {
  if (int(y.size()) != pp.w) return {};
  BitVec x0 = ntcf_perm_inv(pp, y);
  if (pp.mode == NtcfMode::injective) return {x0};
  BitVec delta = derive_delta(pp.seed, pp.w);
  BitVec alt = x0 ^ delta;
  if (alt < x0) return {};  // y outside the 2-to-1 image
  return {x0, alt};
}

std::optional<std::vector<BitVec>> ntcf_invert(const NtcfTd& td, const BitVec& y) {
  const NtcfPp& pp = td.pp;
  check_w(pp, y);
  BitVec x = ntcf_perm_inv(pp, y);
  if (pp.mode == NtcfMode::injective) return std::vector<BitVec>{x};
  BitVec alt = x ^ td.delta;
  if (alt < x) return std::nullopt;  // y outside the 2-to-1 image
  return std::vector<BitVec>{x, alt};
}

bool ntcf_good_set(const NtcfTd& td, const BitVec& y, const BitVec& d) {
  if (int(d.size()) != td.pp.w || int(y.size()) != td.pp.w) return false;
  if (d.is_zero()) return false;
  return ntcf_invert(td, y).has_value();
}

std::pair<BitVec, BranchState> ntcf_state_gen(const NtcfPp& pp, const NtcfTd& god,
                                              SplitRng& rng) {
  if (god.pp.seed != pp.seed || god.pp.mode != pp.mode || god.pp.w != pp.w)
    throw std::invalid_argument("ntcf_state_gen: trapdoor does not match pp");
  BitVec x = BitVec::random(size_t(pp.w), rng);
  if (pp.mode == NtcfMode::injective) {
    BitVec y = ntcf_perm(pp, x);
    BranchState::Branch b;
    b.amp = 1.0;
    b.regs.emplace_back("x", x);
    return {y, BranchState::make({std::move(b)})};
  }
  BitVec alt = x ^ god.delta;
  BitVec x0 = alt < x ? alt : x;
  BitVec x1 = x0 ^ god.delta;
  BitVec y = ntcf_perm(pp, x0);
  const double a = 1.0 / std::sqrt(2.0);
  BranchState::Branch b0, b1;
  b0.amp = a;
  b0.regs.emplace_back("x", x0);
  b1.amp = a;
  b1.regs.emplace_back("x", x1);
  return {y, BranchState::make({std::move(b0), std::move(b1)})};
}

// ---- serialization ----

std::vector<uint8_t> NtcfPp::serialize() const {
  std::vector<uint8_t> out;
  out.push_back(0xA0);
  out.push_back(uint8_t(w));
  out.push_back(uint8_t(mode));
  out.insert(out.end(), seed.begin(), seed.end());
  return out;
}

NtcfPp NtcfPp::deserialize(const std::vector<uint8_t>& in, size_t& pos) {
  if (pos + 3 + 16 > in.size()) throw std::runtime_error("NtcfPp: truncated");
  if (in[pos] != 0xA0) throw std::runtime_error("NtcfPp: bad tag");
  NtcfPp pp;
  pp.w = in[pos + 1];
  pp.mode = NtcfMode(in[pos + 2]);
  if (pp.mode != NtcfMode::injective && pp.mode != NtcfMode::two_to_one)
    throw std::runtime_error("NtcfPp: bad mode");
  std::copy(in.begin() + long(pos + 3), in.begin() + long(pos + 3 + 16),
            pp.seed.begin());
  pos += 3 + 16;
  return pp;
}

std::vector<uint8_t> NtcfTd::serialize() const {
  std::vector<uint8_t> out = pp.serialize();
  out.push_back(delta.empty() ? 0 : 1);
  if (!delta.empty()) {
    auto bytes = delta.to_bytes();
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
  return out;
}

NtcfTd NtcfTd::deserialize(const std::vector<uint8_t>& in, size_t& pos) {
  NtcfTd td;
  td.pp = NtcfPp::deserialize(in, pos);
  if (pos >= in.size()) throw std::runtime_error("NtcfTd: truncated");
  uint8_t has = in[pos++];
  if (has) {
    size_t nbytes = (size_t(td.pp.w) + 7) / 8;
    if (pos + nbytes > in.size()) throw std::runtime_error("NtcfTd: truncated");
    std::vector<uint8_t> bytes(in.begin() + long(pos), in.begin() + long(pos + nbytes));
    pos += nbytes;
    td.delta = BitVec::from_bytes(bytes, size_t(td.pp.w));
  }
  return td;
}

}  // namespace skl
