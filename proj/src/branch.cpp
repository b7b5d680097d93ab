#include "skl/branch.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace skl {

const BitVec& BranchState::Branch::reg(std::string_view name) const {
  for (const auto& [n, v] : regs)
    if (n == name) return v;
  throw std::out_of_range("BranchState: no register named " + std::string(name));
}

bool BranchState::Branch::has_reg(std::string_view name) const {
  for (const auto& [n, v] : regs)
    if (n == name) return true;
  return false;
}

static BitVec concat_regs(const BranchState::Branch& b) {
  BitVec out;
  for (const auto& [n, v] : b.regs) out = out.concat(v);
  return out;
}

BranchState BranchState::make(std::vector<Branch> branches) {
  if (branches.empty() || branches.size() > kMaxBranches)
    throw std::invalid_argument("BranchState: branch count must be 1 or 2");
  // identical register layout
  for (size_t i = 1; i < branches.size(); i++) {
    if (branches[i].regs.size() != branches[0].regs.size())
      throw std::invalid_argument("BranchState: register count mismatch");
    for (size_t r = 0; r < branches[0].regs.size(); r++) {
      if (branches[i].regs[r].first != branches[0].regs[r].first ||
          branches[i].regs[r].second.size() != branches[0].regs[r].second.size())
        throw std::invalid_argument("BranchState: register layout mismatch");
    }
  }
  if (branches.size() == 2 &&
      concat_regs(branches[0]) == concat_regs(branches[1]))
    throw std::invalid_argument("BranchState: duplicate branch strings");
  double norm2 = 0;
  for (const auto& b : branches) {
    if (b.amp < 0) throw std::invalid_argument("BranchState: negative amplitude");
    norm2 += b.amp * b.amp;
  }
  if (norm2 <= 0) throw std::invalid_argument("BranchState: zero norm");
  const double inv = 1.0 / std::sqrt(norm2);
  if (std::abs(inv - 1.0) > 1e-9) {
    for (auto& b : branches) b.amp *= inv;
  }
  BranchState s;
  s.branches_ = std::move(branches);
  return s;
}

size_t BranchState::total_bits() const {
  size_t n = 0;
  for (const auto& [name, v] : branches_[0].regs) n += v.size();
  return n;
}

BranchState apply_map(const BranchState& s, const std::string& out_name,
                      const RegisterFn& f) {
  std::vector<BranchState::Branch> out;
  for (size_t i = 0; i < s.branches().size(); i++) {
    BranchState::Branch b = s.branches()[i];
    if (b.has_reg(out_name))
      throw std::invalid_argument("apply_map: register already exists: " + out_name);
    auto v = f(b);
    if (!v)
      throw std::runtime_error("apply_map: map undefined on branch " +
                               std::to_string(i));
    b.regs.emplace_back(out_name, std::move(*v));
    out.push_back(std::move(b));
  }
  return BranchState::make(std::move(out));
}

BranchState uncompute(const BranchState& s, const std::string& reg_name,
                      const RegisterFn& f) {
  std::vector<BranchState::Branch> out;
  for (size_t i = 0; i < s.branches().size(); i++) {
    BranchState::Branch b = s.branches()[i];
    auto it = std::find_if(b.regs.begin(), b.regs.end(),
                           [&](const auto& p) { return p.first == reg_name; });
    if (it == b.regs.end())
      throw std::out_of_range("uncompute: no register named " + reg_name);
    BitVec held = it->second;
    b.regs.erase(it);
    auto v = f(b);
    if (!v || *v != held)
      throw std::runtime_error("uncompute: register is not the image of the map on branch " +
                               std::to_string(i));
    out.push_back(std::move(b));
  }
  return BranchState::make(std::move(out));
}

std::pair<BitVec, BranchState> measure_register(const BranchState& s,
                                                const std::string& reg_name,
                                                SplitRng& rng) {
  if (s.branches().size() == 1 ||
      s.branches()[0].reg(reg_name) == s.branches()[1].reg(reg_name)) {
    return {s.branches()[0].reg(reg_name), s};  // gentle: state untouched
  }
  const double p0 = s.branches()[0].amp * s.branches()[0].amp;
  const size_t pick = rng.next_double() < p0 ? 0 : 1;
  BranchState::Branch kept = s.branches()[pick];
  BitVec outcome = kept.reg(reg_name);
  kept.amp = 1.0;
  return {outcome, BranchState::make({std::move(kept)})};
}

BitVec measure_hadamard_all(const BranchState& s, SplitRng& rng) {
  const size_t L = s.total_bits();
  if (s.branches().size() == 1) return BitVec::random(L, rng);
  const BitVec u = concat_regs(s.branches()[0]);
  const BitVec v = concat_regs(s.branches()[1]);
  const double q0 = s.branches()[0].amp, q1 = s.branches()[1].amp;
  double p1 = (q0 - q1) * (q0 - q1) / 2.0;
  p1 = std::clamp(p1, 0.0, 1.0);
  const int theta = rng.next_double() < p1 ? 1 : 0;
  return coset_sample(u ^ v, theta, rng);
}

// ---- serialization ----

static void put_u32b(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; i++) out.push_back(uint8_t(v >> (8 * i)));
}
static uint32_t get_u32b(const std::vector<uint8_t>& in, size_t& pos) {
  if (pos + 4 > in.size()) throw std::runtime_error("BranchState: truncated");
  uint32_t v = 0;
  for (int i = 0; i < 4; i++) v |= uint32_t(in[pos + i]) << (8 * i);
  pos += 4;
  return v;
}

std::vector<uint8_t> BranchState::serialize() const {
  std::vector<uint8_t> out;
  out.push_back(uint8_t(branches_.size()));
  for (const auto& b : branches_) {
    uint64_t bits;
    static_assert(sizeof(double) == 8);
    std::memcpy(&bits, &b.amp, 8);
    for (int i = 0; i < 8; i++) out.push_back(uint8_t(bits >> (8 * i)));
    put_u32b(out, uint32_t(b.regs.size()));
    for (const auto& [name, v] : b.regs) {
      if (name.size() > 255) throw std::length_error("register name too long");
      out.push_back(uint8_t(name.size()));
      out.insert(out.end(), name.begin(), name.end());
      put_u32b(out, uint32_t(v.size()));
      auto bytes = v.to_bytes();
      out.insert(out.end(), bytes.begin(), bytes.end());
    }
  }
  return out;
}

BranchState BranchState::deserialize(const std::vector<uint8_t>& in, size_t& pos) {
  if (pos >= in.size()) throw std::runtime_error("BranchState: truncated");
  size_t nb = in[pos++];
  std::vector<Branch> branches;
  for (size_t i = 0; i < nb; i++) {
    Branch b;
    if (pos + 8 > in.size()) throw std::runtime_error("BranchState: truncated");
    uint64_t bits = 0;
    for (int j = 0; j < 8; j++) bits |= uint64_t(in[pos + j]) << (8 * j);
    pos += 8;
    std::memcpy(&b.amp, &bits, 8);
    uint32_t nregs = get_u32b(in, pos);
    for (uint32_t r = 0; r < nregs; r++) {
      if (pos >= in.size()) throw std::runtime_error("BranchState: truncated");
      size_t nlen = in[pos++];
      if (pos + nlen > in.size()) throw std::runtime_error("BranchState: truncated");
      std::string name(in.begin() + long(pos), in.begin() + long(pos + nlen));
      pos += nlen;
      uint32_t blen = get_u32b(in, pos);
      size_t nbytes = (blen + 7) / 8;
      if (pos + nbytes > in.size()) throw std::runtime_error("BranchState: truncated");
      std::vector<uint8_t> bytes(in.begin() + long(pos), in.begin() + long(pos + nbytes));
      pos += nbytes;
      b.regs.emplace_back(std::move(name), BitVec::from_bytes(bytes, blen));
    }
    branches.push_back(std::move(b));
  }
  return BranchState::make(std::move(branches));
}

}  // namespace skl
