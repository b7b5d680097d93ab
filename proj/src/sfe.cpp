#include "skl/sfe.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>

namespace skl {

namespace {

GcLabel label_from_bits(const std::vector<int>& bits) {
  GcLabel l{};
  for (size_t t = 0; t < 64; t++)
    if (bits[t]) l[t / 8] |= uint8_t(1u << (t % 8));
  return l;
}

int label_bit(const GcLabel& l, size_t t) { return (l[t / 8] >> (t % 8)) & 1; }

}  // namespace

std::pair<SfeCrs, SfeTrapdoor> sfe_crs_gen(const LatticeParams& p, int mode,
                                           int w, SplitRng& rng) {
  SfeCrs crs;
  SfeTrapdoor td;
  td.mode = mode;
  crs.ots.resize(size_t(w));
  td.ots.resize(size_t(w));
  // per-wire split keeps parallel and serial generation identical
#pragma omp parallel for schedule(dynamic) if (w > 1)
  for (int j = 0; j < w; j++) {
    SplitRng r = rng.split("sfe-crs", uint64_t(j));
    auto [c, t] = ot_crs_gen(p, mode, r);
    crs.ots[size_t(j)] = std::move(c);
    td.ots[size_t(j)] = std::move(t);
  }
  return {std::move(crs), std::move(td)};
}

std::pair<SfeMsg1, SfeState> sfe_receive1(const LatticeParams& p,
                                          const SfeCrs& crs, const BitVec& x,
                                          SplitRng& rng) {
  if (x.size() != crs.ots.size())
    throw std::invalid_argument("sfe_receive1: input width mismatch");
  SfeMsg1 m1;
  SfeState st;
  m1.per_wire.resize(x.size());
  st.per_wire.resize(x.size());
  for (size_t j = 0; j < x.size(); j++) {
    SplitRng r = rng.split("sfe-rcv", uint64_t(j));
    auto out = ot_receive1(p, crs.ots[j], x.get(j) ? 1 : 0, r);
    m1.per_wire[j] = std::move(out.msg1);
    st.per_wire[j] = std::move(out.st);
  }
  return {std::move(m1), std::move(st)};
}

SfeCoherentOut sfe_coherent_receive1(const LatticeParams& p, const SfeCrs& crs,
                                     const BranchState& s, const SfeTrapdoor& god,
                                     SplitRng& rng) {
  const size_t w = crs.ots.size();
  for (const auto& br : s.branches())
    if (br.reg("x").size() != w)
      throw std::invalid_argument("sfe_coherent_receive1: register width mismatch");

  // One global anchor branch drawn by amplitude^2 makes the per-wire
  // samples independent, so wires can run in parallel; the joint outcome
  // distribution is unchanged.
  size_t anchor = 0;
  const size_t nb = s.branches().size();
  if (nb == 2) {
    double p0 = s.branches()[0].amp * s.branches()[0].amp;
    anchor = rng.next_double() < p0 ? 0 : 1;
  }

  struct WireOut {
    ModQVector msg1;
    std::vector<ModQVector> r_per_branch;
    std::vector<double> log_w_per_branch;
    bool collapsed = false;
  };
  std::vector<WireOut> wires(w);

#pragma omp parallel for schedule(dynamic) if (w > 1)
  for (long j = 0; j < long(w); j++) {
    SplitRng r = rng.split("sfe-qrcv", uint64_t(j));
    std::vector<int> bits;
    for (size_t bi = 0; bi < nb; bi++)
      bits.push_back(s.branches()[bi].reg("x").get(size_t(j)) ? 1 : 0);
    auto o = ot_coherent_receive1_raw(p, crs.ots[size_t(j)], god.ots[size_t(j)],
                                      bits, anchor, r);
    WireOut& wo = wires[size_t(j)];
    wo.msg1 = std::move(o.msg1);
    wo.collapsed = o.collapsed;
    wo.r_per_branch.resize(nb);
    wo.log_w_per_branch.assign(nb, 0.0);
    for (size_t bi = 0; bi < nb; bi++) {
      if (!o.branches[bi].alive) continue;
      wo.r_per_branch[bi] = std::move(o.branches[bi].r);
      wo.log_w_per_branch[bi] = o.branches[bi].log_weight;
    }
  }

  SfeCoherentOut out;
  out.msg1.per_wire.resize(w);
  bool collapsed = false;
  for (size_t j = 0; j < w; j++) {
    out.msg1.per_wire[j] = std::move(wires[j].msg1);
    collapsed = collapsed || wires[j].collapsed;
  }
  out.collapsed = collapsed && nb == 2;

  std::vector<BranchState::Branch> branches;
  std::vector<size_t> keep;
  for (size_t bi = 0; bi < nb; bi++)
    if (!(out.collapsed && bi != anchor)) keep.push_back(bi);

  // reweight: log amp + sum over wires of the per-wire weights
  std::vector<double> lw(keep.size(), 0.0);
  for (size_t ki = 0; ki < keep.size(); ki++) {
    size_t bi = keep[ki];
    lw[ki] = std::log(std::max(s.branches()[bi].amp, 1e-300));
    for (size_t j = 0; j < w; j++) {
      // anchor had weight baked relative to amplitude 1; recompute from parts
      lw[ki] += wires[j].log_w_per_branch[bi];
    }
  }
  double mx = -1e300;
  for (double v : lw) mx = std::max(mx, v);
  for (size_t ki = 0; ki < keep.size(); ki++) {
    size_t bi = keep[ki];
    BranchState::Branch nb2 = s.branches()[bi];
    nb2.amp = std::exp(lw[ki] - mx);
    BitVec st_bits;
    for (size_t j = 0; j < w; j++)
      st_bits = st_bits.concat(
          ot_state_bits(p, OtReceiverState{wires[j].r_per_branch[bi]}));
    nb2.regs.emplace_back("st", std::move(st_bits));
    branches.push_back(std::move(nb2));
  }
  out.state = BranchState::make(std::move(branches));
  return out;
}

SfeMsg2 sfe_send(const LatticeParams& p, const SfeCrs& crs, const SfeMsg1& msg1,
                 const BoolCircuit& c, SplitRng& rng) {
  const size_t w = crs.ots.size();
  if (msg1.per_wire.size() != w)
    throw std::invalid_argument("sfe_send: msg1 width mismatch");
  if (c.n_inputs != w)
    throw std::invalid_argument("sfe_send: circuit arity mismatch");
  SplitRng grng = rng.split("garble");
  Garbled g = garble(c, grng);
  SfeMsg2 out;
  out.gc = std::move(g.gc);
  out.wire_msgs.resize(w);
#pragma omp parallel for schedule(dynamic) if (w > 1)
  for (long j = 0; j < long(w); j++) {
    SplitRng r = rng.split("sfe-send", uint64_t(j));
    auto& msgs = out.wire_msgs[size_t(j)];
    msgs.resize(64);
    for (size_t t = 0; t < 64; t++) {
      SplitRng rt = r.split("bit", uint64_t(t));
      msgs[t] = ot_send(p, crs.ots[size_t(j)], msg1.per_wire[size_t(j)],
                        label_bit(g.input_labels[size_t(j)][0], t),
                        label_bit(g.input_labels[size_t(j)][1], t), rt);
    }
  }
  return out;
}

BitVec sfe_receive2(const LatticeParams& p, const SfeCrs& crs, const BitVec& x,
                    const SfeState& st, const SfeMsg2& msg2) {
  const size_t w = crs.ots.size();
  if (x.size() != w || st.per_wire.size() != w || msg2.wire_msgs.size() != w)
    throw std::invalid_argument("sfe_receive2: width mismatch");
  std::vector<GcLabel> labels(w);
  for (size_t j = 0; j < w; j++) {
    std::vector<int> bits(64);
    for (size_t t = 0; t < 64; t++)
      bits[t] = ot_receive2(p, crs.ots[j], x.get(j) ? 1 : 0, st.per_wire[j],
                            msg2.wire_msgs[j][t]);
    labels[j] = label_from_bits(bits);
  }
  return gc_eval(msg2.gc, labels);
}

std::optional<BlockTable> sfe_sta_rcv(const LatticeParams& p,
                                      const SfeTrapdoor& td, const SfeMsg1& msg1) {
  if (td.mode != 2) throw std::logic_error("sfe_sta_rcv: hiding-mode trapdoor required");
  const size_t w = td.ots.size();
  if (msg1.per_wire.size() != w) return std::nullopt;
  BlockTable table = BlockTable::make(w, sfe_block_bits(p));
  for (size_t j = 0; j < w; j++) {
    auto [a0, a1] = ot_sta_rcv(p, td.ots[j], msg1.per_wire[j]);
    if (!a0 || !a1) return std::nullopt;
    table.alpha(j, 0) = ot_state_bits(p, *a0);
    table.alpha(j, 1) = ot_state_bits(p, *a1);
  }
  return table;
}

std::optional<BitVec> sfe_extract(const LatticeParams& p, const SfeTrapdoor& td,
                                  const SfeMsg1& msg1) {
  if (td.mode != 1) throw std::logic_error("sfe_extract: extraction-mode trapdoor required");
  const size_t w = td.ots.size();
  if (msg1.per_wire.size() != w) return std::nullopt;
  BitVec x(w);
  for (size_t j = 0; j < w; j++) {
    auto b = ot_extract(p, td.ots[j], msg1.per_wire[j]);
    if (!b) return std::nullopt;
    x.set(j, *b != 0);
  }
  return x;
}

SfeMsg2 sfe_simulate(const LatticeParams& p, const SfeCrs& crs,
                     const SfeMsg1& msg1, const BitVec& y,
                     const BoolCircuit& topology, SplitRng& rng) {
  const size_t w = crs.ots.size();
  if (msg1.per_wire.size() != w)
    throw std::invalid_argument("sfe_simulate: msg1 width mismatch");
  SplitRng grng = rng.split("garble");
  Simulated sim = gc_simulate(topology, y, grng);
  SfeMsg2 out;
  out.gc = std::move(sim.gc);
  out.wire_msgs.resize(w);
  for (size_t j = 0; j < w; j++) {
    SplitRng r = rng.split("sfe-send", uint64_t(j));
    auto& msgs = out.wire_msgs[j];
    msgs.resize(64);
    for (size_t t = 0; t < 64; t++) {
      SplitRng rt = r.split("bit", uint64_t(t));
      msgs[t] = ot_simulate_send(p, crs.ots[j], msg1.per_wire[j],
                                 label_bit(sim.input_labels[j], t), rt);
    }
  }
  return out;
}

BitVec sfe_state_bits(const LatticeParams& p, const SfeState& st) {
  BitVec out;
  for (const auto& s : st.per_wire) out = out.concat(ot_state_bits(p, s));
  return out;
}

SfeState sfe_state_from_bits(const LatticeParams& p, int w, const BitVec& bits) {
  const size_t u = sfe_block_bits(p);
  if (bits.size() != u * size_t(w))
    throw std::invalid_argument("sfe_state_from_bits: length mismatch");
  SfeState st;
  for (int j = 0; j < w; j++)
    st.per_wire.push_back(ot_state_from_bits(p, bits.slice(size_t(j) * u, u)));
  return st;
}

// ---- serialization ----

namespace {
void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; i++) out.push_back(uint8_t(v >> (8 * i)));
}
uint32_t get_u32(const std::vector<uint8_t>& in, size_t& pos) {
  if (pos + 4 > in.size()) throw std::runtime_error("sfe: truncated");
  uint32_t v = 0;
  for (int i = 0; i < 4; i++) v |= uint32_t(in[pos + i]) << (8 * i);
  pos += 4;
  return v;
}
}  // namespace

std::vector<uint8_t> sfe_msg1_serialize(const SfeMsg1& m) {
  std::vector<uint8_t> out;
  out.push_back(0x11);  // message-type tag
  put_u32(out, uint32_t(m.per_wire.size()));
  for (const auto& v : m.per_wire) encode_vec(out, v);
  return out;
}

SfeMsg1 sfe_msg1_deserialize(const std::vector<uint8_t>& in, size_t& pos) {
  if (pos >= in.size() || in[pos] != 0x11)
    throw std::runtime_error("sfe_msg1: bad tag");
  pos++;
  uint32_t w = get_u32(in, pos);
  SfeMsg1 m;
  for (uint32_t j = 0; j < w; j++) m.per_wire.push_back(decode_vec(in, pos));
  return m;
}

std::vector<uint8_t> sfe_msg2_serialize(const SfeMsg2& m) {
  std::vector<uint8_t> out;
  out.push_back(0x12);
  auto gc = m.gc.serialize();
  put_u32(out, uint32_t(gc.size()));
  out.insert(out.end(), gc.begin(), gc.end());
  put_u32(out, uint32_t(m.wire_msgs.size()));
  for (const auto& per_bit : m.wire_msgs) {
    put_u32(out, uint32_t(per_bit.size()));
    for (const auto& m2 : per_bit) {
      encode_vec(out, m2.w0);
      encode_vec(out, m2.w1);
    }
  }
  return out;
}

SfeMsg2 sfe_msg2_deserialize(const std::vector<uint8_t>& in, size_t& pos) {
  if (pos >= in.size() || in[pos] != 0x12)
    throw std::runtime_error("sfe_msg2: bad tag");
  pos++;
  uint32_t gclen = get_u32(in, pos);
  size_t gcend = pos + gclen;
  SfeMsg2 m;
  m.gc = GarbledCircuit::deserialize(in, pos);
  if (pos != gcend) throw std::runtime_error("sfe_msg2: garbled blob length mismatch");
  uint32_t w = get_u32(in, pos);
  m.wire_msgs.resize(w);
  for (uint32_t j = 0; j < w; j++) {
    uint32_t nb = get_u32(in, pos);
    m.wire_msgs[j].resize(nb);
    for (uint32_t t = 0; t < nb; t++) {
      m.wire_msgs[j][t].w0 = decode_vec(in, pos);
      m.wire_msgs[j][t].w1 = decode_vec(in, pos);
    }
  }
  return m;
}

}  // namespace skl
