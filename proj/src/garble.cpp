#include "skl/garble.hpp"

#include <cstring>

namespace skl {

namespace {

inline int color(const GcLabel& l) { return l[0] & 1; }

GcLabel random_label(SplitRng& rng, int col) {
  GcLabel l;
  rng.fill_bytes(l.data(), l.size());
  l[0] = uint8_t((l[0] & ~1u) | unsigned(col));
  return l;
}

// encryption pad for one table row
std::array<uint8_t, 16> row_pad(const GcLabel& ka, const GcLabel& kb,
                                uint32_t gate_id, int row) {
  uint8_t key[16];
  std::memcpy(key, ka.data(), 8);
  std::memcpy(key + 8, kb.data(), 8);
  uint8_t msg[5] = {uint8_t(gate_id), uint8_t(gate_id >> 8),
                    uint8_t(gate_id >> 16), uint8_t(gate_id >> 24), uint8_t(row)};
  std::array<uint8_t, 16> pad;
  prf_hash(key, sizeof key, msg, sizeof msg, pad.data(), pad.size());
  return pad;
}

std::array<uint8_t, 16> encrypt_row(const GcLabel& ka, const GcLabel& kb,
                                    uint32_t gate_id, int row,
                                    const GcLabel& out) {
  auto pad = row_pad(ka, kb, gate_id, row);
  std::array<uint8_t, 16> ct = pad;
  for (int i = 0; i < 8; i++) ct[size_t(i)] = uint8_t(pad[size_t(i)] ^ out[size_t(i)]);
  return ct;  // trailing 8 bytes stay pad[8..16] as the check block
}

GcLabel decrypt_row(const GcLabel& ka, const GcLabel& kb, uint32_t gate_id,
                    int row, const std::array<uint8_t, 16>& ct) {
  auto pad = row_pad(ka, kb, gate_id, row);
  for (int i = 8; i < 16; i++)
    if (ct[size_t(i)] != pad[size_t(i)])
      throw GcEvalError("garbled gate: check block mismatch (wrong label)");
  GcLabel out;
  for (int i = 0; i < 8; i++) out[size_t(i)] = uint8_t(ct[size_t(i)] ^ pad[size_t(i)]);
  return out;
}

GcLabel zero_key() {
  GcLabel z{};
  return z;
}

GcLabel decode_digest(const GcLabel& label) {
  GcLabel d;
  uint8_t msg = 0xD0;
  prf_hash(label.data(), label.size(), &msg, 1, d.data(), d.size());
  return d;
}

bool gate_eval_plain(GateOp op, int a, int b) {
  switch (op) {
    case GateOp::AND: return a && b;
    case GateOp::XOR: return a != b;
    case GateOp::NOT: return !a;
    default: return a != 0;  // CONST
  }
}

}  // namespace

Garbled garble(const BoolCircuit& c, SplitRng& rng) {
  c.validate();
  const uint32_t wires = c.wire_count();
  std::vector<std::array<GcLabel, 2>> lab(wires);
  for (uint32_t i = 0; i < wires; i++) {
    int col = int(rng.next_bit());
    lab[i][0] = random_label(rng, col);
    lab[i][1] = random_label(rng, 1 - col);
  }

  Garbled out;
  out.gc.topo = c.topology();
  out.gc.gates.resize(c.gates.size());
  for (size_t g = 0; g < c.gates.size(); g++) {
    const Gate& gate = c.gates[g];
    const uint32_t wid = c.n_inputs + uint32_t(g);
    GarbledGate& gg = out.gc.gates[g];
    switch (gate.op) {
      case GateOp::AND:
      case GateOp::XOR: {
        gg.rows.resize(4);
        for (int va = 0; va < 2; va++)
          for (int vb = 0; vb < 2; vb++) {
            const GcLabel& ka = lab[gate.a][va];
            const GcLabel& kb = lab[gate.b][vb];
            int row = color(ka) * 2 + color(kb);
            int ov = gate_eval_plain(gate.op, va, vb);
            gg.rows[size_t(row)] =
                encrypt_row(ka, kb, wid, row, lab[wid][ov]);
          }
        break;
      }
      case GateOp::NOT: {
        gg.rows.resize(2);
        for (int va = 0; va < 2; va++) {
          const GcLabel& ka = lab[gate.a][va];
          int row = color(ka);
          gg.rows[size_t(row)] = encrypt_row(ka, zero_key(), wid, row, lab[wid][1 - va]);
        }
        break;
      }
      case GateOp::CONST: {
        gg.rows.resize(1);
        std::array<uint8_t, 16> r{};
        std::memcpy(r.data(), lab[wid][gate.a].data(), 8);
        gg.rows[0] = r;
        break;
      }
    }
  }
  out.gc.decode.resize(c.outputs.size());
  for (size_t i = 0; i < c.outputs.size(); i++) {
    out.gc.decode[i] = {decode_digest(lab[c.outputs[i]][0]),
                        decode_digest(lab[c.outputs[i]][1])};
  }
  out.input_labels.resize(c.n_inputs);
  for (uint32_t i = 0; i < c.n_inputs; i++) out.input_labels[i] = lab[i];
  return out;
}

BitVec gc_eval(const GarbledCircuit& gc, const std::vector<GcLabel>& inputs) {
  const BoolCircuit& c = gc.topo;
  c.validate();
  if (inputs.size() != c.n_inputs)
    throw GcEvalError("gc_eval: one label per input wire required");
  if (gc.gates.size() != c.gates.size())
    throw GcEvalError("gc_eval: table/topology mismatch");
  std::vector<GcLabel> w(c.wire_count());
  for (uint32_t i = 0; i < c.n_inputs; i++) w[i] = inputs[i];
  for (size_t g = 0; g < c.gates.size(); g++) {
    const Gate& gate = c.gates[g];
    const uint32_t wid = c.n_inputs + uint32_t(g);
    const GarbledGate& gg = gc.gates[g];
    switch (gate.op) {
      case GateOp::AND:
      case GateOp::XOR: {
        if (gg.rows.size() != 4) throw GcEvalError("gc_eval: malformed table");
        const GcLabel& ka = w[gate.a];
        const GcLabel& kb = w[gate.b];
        int row = color(ka) * 2 + color(kb);
        w[wid] = decrypt_row(ka, kb, wid, row, gg.rows[size_t(row)]);
        break;
      }
      case GateOp::NOT: {
        if (gg.rows.size() != 2) throw GcEvalError("gc_eval: malformed table");
        const GcLabel& ka = w[gate.a];
        int row = color(ka);
        w[wid] = decrypt_row(ka, zero_key(), wid, row, gg.rows[size_t(row)]);
        break;
      }
      case GateOp::CONST: {
        if (gg.rows.size() != 1) throw GcEvalError("gc_eval: malformed table");
        std::memcpy(w[wid].data(), gg.rows[0].data(), 8);
        break;
      }
    }
  }
  BitVec out(c.outputs.size());
  for (size_t i = 0; i < c.outputs.size(); i++) {
    GcLabel d = decode_digest(w[c.outputs[i]]);
    if (d == gc.decode[i].first)
      out.set(i, false);
    else if (d == gc.decode[i].second)
      out.set(i, true);
    else
      throw GcEvalError("gc_eval: output label does not decode");
  }
  return out;
}

Simulated gc_simulate(const BoolCircuit& topology, const BitVec& y, SplitRng& rng) {
  const BoolCircuit c = topology.topology();
  c.validate();
  if (y.size() != c.outputs.size())
    throw std::invalid_argument("gc_simulate: output arity mismatch");
  // one active label per wire; tables decrypt active to active, other rows random
  std::vector<GcLabel> act(c.wire_count());
  for (auto& l : act) l = random_label(rng, int(rng.next_bit()));

  Simulated out;
  out.gc.topo = c;
  out.gc.gates.resize(c.gates.size());
  for (size_t g = 0; g < c.gates.size(); g++) {
    const Gate& gate = c.gates[g];
    const uint32_t wid = c.n_inputs + uint32_t(g);
    GarbledGate& gg = out.gc.gates[g];
    switch (gate.op) {
      case GateOp::AND:
      case GateOp::XOR: {
        gg.rows.resize(4);
        for (auto& r : gg.rows) rng.fill_bytes(r.data(), r.size());
        int row = color(act[gate.a]) * 2 + color(act[gate.b]);
        gg.rows[size_t(row)] =
            encrypt_row(act[gate.a], act[gate.b], wid, row, act[wid]);
        break;
      }
      case GateOp::NOT: {
        gg.rows.resize(2);
        for (auto& r : gg.rows) rng.fill_bytes(r.data(), r.size());
        int row = color(act[gate.a]);
        gg.rows[size_t(row)] = encrypt_row(act[gate.a], zero_key(), wid, row, act[wid]);
        break;
      }
      case GateOp::CONST: {
        gg.rows.resize(1);
        std::array<uint8_t, 16> r{};
        std::memcpy(r.data(), act[wid].data(), 8);
        gg.rows[0] = r;
        break;
      }
    }
  }
  out.gc.decode.resize(c.outputs.size());
  for (size_t i = 0; i < c.outputs.size(); i++) {
    GcLabel active = decode_digest(act[c.outputs[i]]);
    GcLabel other;
    do {
      rng.fill_bytes(other.data(), other.size());
    } while (other == active);
    if (y.get(i))
      out.gc.decode[i] = {other, active};
    else
      out.gc.decode[i] = {active, other};
  }
  out.input_labels.resize(c.n_inputs);
  for (uint32_t i = 0; i < c.n_inputs; i++) out.input_labels[i] = act[i];
  return out;
}

// ---- serialization ----

namespace {
void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; i++) out.push_back(uint8_t(v >> (8 * i)));
}
uint32_t get_u32(const std::vector<uint8_t>& in, size_t& pos) {
  if (pos + 4 > in.size()) throw std::runtime_error("gc: truncated");
  uint32_t v = 0;
  for (int i = 0; i < 4; i++) v |= uint32_t(in[pos + i]) << (8 * i);
  pos += 4;
  return v;
}
}  // namespace

std::vector<uint8_t> GarbledCircuit::serialize() const {
  std::vector<uint8_t> out;
  std::string text = circuit_to_text(topo);
  put_u32(out, uint32_t(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  put_u32(out, uint32_t(gates.size()));
  for (const auto& g : gates) {
    out.push_back(uint8_t(g.rows.size()));
    for (const auto& r : g.rows) out.insert(out.end(), r.begin(), r.end());
  }
  put_u32(out, uint32_t(decode.size()));
  for (const auto& [d0, d1] : decode) {
    out.insert(out.end(), d0.begin(), d0.end());
    out.insert(out.end(), d1.begin(), d1.end());
  }
  return out;
}

GarbledCircuit GarbledCircuit::deserialize(const std::vector<uint8_t>& in,
                                           size_t& pos) {
  GarbledCircuit gc;
  uint32_t tlen = get_u32(in, pos);
  if (pos + tlen > in.size()) throw std::runtime_error("gc: truncated");
  gc.topo = circuit_from_text(std::string(in.begin() + long(pos), in.begin() + long(pos + tlen)));
  pos += tlen;
  uint32_t ng = get_u32(in, pos);
  gc.gates.resize(ng);
  for (auto& g : gc.gates) {
    if (pos >= in.size()) throw std::runtime_error("gc: truncated");
    size_t nrows = in[pos++];
    g.rows.resize(nrows);
    for (auto& r : g.rows) {
      if (pos + 16 > in.size()) throw std::runtime_error("gc: truncated");
      std::memcpy(r.data(), in.data() + pos, 16);
      pos += 16;
    }
  }
  uint32_t nd = get_u32(in, pos);
  gc.decode.resize(nd);
  for (auto& [d0, d1] : gc.decode) {
    if (pos + 16 > in.size()) throw std::runtime_error("gc: truncated");
    std::memcpy(d0.data(), in.data() + pos, 8);
    std::memcpy(d1.data(), in.data() + pos + 8, 8);
    pos += 16;
  }
  return gc;
}

}  // namespace skl
