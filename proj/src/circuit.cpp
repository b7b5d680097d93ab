#include "skl/circuit.hpp"

#include <sstream>
#include <stdexcept>

namespace skl {

void BoolCircuit::validate() const {
  for (size_t i = 0; i < gates.size(); i++) {
    const Gate& g = gates[i];
    const uint32_t limit = n_inputs + uint32_t(i);
    switch (g.op) {
      case GateOp::AND:
      case GateOp::XOR:
        if (g.a >= limit || g.b >= limit)
          throw std::invalid_argument("circuit: forward wire reference");
        break;
      case GateOp::NOT:
        if (g.a >= limit)
          throw std::invalid_argument("circuit: forward wire reference");
        break;
      case GateOp::CONST:
        if (g.a > 1) throw std::invalid_argument("circuit: bad const value");
        break;
      default:
        throw std::invalid_argument("circuit: bad opcode");
    }
  }
  for (uint32_t o : outputs)
    if (o >= wire_count())
      throw std::invalid_argument("circuit: output references missing wire");
}

bool BoolCircuit::same_topology(const BoolCircuit& o) const {
  if (n_inputs != o.n_inputs || gates.size() != o.gates.size() ||
      outputs != o.outputs)
    return false;
  for (size_t i = 0; i < gates.size(); i++) {
    const Gate &a = gates[i], &b = o.gates[i];
    if (a.op != b.op) return false;
    if (a.op == GateOp::CONST) continue;
    if (a.a != b.a) return false;
    if ((a.op == GateOp::AND || a.op == GateOp::XOR) && a.b != b.b) return false;
  }
  return true;
}

BoolCircuit BoolCircuit::topology() const {
  BoolCircuit t = *this;
  for (auto& g : t.gates)
    if (g.op == GateOp::CONST) g.a = 0;
  return t;
}

BitVec circuit_eval(const BoolCircuit& c, const BitVec& x) {
  c.validate();
  if (x.size() != c.n_inputs)
    throw std::invalid_argument("circuit_eval: input arity mismatch");
  std::vector<uint8_t> w(c.wire_count());
  for (uint32_t i = 0; i < c.n_inputs; i++) w[i] = x.get(i);
  for (size_t i = 0; i < c.gates.size(); i++) {
    const Gate& g = c.gates[i];
    uint8_t v = 0;
    switch (g.op) {
      case GateOp::AND: v = w[g.a] & w[g.b]; break;
      case GateOp::XOR: v = w[g.a] ^ w[g.b]; break;
      case GateOp::NOT: v = !w[g.a]; break;
      case GateOp::CONST: v = uint8_t(g.a); break;
    }
    w[c.n_inputs + uint32_t(i)] = v;
  }
  BitVec out(c.outputs.size());
  for (size_t i = 0; i < c.outputs.size(); i++) out.set(i, w[c.outputs[i]]);
  return out;
}

std::string circuit_to_text(const BoolCircuit& c) {
  std::ostringstream os;
  os << "inputs " << c.n_inputs << " outputs ";
  for (size_t i = 0; i < c.outputs.size(); i++) {
    if (i) os << ",";
    os << c.outputs[i];
  }
  os << "\n";
  for (size_t i = 0; i < c.gates.size(); i++) {
    const Gate& g = c.gates[i];
    uint32_t id = c.n_inputs + uint32_t(i);
    switch (g.op) {
      case GateOp::AND: os << id << " AND " << g.a << " " << g.b << "\n"; break;
      case GateOp::XOR: os << id << " XOR " << g.a << " " << g.b << "\n"; break;
      case GateOp::NOT: os << id << " NOT " << g.a << "\n"; break;
      case GateOp::CONST: os << id << " CONST " << g.a << "\n"; break;
    }
  }
  return os.str();
}

BoolCircuit circuit_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string tok;
  BoolCircuit c;
  if (!(is >> tok) || tok != "inputs") throw std::invalid_argument("circuit text: expected 'inputs'");
  if (!(is >> c.n_inputs)) throw std::invalid_argument("circuit text: bad input count");
  if (!(is >> tok) || tok != "outputs") throw std::invalid_argument("circuit text: expected 'outputs'");
  std::string outs;
  if (!(is >> outs)) throw std::invalid_argument("circuit text: bad outputs");
  {
    std::istringstream os(outs);
    std::string piece;
    while (std::getline(os, piece, ','))
      c.outputs.push_back(uint32_t(std::stoul(piece)));
  }
  uint32_t id;
  while (is >> id >> tok) {
    Gate g;
    if (tok == "AND" || tok == "XOR") {
      g.op = tok == "AND" ? GateOp::AND : GateOp::XOR;
      if (!(is >> g.a >> g.b)) throw std::invalid_argument("circuit text: bad gate inputs");
    } else if (tok == "NOT" || tok == "CONST") {
      g.op = tok == "NOT" ? GateOp::NOT : GateOp::CONST;
      if (!(is >> g.a)) throw std::invalid_argument("circuit text: bad gate input");
    } else {
      throw std::invalid_argument("circuit text: unknown op " + tok);
    }
    if (id != c.n_inputs + uint32_t(c.gates.size()))
      throw std::invalid_argument("circuit text: gate ids must be sequential");
    c.gates.push_back(g);
  }
  c.validate();
  return c;
}

uint32_t CircuitBuilder::input(uint32_t i) const {
  if (i >= c_.n_inputs) throw std::out_of_range("CircuitBuilder: bad input index");
  return i;
}

uint32_t CircuitBuilder::band(uint32_t a, uint32_t b) {
  c_.gates.push_back({GateOp::AND, a, b});
  return c_.n_inputs + uint32_t(c_.gates.size()) - 1;
}
uint32_t CircuitBuilder::bxor(uint32_t a, uint32_t b) {
  c_.gates.push_back({GateOp::XOR, a, b});
  return c_.n_inputs + uint32_t(c_.gates.size()) - 1;
}
uint32_t CircuitBuilder::bnot(uint32_t a) {
  c_.gates.push_back({GateOp::NOT, a, 0});
  return c_.n_inputs + uint32_t(c_.gates.size()) - 1;
}
uint32_t CircuitBuilder::bconst(int v) {
  c_.gates.push_back({GateOp::CONST, uint32_t(v ? 1 : 0), 0});
  return c_.n_inputs + uint32_t(c_.gates.size()) - 1;
}
uint32_t CircuitBuilder::bor(uint32_t a, uint32_t b) {
  return bnot(band(bnot(a), bnot(b)));
}
uint32_t CircuitBuilder::mux(uint32_t s, uint32_t a0, uint32_t a1) {
  return bxor(a0, band(s, bxor(a0, a1)));
}
uint32_t CircuitBuilder::eq_const(uint32_t w, int bit) {
  return bnot(bxor(w, bconst(bit)));
}
uint32_t CircuitBuilder::eq_const_vec(const std::vector<uint32_t>& ws,
                                      const BitVec& val) {
  if (ws.size() != val.size())
    throw std::invalid_argument("eq_const_vec: width mismatch");
  uint32_t acc = eq_const(ws[0], val.get(0));
  for (size_t i = 1; i < ws.size(); i++)
    acc = band(acc, eq_const(ws[i], val.get(i)));
  return acc;
}

BoolCircuit CircuitBuilder::build() {
  c_.validate();
  return std::move(c_);
}

BoolCircuit random_circuit(uint32_t n_inputs, uint32_t n_gates,
                           uint32_t n_outputs, SplitRng& rng) {
  CircuitBuilder b(n_inputs);
  uint32_t last = 0;
  for (uint32_t i = 0; i < n_gates; i++) {
    uint32_t limit = n_inputs + i;
    uint32_t op = uint32_t(rng.below(4));
    uint32_t a = limit ? uint32_t(rng.below(limit)) : 0;
    uint32_t w2 = limit ? uint32_t(rng.below(limit)) : 0;
    switch (op) {
      case 0: last = limit ? b.band(a, w2) : b.bconst(int(rng.next_bit())); break;
      case 1: last = limit ? b.bxor(a, w2) : b.bconst(int(rng.next_bit())); break;
      case 2: last = limit ? b.bnot(a) : b.bconst(int(rng.next_bit())); break;
      default: last = b.bconst(int(rng.next_bit())); break;
    }
  }
  std::vector<uint32_t> outs;
  uint32_t wires = n_inputs + n_gates;
  for (uint32_t i = 0; i < n_outputs; i++)
    outs.push_back(wires ? uint32_t(rng.below(wires)) : last);
  b.set_outputs(std::move(outs));
  return b.build();
}

BoolCircuit build_select_circuit(
    int w, int payload_bits,
    const std::vector<std::pair<BitVec, BitVec>>& rows) {
  if (rows.size() > 2) throw std::invalid_argument("build_select_circuit: at most 2 rows");
  for (const auto& [x, p] : rows) {
    if (int(x.size()) != w || int(p.size()) != payload_bits)
      throw std::invalid_argument("build_select_circuit: row size mismatch");
  }
  CircuitBuilder b((uint32_t(w)));
  std::vector<uint32_t> xin((size_t(w)));
  for (int j = 0; j < w; j++) xin[size_t(j)] = b.input(uint32_t(j));

  uint32_t row_hit[2];
  for (int r = 0; r < 2; r++) {
    const bool enabled = size_t(r) < rows.size();
    const BitVec key = enabled ? rows[size_t(r)].first : BitVec(size_t(w));
    uint32_t eq = b.eq_const_vec(xin, key);
    uint32_t en = b.bconst(enabled ? 1 : 0);
    row_hit[r] = b.band(eq, en);
  }
  uint32_t valid = b.bor(row_hit[0], row_hit[1]);

  std::vector<uint32_t> outs;
  outs.push_back(valid);
  for (int p = 0; p < payload_bits; p++) {
    uint32_t terms[2];
    for (int r = 0; r < 2; r++) {
      int bit = size_t(r) < rows.size() ? rows[size_t(r)].second.get(size_t(p)) : 0;
      terms[r] = b.band(row_hit[r], b.bconst(bit));
    }
    outs.push_back(b.bor(terms[0], terms[1]));
  }
  b.set_outputs(std::move(outs));
  return b.build();
}

}  // namespace skl
