#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skl/bits.hpp"

namespace skl {

enum class GateOp : uint8_t { AND = 0, XOR = 1, NOT = 2, CONST = 3 };

struct Gate {
  GateOp op;
  uint32_t a = 0;  // first input wire; CONST keeps its value here
  uint32_t b = 0;  // second input wire (AND/XOR only)
};

// Wire ids 0..n_inputs-1 are the inputs; gate i drives wire n_inputs + i.
struct BoolCircuit {
  uint32_t n_inputs = 0;
  std::vector<Gate> gates;
  std::vector<uint32_t> outputs;

  uint32_t wire_count() const { return n_inputs + uint32_t(gates.size()); }
  void validate() const;  // throws on forward references etc.

  // same gate structure and output wiring, ignoring CONST values
  bool same_topology(const BoolCircuit& o) const;
  // copy with CONST values zeroed (what a garbled circuit may reveal)
  BoolCircuit topology() const;
};

BitVec circuit_eval(const BoolCircuit& c, const BitVec& x);

std::string circuit_to_text(const BoolCircuit& c);
BoolCircuit circuit_from_text(const std::string& text);

// Incremental construction plus the combinators the protocol circuits
// need. All derived combinators have input-independent gate shape.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(uint32_t n_inputs) { c_.n_inputs = n_inputs; }

  uint32_t input(uint32_t i) const;
  uint32_t band(uint32_t a, uint32_t b);
  uint32_t bxor(uint32_t a, uint32_t b);
  uint32_t bnot(uint32_t a);
  uint32_t bconst(int v);
  uint32_t bor(uint32_t a, uint32_t b);            // 4 gates
  uint32_t mux(uint32_t s, uint32_t a0, uint32_t a1);  // s ? a1 : a0
  // NOT(XOR(w, const bit)): equality of a wire with a constant
  uint32_t eq_const(uint32_t w, int bit);
  // AND-chain equality of a wire group with a constant string
  uint32_t eq_const_vec(const std::vector<uint32_t>& ws, const BitVec& val);

  void set_outputs(std::vector<uint32_t> outs) { c_.outputs = std::move(outs); }
  BoolCircuit build();

 private:
  BoolCircuit c_;
};

BoolCircuit random_circuit(uint32_t n_inputs, uint32_t n_gates,
                           uint32_t n_outputs, SplitRng& rng);

// The two-row select circuit used by the key-generation protocols:
// output bit 0 is a validity flag, bits 1..payload_bits are the payload.
// Row r matches when the w-bit input equals rows[r].first; on a match the
// output is 1 || rows[r].second, otherwise 0 || 0...0. The topology
// depends only on (w, payload_bits); row contents and the enable flags
// ride in CONST gates.
BoolCircuit build_select_circuit(
    int w, int payload_bits,
    const std::vector<std::pair<BitVec, BitVec>>& rows);

}  // namespace skl
