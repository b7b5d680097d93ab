#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "skl/circuit.hpp"
#include "skl/rng.hpp"

namespace skl {

// Point-and-permute Yao garbling over the {AND, XOR, NOT, CONST} gate set.
// Labels are 8-byte strings whose low bit of byte 0 is the color. Every
// gate gets its own table (no free-XOR); rows carry an 8-byte check block
// so that evaluation with a wrong label fails loudly instead of returning
// a wrong output.

using GcLabel = std::array<uint8_t, 8>;

struct GcEvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GarbledGate {
  // AND/XOR: 4 rows; NOT: 2 rows; CONST: 1 row (the active label, bare)
  std::vector<std::array<uint8_t, 16>> rows;
};

struct GarbledCircuit {
  BoolCircuit topo;  // CONST values zeroed
  std::vector<GarbledGate> gates;
  // per output wire: digest of the 0-label and of the 1-label
  std::vector<std::pair<GcLabel, GcLabel>> decode;

  std::vector<uint8_t> serialize() const;
  static GarbledCircuit deserialize(const std::vector<uint8_t>& in, size_t& pos);
};

struct Garbled {
  GarbledCircuit gc;
  // labels[i] = (label for 0, label for 1) of input wire i
  std::vector<std::array<GcLabel, 2>> input_labels;
};

Garbled garble(const BoolCircuit& c, SplitRng& rng);

BitVec gc_eval(const GarbledCircuit& gc, const std::vector<GcLabel>& inputs);

struct Simulated {
  GarbledCircuit gc;
  std::vector<GcLabel> input_labels;  // one active label per input wire
};

// Builds a garbled circuit of the given topology that evaluates to
// exactly y on the returned labels.
Simulated gc_simulate(const BoolCircuit& topology, const BitVec& y, SplitRng& rng);

}  // namespace skl
