#pragma once

#include <optional>
#include <utility>

#include "skl/modq.hpp"

namespace skl {

// Gadget trapdoor: A = [Abar | G - Abar*R] with G the base-2 gadget and
// R a small-entry matrix. Knowing R reduces LWE inversion on A to exact
// integer decoding against G.
struct GadgetTrapdoor {
  ModQMatrix A;  // n x m
  SignMatrix R;  // mbar x (n*k)
};

GadgetTrapdoor trap_gen(const LatticeParams& p, SplitRng& rng);

struct LweSolution {
  ModQVector s;  // length n
  ModQVector e;  // length m, centered
};

// Recovers (s, e) from v = s^T A + e^T whenever ||e||_2 is within
// q / (C sqrt(n k)); otherwise nullopt. The comparison is exact.
std::optional<LweSolution> invert_lwe(const LatticeParams& p,
                                      const GadgetTrapdoor& td,
                                      const ModQVector& v);

// Decode unconditionally and report the candidate along with its residual
// norm; used by invert_lwe and the messiness test.
LweSolution gadget_decode(const LatticeParams& p, const GadgetTrapdoor& td,
                          const ModQVector& v);

// 1 iff the branch keyed by v is certifiably messy, realized as inversion
// failure at a tau-scaled residual threshold. Requires a preset with the
// messiness bounds enabled.
int is_messy(const LatticeParams& p, const GadgetTrapdoor& td,
             const ModQVector& v);

}  // namespace skl
