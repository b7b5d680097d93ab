#pragma once

#include <cstdint>
#include <vector>

#include "skl/modq.hpp"
#include "skl/rng.hpp"

namespace skl {

// Single-bit PKE behind the watermarkable scheme. Two instantiations:
//  - toy: PRF-masked bit with the PRF key doubling as both ek and dk;
//    round-trip exact, no security claimed. Keeps high-repetition tests cheap.
//  - regev: LWE encryption on a small fixed preset, no trapdoor machinery.
enum class PkeKind : uint8_t { toy = 0, regev = 1 };

struct PkeScheme {
  PkeKind kind = PkeKind::toy;

  static PkeScheme toy_scheme() { return {PkeKind::toy}; }
  static PkeScheme regev_scheme() { return {PkeKind::regev}; }

  // fixed bit-width of a serialized decryption key
  size_t dk_bits() const;
};

struct PkeKeyPair {
  std::vector<uint8_t> ek, dk;
};

PkeKeyPair pke_kg(const PkeScheme& s, SplitRng& rng);
std::vector<uint8_t> pke_enc(const PkeScheme& s, const std::vector<uint8_t>& ek,
                             int m, SplitRng& rng);
int pke_dec(const PkeScheme& s, const std::vector<uint8_t>& dk,
            const std::vector<uint8_t>& ct);

// Regev parameters used by the regev instantiation (exposed for tests).
struct RegevParams {
  Int q;
  int n, m, k;
  int64_t sigma;
};
const RegevParams& regev_params();

}  // namespace skl
