#pragma once

#include <functional>
#include <vector>

#include "skl/bits.hpp"
#include "skl/pke.hpp"

namespace skl {

// Watermarkable PKE: 2*ell base keypairs indexed (j, b); a mark x selects
// dk_{j, x[j]} per position. Encryption targets both branches, so any
// marked key (and the master key) decrypts.

struct WpkeEk {
  PkeScheme scheme;
  size_t ell = 0;
  std::vector<std::vector<uint8_t>> eks;  // index 2j + b
};

struct WpkeMsk {
  PkeScheme scheme;
  size_t ell = 0;
  std::vector<std::vector<uint8_t>> dks;  // index 2j + b
};

struct WpkeDk {
  BitVec x;
  std::vector<std::vector<uint8_t>> dks;  // ell entries
};

struct WpkeCt {
  std::vector<std::vector<uint8_t>> cts;  // index 2j + b
};

std::pair<WpkeEk, WpkeMsk> wpke_kg(const PkeScheme& s, size_t ell, SplitRng& rng);

WpkeDk wpke_mark(const WpkeMsk& msk, const BitVec& x);  // deterministic

WpkeCt wpke_enc(const WpkeEk& ek, const BitVec& m, SplitRng& rng);

BitVec wpke_dec(const PkeScheme& s, const WpkeDk& dk, const WpkeCt& ct);
BitVec wpke_dec_msk(const WpkeMsk& msk, const WpkeCt& ct);

// fixed-width serialization of a marked key (payload of the keygen circuit)
size_t wpke_dk_bits(const PkeScheme& s, size_t ell);
BitVec wpke_dk_to_bits(const PkeScheme& s, const WpkeDk& dk);
WpkeDk wpke_dk_from_bits(const PkeScheme& s, size_t ell, const BitVec& bits);

// Parallel mark extractor: plants complementary payloads on the two key
// branches of every position, invokes the decryptor once on all instance
// ciphertexts, and reads each mark bit off which payload came back.
using WpkeDecryptor =
    std::function<std::vector<BitVec>(const std::vector<WpkeCt>&)>;

std::vector<BitVec> wpke_parallel_extract(const PkeScheme& s,
                                          const std::vector<WpkeEk>& eks,
                                          const WpkeDecryptor& decryptor,
                                          SplitRng& rng);

}  // namespace skl
