#pragma once

#include "skl/skl_core.hpp"
#include "skl/wupf.hpp"

namespace skl {

// PRF/UPF with secure key leasing: the shared machinery specialized to the
// watermarkable unpredictable function. Domain {0,1}^{2n*ell*w}, range
// {0,1}^{2n*w}.

struct PrfSklScheme {
  SklParams params;
  size_t ell = 0;  // TEPRF input width per block

  size_t input_bits() const {
    return 2 * size_t(params.n) * ell * size_t(params.w);
  }
  size_t output_bits() const { return 2 * size_t(params.n) * size_t(params.w); }
  size_t index_input_bits() const { return ell * size_t(params.w); }
};

struct PrfSklMsk {
  std::vector<WupfMsk> wupf;
};

struct PrfSklXk {
  std::vector<WupfXk> wupf;
};

struct PrfSklSetupOut {
  PrfSklScheme scheme;
  SklPublic pub;
  PrfSklMsk msk;
  PrfSklXk xk;
  SklSecrets secrets;
  SklDvk dvk;
};

PrfSklSetupOut prf_skl_setup(int n, int w, size_t ell, const LatticeParams& lat,
                             SplitRng& rng);

SklMsg2Bundle prf_skl_lessor_round2(const PrfSklSetupOut& su,
                                    const SklMsg1Bundle& bundle, SklDvk& dvk,
                                    SplitRng& rng);

QuantumKey prf_skl_keygen(PrfSklSetupOut& su, SplitRng& rng);

BitVec prf_skl_eval(const PrfSklScheme& s, const PrfSklMsk& msk, const BitVec& in);

// Leased evaluation: gentle per-index measurement. When an input block
// hits a differing point on a two-branch index the branches disagree and
// the measurement collapses that index; the diagnostic reports it.
struct QLEvalOut {
  BitVec t;
  QuantumKey key;
  std::vector<size_t> collapsed_indices;
};

QLEvalOut prf_skl_qleval(const PrfSklScheme& s, QuantumKey&& key,
                         const BitVec& in, SplitRng& rng);

// hardcore-bit PRF: <UPF(msk, s), r>
int prf_gl_eval(const PrfSklScheme& s, const PrfSklMsk& msk, const BitVec& in,
                const BitVec& r);

}  // namespace skl
