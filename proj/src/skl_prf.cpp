#include "skl/skl_prf.hpp"

#include <stdexcept>

namespace skl {

PrfSklSetupOut prf_skl_setup(int n, int w, size_t ell, const LatticeParams& lat,
                             SplitRng& rng) {
  PrfSklSetupOut su;
  su.scheme.ell = ell;
  su.scheme.params.n = n;
  su.scheme.params.w = w;
  su.scheme.params.lat = lat;
  su.scheme.params.payload_bits = int(wupf_key_bits(size_t(w), ell));

  SplitRng core = rng.split("skl-core");
  auto [pub, sec] = skl_setup(su.scheme.params, core);
  su.pub = std::move(pub);
  su.secrets = std::move(sec);
  su.dvk = skl_dvk_init(su.scheme.params, su.secrets);

  const size_t total = 2 * size_t(n);
  for (size_t i = 0; i < total; i++) {
    SplitRng r = rng.split("wupf", uint64_t(i));
    auto [msk, xk] = wupf_kg(size_t(w), ell, r);
    su.msk.wupf.push_back(std::move(msk));
    su.xk.wupf.push_back(std::move(xk));
  }
  return su;
}

SklMsg2Bundle prf_skl_lessor_round2(const PrfSklSetupOut& su,
                                    const SklMsg1Bundle& bundle, SklDvk& dvk,
                                    SplitRng& rng) {
  const size_t ell = su.scheme.ell;
  const auto& msks = su.msk.wupf;
  SklMarker marker = [&](size_t i, const BitVec& x) {
    return wupf_key_to_bits(wupf_mark(msks[i], x), ell);
  };
  return skl_lessor_round2(su.scheme.params, su.pub, marker, bundle, &dvk, rng);
}

QuantumKey prf_skl_keygen(PrfSklSetupOut& su, SplitRng& rng) {
  SplitRng r1 = rng.split("keygen-lessee1");
  auto [bundle, state] =
      skl_lessee_round1(su.scheme.params, su.pub, su.secrets, r1);
  SplitRng r2 = rng.split("keygen-lessor2");
  SklMsg2Bundle msg2 = prf_skl_lessor_round2(su, bundle, su.dvk, r2);
  return skl_lessee_finish(su.scheme.params, su.pub, state, msg2);
}

BitVec prf_skl_eval(const PrfSklScheme& s, const PrfSklMsk& msk, const BitVec& in) {
  if (in.size() != s.input_bits())
    throw std::invalid_argument("prf_skl_eval: input length mismatch");
  const size_t blk = s.index_input_bits();
  BitVec t;
  for (size_t i = 0; i < msk.wupf.size(); i++)
    t = t.concat(wupf_eval_msk(msk.wupf[i], in.slice(i * blk, blk)));
  return t;
}

QLEvalOut prf_skl_qleval(const PrfSklScheme& s, QuantumKey&& key,
                         const BitVec& in, SplitRng& rng) {
  if (in.size() != s.input_bits())
    throw std::invalid_argument("prf_skl_qleval: input length mismatch");
  const size_t blk = s.index_input_bits();
  const size_t w = size_t(s.params.w);
  QLEvalOut out;
  BitVec t;
  for (size_t i = 0; i < key.states.size(); i++) {
    const BitVec si = in.slice(i * blk, blk);
    RegisterFn f = [&](const BranchState::Branch& b) -> std::optional<BitVec> {
      const BitVec& payload = b.reg("payload");
      if (!payload.get(0)) return std::nullopt;
      WupfKey k = wupf_key_from_bits(w, s.ell, payload.slice(1, payload.size() - 1));
      return wupf_eval_key(k, s.ell, si);
    };
    BranchState with_t = apply_map(key.states[i], "t", f);
    bool disagree = with_t.branch_count() == 2 &&
                    with_t.branches()[0].reg("t") != with_t.branches()[1].reg("t");
    auto [ti, after] = measure_register(with_t, "t", rng);
    if (disagree) {
      out.collapsed_indices.push_back(i);
      key.states[i] = uncompute(after, "t", f);  // single branch now
    } else {
      key.states[i] = uncompute(after, "t", f);
    }
    t = t.concat(ti);
  }
  out.t = std::move(t);
  out.key = std::move(key);
  return out;
}

int prf_gl_eval(const PrfSklScheme& s, const PrfSklMsk& msk, const BitVec& in,
                const BitVec& r) {
  if (r.size() != s.output_bits())
    throw std::invalid_argument("prf_gl_eval: r length mismatch");
  return gf2_inner(prf_skl_eval(s, msk, in), r);
}

}  // namespace skl
