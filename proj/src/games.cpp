#include "skl/games.hpp"

#include <algorithm>

namespace skl {

CutChooseResult run_cut_and_choose(CutChooseAdversary& adv, int n, int w,
                                   SplitRng& rng) {
  CutChooseResult res;
  const int total = 2 * n;

  // step 1: uniform subset S of size n
  std::vector<int> idx((size_t(total)));
  for (int i = 0; i < total; i++) idx[size_t(i)] = i;
  SplitRng srng = rng.split("subset");
  for (int i = total - 1; i > 0; i--)
    std::swap(idx[size_t(i)], idx[size_t(srng.below(uint64_t(i + 1)))]);
  std::vector<bool> in_s((size_t(total)), false);
  for (int i = 0; i < n; i++) in_s[size_t(idx[size_t(i)])] = true;

  // step 2: mixed-mode generation
  std::vector<NtcfPp> pps((size_t(total)));
  std::vector<NtcfTd> tds((size_t(total)));
  for (int i = 0; i < total; i++) {
    SplitRng r = rng.split("gen", uint64_t(i));
    auto [pp, td] = ntcf_func_gen(
        w, in_s[size_t(i)] ? NtcfMode::injective : NtcfMode::two_to_one, r);
    pps[size_t(i)] = std::move(pp);
    tds[size_t(i)] = std::move(td);
  }

  // step 3: the adversary commits
  SplitRng arng = rng.split("adv");
  std::vector<std::pair<BitVec, BitVec>> commitments;
  try {
    commitments = adv.commit(pps, tds, arng);
  } catch (const std::exception& e) {
    res.note = std::string("adversary violated the protocol: ") + e.what();
    return res;
  }
  if (commitments.size() != size_t(total)) {
    res.note = "adversary sent a malformed commitment";
    return res;
  }

  // step 4: equation checks on the two-to-one half
  for (int i = 0; i < total; i++) {
    if (in_s[size_t(i)]) continue;
    const auto& [y, d] = commitments[size_t(i)];
    if (!ntcf_good_set(tds[size_t(i)], y, d)) {
      res.note = "good-set check failed at index " + std::to_string(i);
      return res;
    }
    auto claw = ntcf_invert(tds[size_t(i)], y);
    if (!claw || claw->size() != 2) {
      res.note = "inversion failed at index " + std::to_string(i);
      return res;
    }
    if (gf2_inner(d, (*claw)[0] ^ (*claw)[1]) != 0) {
      res.note = "parity check failed at index " + std::to_string(i);
      return res;
    }
  }
  res.step4_pass = true;

  // steps 5-6: reveal S and the complement trapdoors, collect preimages
  std::vector<NtcfTd> revealed;
  for (int i = 0; i < total; i++)
    if (!in_s[size_t(i)]) revealed.push_back(tds[size_t(i)]);
  std::vector<BitVec> xs;
  try {
    xs = adv.open(in_s, revealed, arng);
  } catch (const std::exception& e) {
    res.note = std::string("adversary violated the protocol: ") + e.what();
    return res;
  }

  // step 7: preimage checks on S
  size_t xi = 0;
  for (int i = 0; i < total; i++) {
    if (!in_s[size_t(i)]) continue;
    if (xi >= xs.size()) {
      res.note = "adversary sent too few preimages";
      return res;
    }
    if (!ntcf_chk(pps[size_t(i)], xs[xi], commitments[size_t(i)].first)) {
      res.note = "preimage check failed at index " + std::to_string(i);
      return res;
    }
    xi++;
  }
  res.outcome = 1;
  res.note = "adversary produced all preimages (toy instantiation: claws are public)";
  return res;
}

namespace {

class HonestThenDelete : public CutChooseAdversary {
 public:
  std::vector<std::pair<BitVec, BitVec>> commit(
      const std::vector<NtcfPp>& pps, const std::vector<NtcfTd>& god,
      SplitRng& rng) override {
    std::vector<std::pair<BitVec, BitVec>> out;
    for (size_t i = 0; i < pps.size(); i++) {
      SplitRng r = rng.split("honest", uint64_t(i));
      auto [y, psi] = ntcf_state_gen(pps[i], god[i], r);
      SplitRng mr = r.split("measure");
      BitVec d = measure_hadamard_all(psi, mr);
      out.emplace_back(std::move(y), std::move(d));
    }
    w_ = pps.empty() ? 0 : size_t(pps[0].w);
    return out;
  }

  std::vector<BitVec> open(const std::vector<bool>& in_s,
                           const std::vector<NtcfTd>&, SplitRng&) override {
    // the preimages were measured away; nothing useful remains
    size_t count = 0;
    for (bool b : in_s) count += b ? 1 : 0;
    return std::vector<BitVec>(count, BitVec(w_));
  }

 private:
  size_t w_ = 0;
};

class KeepEverything : public CutChooseAdversary {
 public:
  std::vector<std::pair<BitVec, BitVec>> commit(
      const std::vector<NtcfPp>& pps, const std::vector<NtcfTd>&,
      SplitRng& rng) override {
    std::vector<std::pair<BitVec, BitVec>> out;
    xs_.clear();
    for (size_t i = 0; i < pps.size(); i++) {
      SplitRng r = rng.split("keep", uint64_t(i));
      BitVec x = BitVec::random(size_t(pps[i].w), r);
      BitVec y = ntcf_eval(pps[i], x);
      // the toy's accept set is computable from pp alone
      std::vector<BitVec> pre = ntcf_preimages(pps[i], y);
      BitVec d = orthogonal_nonzero(pre, size_t(pps[i].w), r);
      xs_.push_back(pre.empty() ? x : pre[0]);
      out.emplace_back(std::move(y), std::move(d));
    }
    return out;
  }

  std::vector<BitVec> open(const std::vector<bool>& in_s,
                           const std::vector<NtcfTd>&, SplitRng&) override {
    std::vector<BitVec> out;
    for (size_t i = 0; i < in_s.size(); i++)
      if (in_s[i]) out.push_back(xs_[i]);
    return out;
  }

 private:
  static BitVec orthogonal_nonzero(const std::vector<BitVec>& pre, size_t w,
                                   SplitRng& rng) {
    if (pre.size() < 2) {
      // injective index: any nonzero d passes the good-set check
      BitVec d = BitVec::random(w, rng);
      if (d.is_zero()) d.set(0, true);
      return d;
    }
    BitVec delta = pre[0] ^ pre[1];
    for (;;) {
      BitVec d = coset_sample(delta, 0, rng);
      if (!d.is_zero()) return d;
    }
  }

  std::vector<BitVec> xs_;
};

}  // namespace

std::unique_ptr<CutChooseAdversary> make_honest_then_delete_adversary() {
  return std::make_unique<HonestThenDelete>();
}

std::unique_ptr<CutChooseAdversary> make_keep_everything_adversary() {
  return std::make_unique<KeepEverything>();
}

// ---- VRA games ----

VraResult run_ow_vra(PkeSklSetupOut& su, OwVraAdversary& adv, SplitRng& rng) {
  VraResult res;
  SplitRng ar = rng.split("adv");
  SklMsg1Bundle bundle = adv.round1(su.scheme, su.ek, su.secrets, ar);
  SplitRng r2 = rng.split("lessor2");
  SklMsg2Bundle msg2;
  try {
    msg2 = pke_skl_lessor_round2(su, bundle, su.dvk, r2);
  } catch (const std::exception& e) {
    res.note = std::string("keygen aborted: ") + e.what();
    return res;
  }
  adv.round2(msg2);

  auto cert = adv.deletion(ar);
  if (!cert) {
    res.note = "adversary refused to delete";
    return res;
  }
  DelVrfyReport v = skl_del_vrfy(su.scheme.params, su.dvk, *cert);
  res.cert_accepted = v.ok;
  if (!v.ok) {
    res.note = "certificate rejected: " + v.diagnostic;
    return res;
  }

  SplitRng cr = rng.split("challenge");
  BitVec m_star = BitVec::random(su.scheme.message_bits(), cr);
  SplitRng er = rng.split("challenge-enc");
  PkeSklCt ct = pke_skl_enc(su.scheme, su.ek, m_star, er);
  BitVec guess = adv.guess(su.dvk, ct, ar);
  res.outcome = guess == m_star ? 1 : 0;
  return res;
}

namespace {

class OwHonestGuesser : public OwVraAdversary {
 public:
  OwHonestGuesser(const PkeSklScheme& s, const SklPublic& pub)
      : s_(s), pub_(pub) {}

  SklMsg1Bundle round1(const PkeSklScheme&, const PkeSklEk&,
                       const SklSecrets& god, SplitRng& rng) override {
    SplitRng r = rng.split("lessee1");
    auto [bundle, state] = skl_lessee_round1(s_.params, pub_, god, r);
    state_ = std::move(state);
    return bundle;
  }

  void round2(const SklMsg2Bundle& msg2) override {
    key_ = skl_lessee_finish(s_.params, pub_, state_, msg2);
  }

  std::optional<DeletionCert> deletion(SplitRng& rng) override {
    SplitRng r = rng.split("del");
    return skl_del(s_.params, pub_, std::move(key_), r);
  }

  BitVec guess(const SklDvk&, const PkeSklCt&, SplitRng& rng) override {
    SplitRng r = rng.split("guess");
    return BitVec::random(s_.message_bits(), r);
  }

 private:
  PkeSklScheme s_;
  const SklPublic& pub_;
  LesseeState state_;
  QuantumKey key_;
};

}  // namespace

std::unique_ptr<OwVraAdversary> make_ow_honest_guesser(const PkeSklScheme& s,
                                                       const SklPublic& pub) {
  return std::make_unique<OwHonestGuesser>(s, pub);
}

VraResult run_up_vra(PrfSklSetupOut& su, UpVraAdversary& adv, SplitRng& rng) {
  VraResult res;
  UpVraAdversary::EvalOracle oracle = [&](const BitVec& s) {
    return prf_skl_eval(su.scheme, su.msk, s);
  };
  SplitRng ar = rng.split("adv");
  SklMsg1Bundle bundle = adv.round1(su.scheme, su.pub, su.secrets, oracle, ar);
  SplitRng r2 = rng.split("lessor2");
  SklMsg2Bundle msg2;
  try {
    msg2 = prf_skl_lessor_round2(su, bundle, su.dvk, r2);
  } catch (const std::exception& e) {
    res.note = std::string("keygen aborted: ") + e.what();
    return res;
  }
  adv.round2(msg2);

  auto cert = adv.deletion(oracle, ar);
  if (!cert) {
    res.note = "adversary refused to delete";
    return res;
  }
  DelVrfyReport v = skl_del_vrfy(su.scheme.params, su.dvk, *cert);
  res.cert_accepted = v.ok;
  if (!v.ok) {
    res.note = "certificate rejected: " + v.diagnostic;
    return res;
  }

  // challenge: oracle access is gone from here on
  SplitRng cr = rng.split("challenge");
  BitVec s_star = BitVec::random(su.scheme.input_bits(), cr);
  BitVec t_prime = adv.predict(su.dvk, s_star, ar);
  res.outcome = t_prime == prf_skl_eval(su.scheme, su.msk, s_star) ? 1 : 0;
  return res;
}

namespace {

class UpHonestGuesser : public UpVraAdversary {
 public:
  UpHonestGuesser(const PrfSklScheme& s, const SklPublic& pub)
      : s_(s), pub_(pub) {}

  SklMsg1Bundle round1(const PrfSklScheme&, const SklPublic&,
                       const SklSecrets& god, const EvalOracle& oracle,
                       SplitRng& rng) override {
    SplitRng qr = rng.split("oracle-probe");
    oracle(BitVec::random(s_.input_bits(), qr));  // exercise the oracle
    SplitRng r = rng.split("lessee1");
    auto [bundle, state] = skl_lessee_round1(s_.params, pub_, god, r);
    state_ = std::move(state);
    return bundle;
  }

  void round2(const SklMsg2Bundle& msg2) override {
    key_ = skl_lessee_finish(s_.params, pub_, state_, msg2);
  }

  std::optional<DeletionCert> deletion(const EvalOracle&, SplitRng& rng) override {
    SplitRng r = rng.split("del");
    return skl_del(s_.params, pub_, std::move(key_), r);
  }

  BitVec predict(const SklDvk&, const BitVec&, SplitRng& rng) override {
    SplitRng r = rng.split("guess");
    return BitVec::random(s_.output_bits(), r);
  }

 private:
  PrfSklScheme s_;
  const SklPublic& pub_;
  LesseeState state_;
  QuantumKey key_;
};

}  // namespace

std::unique_ptr<UpVraAdversary> make_up_honest_guesser(const PrfSklScheme& s,
                                                       const SklPublic& pub) {
  return std::make_unique<UpHonestGuesser>(s, pub);
}

}  // namespace skl
