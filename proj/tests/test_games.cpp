#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skl/games.hpp"

using namespace skl;

TEST_CASE("cut-and-choose: the honest-then-delete adversary loses at step 7") {
  SplitRng rng(1);
  int outcome1 = 0, step4 = 0;
  const int runs = 40;
  for (int t = 0; t < runs; t++) {
    auto adv = make_honest_then_delete_adversary();
    SplitRng r = rng.split("run", uint64_t(t));
    CutChooseResult res = run_cut_and_choose(*adv, 4, 16, r);
    outcome1 += res.outcome;
    step4 += res.step4_pass ? 1 : 0;
  }
  CHECK(outcome1 == 0);
  CHECK(step4 >= runs - 1);  // good-set failures are ~ 2n * 2^-(w-1)
}

TEST_CASE("cut-and-choose: the keep-everything adversary wins on the toy") {
  SplitRng rng(2);
  for (int t = 0; t < 10; t++) {
    auto adv = make_keep_everything_adversary();
    SplitRng r = rng.split("run", uint64_t(t));
    CutChooseResult res = run_cut_and_choose(*adv, 4, 8, r);
    CHECK(res.step4_pass);
    CHECK(res.outcome == 1);
    CHECK(res.note.find("toy") != std::string::npos);
  }
}

TEST_CASE("cut-and-choose: n = 1 runs without error") {
  SplitRng rng(3);
  auto adv = make_honest_then_delete_adversary();
  CutChooseResult res = run_cut_and_choose(*adv, 1, 8, rng);
  CHECK(res.outcome == 0);
}

TEST_CASE("cut-and-choose: protocol violations score zero") {
  class Malformed : public CutChooseAdversary {
   public:
    std::vector<std::pair<BitVec, BitVec>> commit(const std::vector<NtcfPp>&,
                                                  const std::vector<NtcfTd>&,
                                                  SplitRng&) override {
      return {};  // wrong count
    }
    std::vector<BitVec> open(const std::vector<bool>&,
                             const std::vector<NtcfTd>&, SplitRng&) override {
      return {};
    }
  } adv;
  SplitRng rng(4);
  CutChooseResult res = run_cut_and_choose(adv, 2, 8, rng);
  CHECK(res.outcome == 0);
  CHECK(!res.note.empty());
}

TEST_CASE("ow-vra: refusing to delete scores zero") {
  class Refuser : public OwVraAdversary {
   public:
    Refuser(const PkeSklScheme& s, const SklPublic& pub) : s_(s), pub_(&pub) {}
    SklMsg1Bundle round1(const PkeSklScheme&, const PkeSklEk&,
                         const SklSecrets& god, SplitRng& rng) override {
      auto [bundle, state] = skl_lessee_round1(s_.params, *pub_, god, rng);
      return bundle;
    }
    void round2(const SklMsg2Bundle&) override {}
    std::optional<DeletionCert> deletion(SplitRng&) override { return std::nullopt; }
    BitVec guess(const SklDvk&, const PkeSklCt&, SplitRng&) override {
      return BitVec(s_.message_bits());
    }

   private:
    PkeSklScheme s_;
    const SklPublic* pub_;
  };
  SplitRng rng(5);
  PkeSklSetupOut su = pke_skl_setup(2, 4, LatticeParams::demo_preset(),
                                    PkeScheme::toy_scheme(), rng);
  Refuser adv(su.scheme, su.ek.pub);
  VraResult res = run_ow_vra(su, adv, rng);
  CHECK(res.outcome == 0);
  CHECK(!res.cert_accepted);
}

TEST_CASE("ow-vra: the honest deleter passes verification and wins at the "
          "uniform-guess rate") {
  SplitRng rng(6);
  int accepted = 0, wins = 0;
  const int runs = 300;
  for (int t = 0; t < runs; t++) {
    SplitRng sr = rng.split("setup", uint64_t(t));
    // smallest message space: n=1, w=2 gives 4 message bits
    PkeSklSetupOut su = pke_skl_setup(1, 2, LatticeParams::demo_preset(),
                                      PkeScheme::toy_scheme(), sr);
    auto adv = make_ow_honest_guesser(su.scheme, su.ek.pub);
    SplitRng gr = rng.split("game", uint64_t(t));
    VraResult res = run_ow_vra(su, *adv, gr);
    accepted += res.cert_accepted ? 1 : 0;
    wins += res.outcome;
  }
  CHECK(accepted == runs);
  // expected win rate 2^-4 = 0.0625
  double rate = double(wins) / runs;
  CHECK(rate > 0.01);
  CHECK(rate < 0.15);
}

TEST_CASE("up-vra: honest deleter passes; uniform prediction wins at 2^-|t|") {
  SplitRng rng(7);
  int accepted = 0, wins = 0;
  const int runs = 300;
  for (int t = 0; t < runs; t++) {
    SplitRng sr = rng.split("setup", uint64_t(t));
    PrfSklSetupOut su =
        prf_skl_setup(1, 2, 8, LatticeParams::demo_preset(), sr);
    auto adv = make_up_honest_guesser(su.scheme, su.pub);
    SplitRng gr = rng.split("game", uint64_t(t));
    VraResult res = run_up_vra(su, *adv, gr);
    accepted += res.cert_accepted ? 1 : 0;
    wins += res.outcome;
  }
  CHECK(accepted == runs);
  double rate = double(wins) / runs;  // range is 4 bits -> 1/16
  CHECK(rate > 0.01);
  CHECK(rate < 0.15);
}

TEST_CASE("up-vra: the evaluation oracle answers with master-key values") {
  SplitRng rng(8);
  PrfSklSetupOut su = prf_skl_setup(2, 4, 8, LatticeParams::demo_preset(), rng);
  class OracleChecker : public UpVraAdversary {
   public:
    explicit OracleChecker(PrfSklSetupOut& su) : su_(&su) {}
    SklMsg1Bundle round1(const PrfSklScheme& s, const SklPublic& pub,
                         const SklSecrets& god, const EvalOracle& oracle,
                         SplitRng& rng) override {
      BitVec q = BitVec::random(s.input_bits(), rng);
      oracle_consistent_ = oracle(q) == prf_skl_eval(su_->scheme, su_->msk, q);
      auto [bundle, state] = skl_lessee_round1(s.params, pub, god, rng);
      state_ = std::move(state);
      return bundle;
    }
    void round2(const SklMsg2Bundle& m) override {
      key_ = skl_lessee_finish(su_->scheme.params, su_->pub, state_, m);
    }
    std::optional<DeletionCert> deletion(const EvalOracle&, SplitRng& rng) override {
      return skl_del(su_->scheme.params, su_->pub, std::move(key_), rng);
    }
    BitVec predict(const SklDvk&, const BitVec&, SplitRng& rng) override {
      return BitVec::random(su_->scheme.output_bits(), rng);
    }
    bool oracle_consistent_ = false;

   private:
    PrfSklSetupOut* su_;
    LesseeState state_;
    QuantumKey key_;
  } adv(su);
  VraResult res = run_up_vra(su, adv, rng);
  CHECK(adv.oracle_consistent_);
  CHECK(res.cert_accepted);
}
