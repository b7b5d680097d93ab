#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "skl/skl_pke.hpp"
#include "skl/skl_prf.hpp"

namespace skl {

// Runnable versions of the security experiments. The adversaries are
// plain callables with per-phase entry points; the game drivers enforce
// phase order. Experiments that run on the toy claw-free instantiation
// demonstrate game mechanics only — the toy has no computational security,
// and the drivers say so in their notes.

// ---- cut-and-choose adaptive hardcore experiment ----

class CutChooseAdversary {
 public:
  virtual ~CutChooseAdversary() = default;
  // Step 3: given all public parameters (and, for the simulated honest
  // lessee, the god handles), output {y_i, d_i}.
  virtual std::vector<std::pair<BitVec, BitVec>> commit(
      const std::vector<NtcfPp>& pps, const std::vector<NtcfTd>& god,
      SplitRng& rng) = 0;
  // Step 6: given S and the revealed trapdoors for the complement, output
  // candidate preimages for every i in S.
  virtual std::vector<BitVec> open(const std::vector<bool>& in_s,
                                   const std::vector<NtcfTd>& revealed,
                                   SplitRng& rng) = 0;
};

struct CutChooseResult {
  int outcome = 0;      // experiment output
  bool step4_pass = false;  // equation checks on the two-to-one half
  std::string note;
};

CutChooseResult run_cut_and_choose(CutChooseAdversary& adv, int n, int w,
                                   SplitRng& rng);

// Honest lessee that generates claw states, Hadamard-measures them for the
// certificate bits, and therefore cannot produce preimages at step 7.
std::unique_ptr<CutChooseAdversary> make_honest_then_delete_adversary();

// Computes claws classically from the public structure of the toy
// instantiation and keeps everything, winning the experiment; this is the
// designed insecurity of the toy, not a break of the real primitive.
std::unique_ptr<CutChooseAdversary> make_keep_everything_adversary();

// ---- verification-revealing-attack games ----

class OwVraAdversary {
 public:
  virtual ~OwVraAdversary() = default;
  virtual SklMsg1Bundle round1(const PkeSklScheme& s, const PkeSklEk& ek,
                               const SklSecrets& god, SplitRng& rng) = 0;
  virtual void round2(const SklMsg2Bundle& msg2) = 0;
  // returns nullopt to refuse deletion
  virtual std::optional<DeletionCert> deletion(SplitRng& rng) = 0;
  virtual BitVec guess(const SklDvk& dvk, const PkeSklCt& challenge,
                       SplitRng& rng) = 0;
};

struct VraResult {
  int outcome = 0;  // 1 iff the adversary won
  bool cert_accepted = false;
  std::string note;
};

VraResult run_ow_vra(PkeSklSetupOut& su, OwVraAdversary& adv, SplitRng& rng);

// honest lessee that deletes honestly and then guesses uniformly
std::unique_ptr<OwVraAdversary> make_ow_honest_guesser(const PkeSklScheme& s,
                                                       const SklPublic& pub);

class UpVraAdversary {
 public:
  virtual ~UpVraAdversary() = default;
  using EvalOracle = std::function<BitVec(const BitVec&)>;
  virtual SklMsg1Bundle round1(const PrfSklScheme& s, const SklPublic& pub,
                               const SklSecrets& god, const EvalOracle& oracle,
                               SplitRng& rng) = 0;
  virtual void round2(const SklMsg2Bundle& msg2) = 0;
  virtual std::optional<DeletionCert> deletion(const EvalOracle& oracle,
                                               SplitRng& rng) = 0;
  virtual BitVec predict(const SklDvk& dvk, const BitVec& challenge,
                         SplitRng& rng) = 0;
};

VraResult run_up_vra(PrfSklSetupOut& su, UpVraAdversary& adv, SplitRng& rng);

std::unique_ptr<UpVraAdversary> make_up_honest_guesser(const PrfSklScheme& s,
                                                       const SklPublic& pub);

}  // namespace skl
