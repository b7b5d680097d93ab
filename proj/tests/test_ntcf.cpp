#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "skl/ntcf.hpp"

using namespace skl;

TEST_CASE("two-to-one mode is exactly 2-to-1 (exhaustive w=4 and w=6)") {
  for (int w : {4, 6}) {
    SplitRng rng(uint64_t(w));
    auto [pp, td] = ntcf_func_gen(w, NtcfMode::two_to_one, rng);
    CHECK(!td.delta.is_zero());
    std::map<uint64_t, std::set<uint64_t>> fibers;
    for (uint64_t x = 0; x < (uint64_t(1) << w); x++) {
      BitVec xb = BitVec::from_u64(x, size_t(w));
      fibers[ntcf_eval(pp, xb).to_u64()].insert(x);
    }
    CHECK(fibers.size() == (size_t(1) << (w - 1)));
    for (const auto& [y, xs] : fibers) {
      CHECK(xs.size() == 2);
      uint64_t a = *xs.begin(), b = *xs.rbegin();
      CHECK((a ^ b) == td.delta.to_u64());
    }
  }
}

TEST_CASE("injective mode is a bijection (exhaustive w=4)") {
  SplitRng rng(11);
  auto [pp, td] = ntcf_func_gen(4, NtcfMode::injective, rng);
  std::set<uint64_t> imgs;
  for (uint64_t x = 0; x < 16; x++)
    imgs.insert(ntcf_eval(pp, BitVec::from_u64(x, 4)).to_u64());
  CHECK(imgs.size() == 16);
}

TEST_CASE("chk accepts exactly the claw (exhaustive flips at w=4)") {
  SplitRng rng(13);
  auto [pp, td] = ntcf_func_gen(4, NtcfMode::two_to_one, rng);
  SplitRng sr = rng.split("sg");
  auto [y, psi] = ntcf_state_gen(pp, td, sr);
  for (const auto& b : psi.branches()) CHECK(ntcf_chk(pp, b.reg("x"), y));
  const BitVec x0 = psi.branches()[0].reg("x");
  for (uint64_t flip = 1; flip < 16; flip++) {
    BitVec f = x0 ^ BitVec::from_u64(flip, 4);
    bool expect = (flip == td.delta.to_u64());
    CHECK(ntcf_chk(pp, f, y) == expect);
  }
  BitVec off = y;
  // some y outside the image: find one by scanning
  for (uint64_t v = 0; v < 16; v++) {
    BitVec cand = BitVec::from_u64(v, 4);
    if (!ntcf_invert(td, cand)) {
      for (uint64_t x = 0; x < 16; x++)
        CHECK(!ntcf_chk(pp, BitVec::from_u64(x, 4), cand));
      break;
    }
  }
}

TEST_CASE("invert returns the ordered claw or rejects off-image points") {
  SplitRng rng(17);
  auto [pp, td] = ntcf_func_gen(4, NtcfMode::two_to_one, rng);
  int off_image = 0;
  for (uint64_t v = 0; v < 16; v++) {
    BitVec y = BitVec::from_u64(v, 4);
    auto pre = ntcf_invert(td, y);
    if (!pre) {
      off_image++;
      continue;
    }
    REQUIRE(pre->size() == 2);
    CHECK((*pre)[0] < (*pre)[1]);
    CHECK(((*pre)[0] ^ (*pre)[1]) == td.delta);
    CHECK(ntcf_eval(pp, (*pre)[0]) == y);
  }
  CHECK(off_image == 8);  // exactly half the strings are off-image

  auto [ppi, tdi] = ntcf_func_gen(4, NtcfMode::injective, rng);
  for (uint64_t v = 0; v < 16; v++) {
    auto pre = ntcf_invert(tdi, BitVec::from_u64(v, 4));
    REQUIRE(pre.has_value());
    CHECK(pre->size() == 1);
  }
}

TEST_CASE("public preimage enumeration matches trapdoor inversion") {
  SplitRng rng(19);
  for (int w : {4, 5, 8}) {
    auto [pp, td] = ntcf_func_gen(w, NtcfMode::two_to_one, rng);
    for (uint64_t v = 0; v < (uint64_t(1) << w); v++) {
      BitVec y = BitVec::from_u64(v, size_t(w));
      auto a = ntcf_invert(td, y);
      auto b = ntcf_preimages(pp, y);
      if (!a) {
        CHECK(b.empty());
      } else {
        REQUIRE(a->size() == b.size());
        for (size_t i = 0; i < b.size(); i++) CHECK((*a)[i] == b[i]);
      }
    }
  }
}

TEST_CASE("good_set density is 1 - 2^-w for honest images") {
  SplitRng rng(23);
  auto [pp, td] = ntcf_func_gen(4, NtcfMode::two_to_one, rng);
  SplitRng sr = rng.split("sg");
  auto [y, psi] = ntcf_state_gen(pp, td, sr);
  int good = 0;
  for (uint64_t d = 0; d < 16; d++)
    good += ntcf_good_set(td, y, BitVec::from_u64(d, 4)) ? 1 : 0;
  CHECK(good == 15);  // everything except d = 0
  CHECK(!ntcf_good_set(td, y, BitVec::from_u64(0, 4)));
  // off-image y rejects every d
  for (uint64_t v = 0; v < 16; v++) {
    BitVec cand = BitVec::from_u64(v, 4);
    if (!ntcf_invert(td, cand)) {
      for (uint64_t d = 0; d < 16; d++)
        CHECK(!ntcf_good_set(td, cand, BitVec::from_u64(d, 4)));
      break;
    }
  }
}

TEST_CASE("state generation produces checked claw states") {
  SplitRng rng(29);
  auto [pp, td] = ntcf_func_gen(6, NtcfMode::two_to_one, rng);
  for (int t = 0; t < 20; t++) {
    SplitRng r = rng.split("t", uint64_t(t));
    auto [y, psi] = ntcf_state_gen(pp, td, r);
    REQUIRE(psi.branch_count() == 2);
    const BitVec x0 = psi.branches()[0].reg("x");
    const BitVec x1 = psi.branches()[1].reg("x");
    CHECK(x0 != x1);
    CHECK((x0 ^ x1) == td.delta);
    CHECK(ntcf_chk(pp, x0, y));
    CHECK(ntcf_chk(pp, x1, y));
    // the hardcore equation target is well-defined
    SplitRng dr = r.split("d");
    BitVec d = BitVec::random(6, dr);
    CHECK(gf2_inner(d, x0 ^ x1) == gf2_inner(d, td.delta));
  }
  auto [ppi, tdi] = ntcf_func_gen(6, NtcfMode::injective, rng);
  SplitRng r = rng.split("inj");
  auto [y, psi] = ntcf_state_gen(ppi, tdi, r);
  CHECK(psi.branch_count() == 1);
  CHECK(ntcf_chk(ppi, psi.branches()[0].reg("x"), y));
}

TEST_CASE("odd input widths work through the cycle walk") {
  SplitRng rng(31);
  auto [pp, td] = ntcf_func_gen(5, NtcfMode::two_to_one, rng);
  std::map<uint64_t, int> fiber;
  for (uint64_t x = 0; x < 32; x++)
    fiber[ntcf_eval(pp, BitVec::from_u64(x, 5)).to_u64()]++;
  for (const auto& [y, c] : fiber) CHECK(c == 2);
}

TEST_CASE("pp and td serialization round-trips") {
  SplitRng rng(37);
  auto [pp, td] = ntcf_func_gen(8, NtcfMode::two_to_one, rng);
  auto pb = pp.serialize();
  size_t pos = 0;
  NtcfPp pp2 = NtcfPp::deserialize(pb, pos);
  CHECK(pos == pb.size());
  CHECK(pp2.w == pp.w);
  CHECK(pp2.seed == pp.seed);
  CHECK(pp2.mode == pp.mode);
  auto tb = td.serialize();
  pos = 0;
  NtcfTd td2 = NtcfTd::deserialize(tb, pos);
  CHECK(pos == tb.size());
  CHECK(td2.delta == td.delta);
  // format-level indistinguishability: pp blobs have equal length per mode
  auto [ppi, tdi] = ntcf_func_gen(8, NtcfMode::injective, rng);
  CHECK(ppi.serialize().size() == pp.serialize().size());
}

TEST_CASE("delta = 0 is impossible by construction") {
  SplitRng rng(41);
  for (int t = 0; t < 200; t++) {
    auto [pp, td] = ntcf_func_gen(2, NtcfMode::two_to_one, rng);
    CHECK(!td.delta.is_zero());
  }
}
