#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "skl/ot.hpp"

using namespace skl;

TEST_CASE("full pipeline is correct for every (mode, b, z0, z1)") {
  LatticeParams p = LatticeParams::demo_preset();
  SplitRng rng(1);
  for (int rep = 0; rep < 4; rep++) {
    for (int mode : {1, 2}) {
      SplitRng cr = rng.split("crs", uint64_t(rep * 2 + mode));
      auto [crs, td] = ot_crs_gen(p, mode, cr);
      for (int b = 0; b < 2; b++)
        for (int z0 = 0; z0 < 2; z0++)
          for (int z1 = 0; z1 < 2; z1++) {
            SplitRng r1 = rng.split("r", uint64_t(rep * 100 + b * 4 + z0 * 2 + z1));
            auto rec = ot_receive1(p, crs, b, r1);
            OtMsg2 m2 = ot_send(p, crs, rec.msg1, z0, z1, r1);
            CHECK(ot_receive2(p, crs, b, rec.st, m2) == (b ? z1 : z0));
          }
    }
  }
}

TEST_CASE("mode-2 CRS carries a planted LWE sample; mode-1 does not") {
  LatticeParams p = LatticeParams::demo_preset();
  SplitRng rng(2);
  auto [crs2, td2] = ot_crs_gen(p, 2, rng.split("h"));
  CHECK(invert_lwe(p, td2.gt, crs2.v).has_value());
  int fails = 0;
  for (int t = 0; t < 50; t++) {
    auto [crs1, td1] = ot_crs_gen(p, 1, rng.split("e", uint64_t(t)));
    if (!invert_lwe(p, td1.gt, crs1.v)) fails++;
  }
  CHECK(fails >= 49);
}

TEST_CASE("crs generation is deterministic under a fixed stream") {
  LatticeParams p = LatticeParams::demo_preset();
  SplitRng a(77), b(77);
  auto [c1, t1] = ot_crs_gen(p, 2, a);
  auto [c2, t2] = ot_crs_gen(p, 2, b);
  CHECK(c1.A.a == c2.A.a);
  CHECK(c1.v == c2.v);
}

TEST_CASE("unique state: recovery returns the honest receiver state") {
  LatticeParams p = LatticeParams::demo_preset();
  SplitRng rng(3);
  auto [crs, td] = ot_crs_gen(p, 2, rng.split("crs"));
  for (int b = 0; b < 2; b++) {
    for (int t = 0; t < 20; t++) {
      SplitRng r = rng.split("r", uint64_t(b * 100 + t));
      auto rec = ot_receive1(p, crs, b, r);
      auto [a0, a1] = ot_sta_rcv(p, td, rec.msg1);
      REQUIRE(a0.has_value());
      REQUIRE(a1.has_value());
      CHECK((b == 0 ? a0 : a1)->r == rec.st.r);
    }
  }
  // garbage first message: both branches unrecoverable
  Zq zq(p.q);
  int both_fail = 0;
  for (int t = 0; t < 20; t++) {
    SplitRng r = rng.split("g", uint64_t(t));
    ModQVector garbage = uniform_vec(zq, p.k, p.m, r);
    auto [a0, a1] = ot_sta_rcv(p, td, garbage);
    if (!a0 && !a1) both_fail++;
  }
  CHECK(both_fail == 20);
}

TEST_CASE("extraction recovers the honest choice bit (full preset)") {
  LatticeParams p = LatticeParams::full_preset();
  SplitRng rng(4);
  auto [crs, td] = ot_crs_gen(p, 1, rng.split("crs"));
  int good = 0;
  const int trials = 12;
  for (int t = 0; t < trials; t++) {
    int b = t & 1;
    SplitRng r = rng.split("r", uint64_t(t));
    auto rec = ot_receive1(p, crs, b, r);
    auto got = ot_extract(p, td, rec.msg1);
    if (got && *got == b) good++;
  }
  CHECK(good == trials);
  // uniform adversarial message: never both branches structured
  Zq zq(p.q);
  for (int t = 0; t < 6; t++) {
    SplitRng r = rng.split("u", uint64_t(t));
    ModQVector u = uniform_vec(zq, p.k, p.m, r);
    auto got = ot_extract(p, td, u);
    CHECK(!got.has_value());  // both branches messy
  }
}

TEST_CASE("simulated sender message decodes to the planted bit") {
  LatticeParams p = LatticeParams::demo_preset();
  SplitRng rng(5);
  auto [crs, td] = ot_crs_gen(p, 2, rng.split("crs"));
  for (int b = 0; b < 2; b++)
    for (int zb = 0; zb < 2; zb++) {
      SplitRng r = rng.split("r", uint64_t(b * 2 + zb));
      auto rec = ot_receive1(p, crs, b, r);
      OtMsg2 m2 = ot_simulate_send(p, crs, rec.msg1, zb, r);
      CHECK(ot_receive2(p, crs, b, rec.st, m2) == zb);
      // both encodings carry the same payload
      CHECK(ot_receive2(p, crs, 1 - b, rec.st, m2) == zb);
    }
}

static BranchState bit_superposition(double a0, double a1) {
  BranchState::Branch b0, b1;
  b0.amp = a0;
  b0.regs.emplace_back("b", BitVec::from_string("0"));
  b1.amp = a1;
  b1.regs.emplace_back("b", BitVec::from_string("1"));
  return BranchState::make({b0, b1});
}

TEST_CASE("coherent receiver: hiding mode keeps both branches (demo)") {
  LatticeParams p = LatticeParams::demo_preset();
  SplitRng rng(6);
  auto [crs, td] = ot_crs_gen(p, 2, rng.split("crs"));
  const double inv = 1.0 / std::sqrt(2.0);
  int survived = 0;
  const int trials = 30;
  for (int t = 0; t < trials; t++) {
    SplitRng r = rng.split("t", uint64_t(t));
    auto [msg1, state] = ot_coherent_receive1(p, crs, bit_superposition(inv, inv), td, r);
    if (state.branch_count() == 2) {
      survived++;
      // both branches carry consistent receiver states for their bit
      auto [a0, a1] = ot_sta_rcv(p, td, msg1);
      REQUIRE(a0.has_value());
      REQUIRE(a1.has_value());
      CHECK(ot_state_bits(p, *a0) == state.branches()[0].reg("st"));
      CHECK(ot_state_bits(p, *a1) == state.branches()[1].reg("st"));
    }
  }
  CHECK(survived == trials);  // collapse mass is ~exp(-pi m) here
}

TEST_CASE("coherent receiver: extraction mode collapses (full preset)") {
  LatticeParams p = LatticeParams::full_preset();
  SplitRng rng(7);
  auto [crs, td] = ot_crs_gen(p, 1, rng.split("crs"));
  const double inv = 1.0 / std::sqrt(2.0);
  int collapsed = 0;
  const int trials = 10;
  for (int t = 0; t < trials; t++) {
    SplitRng r = rng.split("t", uint64_t(t));
    auto [msg1, state] =
        ot_coherent_receive1(p, crs, bit_superposition(inv, inv), td, r);
    if (state.branch_count() == 1) collapsed++;
  }
  CHECK(collapsed == trials);
}

TEST_CASE("coherent receiver with a classical bit matches receive1") {
  LatticeParams p = LatticeParams::demo_preset();
  SplitRng rng(8);
  auto [crs, td] = ot_crs_gen(p, 2, rng.split("crs"));
  // amplitudes (1, 0): distribution identical to the single-branch case
  for (int t = 0; t < 10; t++) {
    SplitRng r = rng.split("t", uint64_t(t));
    auto [msg1, state] = ot_coherent_receive1(p, crs, bit_superposition(1.0, 0.0), td, r);
    CHECK(state.branches()[0].reg("b") == BitVec::from_string("0"));
    CHECK(state.branches()[0].amp == 1.0);
    // the emitted message is decodable as an honest b=0 message
    auto [a0, a1] = ot_sta_rcv(p, td, msg1);
    CHECK(a0.has_value());
  }
  BranchState::Branch single;
  single.amp = 1.0;
  single.regs.emplace_back("b", BitVec::from_string("1"));
  SplitRng r = rng.split("single");
  auto [msg1, state] =
      ot_coherent_receive1(p, crs, BranchState::make({single}), td, r);
  CHECK(state.branch_count() == 1);
  CHECK(state.branches()[0].reg("st").size() == size_t(p.n) * size_t(p.k));
}

TEST_CASE("coherent branch weights follow the noise masses") {
  LatticeParams p = LatticeParams::demo_preset();
  SplitRng rng(9);
  auto [crs, td] = ot_crs_gen(p, 2, rng.split("crs"));
  const double inv = 1.0 / std::sqrt(2.0);
  SplitRng r = rng.split("t");
  auto [msg1, state] = ot_coherent_receive1(p, crs, bit_superposition(inv, inv), td, r);
  REQUIRE(state.branch_count() == 2);
  double n2 = 0;
  for (const auto& b : state.branches()) n2 += b.amp * b.amp;
  CHECK(std::abs(n2 - 1.0) < 1e-9);
}
