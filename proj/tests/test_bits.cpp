#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "skl/bits.hpp"

using namespace skl;

TEST_CASE("gf2_inner on the pinned examples") {
  CHECK(gf2_inner(BitVec::from_string("101"), BitVec::from_string("110")) == 1);
  SplitRng rng(7);
  for (int t = 0; t < 20; t++) {
    BitVec x = BitVec::random(4, rng);
    CHECK(gf2_inner(BitVec::from_string("0000"), x) == 0);
  }
  CHECK(gf2_inner(BitVec::from_string("1111"), BitVec::from_string("1111")) == 0);
  CHECK_THROWS(gf2_inner(BitVec(3), BitVec(4)));
}

TEST_CASE("gf2_inner is bilinear") {
  SplitRng rng(11);
  for (int t = 0; t < 200; t++) {
    size_t len = 1 + rng.below(100);
    BitVec a = BitVec::random(len, rng);
    BitVec a2 = BitVec::random(len, rng);
    BitVec b = BitVec::random(len, rng);
    CHECK(gf2_inner(a ^ a2, b) == (gf2_inner(a, b) ^ gf2_inner(a2, b)));
  }
}

TEST_CASE("block_recompose on the pinned examples") {
  BlockTable t = BlockTable::make(2, 2);
  t.alpha(0, 0) = BitVec::from_string("00");
  t.alpha(0, 1) = BitVec::from_string("11");
  t.alpha(1, 0) = BitVec::from_string("01");
  t.alpha(1, 1) = BitVec::from_string("10");
  CHECK(block_recompose(t, BitVec::from_string("10")) == BitVec::from_string("1101"));
  CHECK(block_recompose(t, BitVec::from_string("00")) ==
        t.alpha(0, 0).concat(t.alpha(1, 0)));
  BlockTable empty = BlockTable::make(3, 0);
  CHECK(block_recompose(empty, BitVec::from_string("101")).size() == 0);
  CHECK_THROWS(block_recompose(t, BitVec::from_string("1")));
}

// d*[j] = <c_j, alpha_j^0 ^ alpha_j^1> satisfies
// <c, recompose(t,x0) ^ recompose(t,x1)> = <d*, x0 ^ x1>
static void check_block_identity(const BlockTable& t, const BitVec& x0,
                                 const BitVec& x1, const BitVec& c) {
  BitVec lhs_vec = block_recompose(t, x0) ^ block_recompose(t, x1);
  int lhs = gf2_inner(c, lhs_vec);
  BitVec dstar(t.w);
  for (size_t j = 0; j < t.w; j++) {
    BitVec cj = c.slice(j * t.u, t.u);
    dstar.set(j, gf2_inner(cj, t.alpha(j, 0) ^ t.alpha(j, 1)) != 0);
  }
  int rhs = gf2_inner(dstar, x0 ^ x1);
  REQUIRE(lhs == rhs);
}

TEST_CASE("block identity exhaustively at w,u <= 3") {
  SplitRng rng(13);
  for (size_t w = 1; w <= 3; w++)
    for (size_t u = 1; u <= 3; u++) {
      BlockTable t = BlockTable::make(w, u);
      for (size_t j = 0; j < w; j++)
        for (int b = 0; b < 2; b++) t.alpha(j, b) = BitVec::random(u, rng);
      for (uint64_t x0 = 0; x0 < (uint64_t(1) << w); x0++)
        for (uint64_t x1 = 0; x1 < (uint64_t(1) << w); x1++)
          for (uint64_t c = 0; c < (uint64_t(1) << (w * u)); c++)
            check_block_identity(t, BitVec::from_u64(x0, w),
                                 BitVec::from_u64(x1, w),
                                 BitVec::from_u64(c, w * u));
    }
}

TEST_CASE("block identity on random larger tables") {
  SplitRng rng(17);
  for (int trial = 0; trial < 10000; trial++) {
    size_t w = 1 + rng.below(8);
    size_t u = 1 + rng.below(16);
    BlockTable t = BlockTable::make(w, u);
    for (size_t j = 0; j < w; j++)
      for (int b = 0; b < 2; b++) t.alpha(j, b) = BitVec::random(u, rng);
    check_block_identity(t, BitVec::random(w, rng), BitVec::random(w, rng),
                         BitVec::random(w * u, rng));
  }
}

TEST_CASE("coset_sample respects the constraint") {
  SplitRng rng(19);
  for (int t = 0; t < 2000; t++) {
    size_t len = 1 + rng.below(64);
    BitVec delta = BitVec::random(len, rng);
    int theta = delta.is_zero() ? 0 : int(rng.next_bit());
    BitVec v = coset_sample(delta, theta, rng);
    CHECK(gf2_inner(v, delta) == theta);
  }
}

TEST_CASE("coset_sample edge cases") {
  SplitRng rng(23);
  BitVec zero(5);
  BitVec v = coset_sample(zero, 0, rng);
  CHECK(v.size() == 5);
  CHECK_THROWS(coset_sample(zero, 1, rng));
}

TEST_CASE("coset_sample is uniform on its coset (chi-squared, L <= 4)") {
  SplitRng rng(29);
  for (size_t L = 2; L <= 4; L++) {
    BitVec delta = BitVec::random(L, rng);
    if (delta.is_zero()) delta.set(0, true);
    const int trials = 40000;
    std::map<uint64_t, int> counts;
    for (int t = 0; t < trials; t++)
      counts[coset_sample(delta, 0, rng).to_u64()]++;
    const size_t coset_size = size_t(1) << (L - 1);
    CHECK(counts.size() == coset_size);
    double expect = double(trials) / double(coset_size);
    double chi2 = 0;
    for (const auto& [v, c] : counts) {
      double dd = double(c) - expect;
      chi2 += dd * dd / expect;
    }
    // dof = coset_size - 1 <= 7; 40.0 is far beyond the 0.001 quantile
    CHECK(chi2 < 40.0);
  }
}

TEST_CASE("example for delta=010: coset is the even-middle-bit set") {
  SplitRng rng(31);
  BitVec delta = BitVec::from_string("010");
  std::map<uint64_t, int> seen;
  for (int t = 0; t < 4000; t++) seen[coset_sample(delta, 0, rng).to_u64()]++;
  // strings with bit 1 clear: 000,001,100,101 -> packed values 0,4,1,5
  CHECK(seen.size() == 4);
  for (const auto& [v, c] : seen) CHECK((v & 2) == 0);
}

TEST_CASE("BitVec bytes round-trip") {
  SplitRng rng(37);
  for (int t = 0; t < 500; t++) {
    size_t len = rng.below(200);
    BitVec v = BitVec::random(len, rng);
    CHECK(BitVec::from_bytes(v.to_bytes(), len) == v);
  }
}

TEST_CASE("BitVec slice/concat are inverses") {
  SplitRng rng(41);
  for (int t = 0; t < 200; t++) {
    BitVec a = BitVec::random(rng.below(50), rng);
    BitVec b = BitVec::random(rng.below(50), rng);
    BitVec cat = a.concat(b);
    CHECK(cat.slice(0, a.size()) == a);
    CHECK(cat.slice(a.size(), b.size()) == b);
  }
}
