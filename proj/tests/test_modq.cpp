#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "skl/trapdoor.hpp"

using namespace skl;

TEST_CASE("centered arithmetic is exact") {
  Zq zq(Int(23));
  CHECK(zq.center_int(Int(24)) == 1);
  CHECK(zq.center_int(Int(-12)) == 11);  // -12 = 11 mod 23
  CHECK(zq.center_int(Int(12)) == -11);
  CHECK(zq.center_int(Int(11)) == 11);
  SplitRng rng(5);
  for (int t = 0; t < 2000; t++) {
    Int a = zq.uniform(rng, 5);
    Int b = zq.uniform(rng, 5);
    CHECK(zq.sub(zq.add(a, b), b) == a);
    CHECK(zq.mul(a, b) == zq.mul(b, a));
    CHECK(a <= zq.half);
    CHECK(a >= -zq.half);
  }
}

TEST_CASE("presets validate") {
  LatticeParams demo = LatticeParams::demo_preset();
  CHECK(demo.m == 372);
  CHECK(demo.mbar() == 248);
  LatticeParams full = LatticeParams::full_preset();
  CHECK(full.m == 1500);
  CHECK(full.messy_enabled);
  // m^2 sigma' tau <= q/8 on the full preset
  WideInt lhs = WideInt(full.m) * full.m * full.sigma_prime * WideInt(full.tau) * 8;
  CHECK(lhs <= WideInt(full.q));
}

TEST_CASE("integer serialization round-trips") {
  SplitRng rng(7);
  Zq zq(LatticeParams::full_preset().q);
  std::vector<uint8_t> buf;
  std::vector<Int> vals;
  for (int t = 0; t < 500; t++) {
    Int v = zq.uniform(rng, 150);
    vals.push_back(v);
    encode_int(buf, v);
  }
  encode_int(buf, Int(0));
  size_t pos = 0;
  for (const Int& v : vals) CHECK(decode_int(buf, pos) == v);
  CHECK(decode_int(buf, pos) == 0);
  CHECK(pos == buf.size());
}

TEST_CASE("vector and matrix serialization round-trips") {
  SplitRng rng(11);
  LatticeParams p = LatticeParams::demo_preset();
  Zq zq(p.q);
  ModQVector v = uniform_vec(zq, p.k, 37, rng);
  ModQMatrix m = uniform_mat(zq, p.k, 5, 9, rng);
  std::vector<uint8_t> buf;
  encode_vec(buf, v);
  encode_mat(buf, m);
  size_t pos = 0;
  CHECK(decode_vec(buf, pos) == v);
  ModQMatrix m2 = decode_mat(buf, pos);
  CHECK(m2.rows == m.rows);
  CHECK(m2.a == m.a);
  CHECK(pos == buf.size());
}

TEST_CASE("fixed-width bit encoding round-trips") {
  SplitRng rng(13);
  LatticeParams p = LatticeParams::demo_preset();
  Zq zq(p.q);
  for (int t = 0; t < 50; t++) {
    ModQVector v = uniform_vec(zq, p.k, 7, rng);
    BitVec bits = vec_to_bits(zq, p.k, v);
    CHECK(bits.size() == 7 * size_t(p.k));
    CHECK(bits_to_vec(zq, p.k, bits) == v);
  }
}

TEST_CASE("trapdoor inversion recovers planted secrets (demo preset)") {
  LatticeParams p = LatticeParams::demo_preset();
  Zq zq(p.q);
  SplitRng rng(17);
  GadgetTrapdoor td = trap_gen(p, rng);
  for (int t = 0; t < 50; t++) {
    ModQVector s = uniform_vec(zq, p.k, p.n, rng);
    ModQVector e = sample_gauss_vec(p.gauss_sigma_prime(), p.m,
                                    rng.split("e", uint64_t(t)));
    ModQVector v = vec_add(zq, vec_mat(zq, s, td.A), e);
    auto sol = invert_lwe(p, td, v);
    REQUIRE(sol.has_value());
    CHECK(sol->s == s);
    CHECK(sol->e == e);
  }
}

TEST_CASE("trapdoor inversion at n=16 with a 64-bit prime") {
  LatticeParams p;
  p.name = "n16";
  p.n = 16;
  p.k = 62;
  p.q = Int("4611686018427387847");
  p.m = 2 * (p.n + 1) * p.k;
  p.sigma = 4;
  p.sigma_prime = 1 << 10;
  p.tau = 1 << 10;
  p.messy_enabled = false;
  p.validate();
  Zq zq(p.q);
  SplitRng rng(19);
  GadgetTrapdoor td = trap_gen(p, rng);
  ModQVector s = uniform_vec(zq, p.k, p.n, rng);
  ModQVector e = sample_gauss_vec(p.gauss_sigma_prime(), p.m, rng.split("e"));
  ModQVector v = vec_add(zq, vec_mat(zq, s, td.A), e);
  auto sol = invert_lwe(p, td, v);
  REQUIRE(sol.has_value());
  CHECK(sol->s == s);
  CHECK(sol->e == e);
}

TEST_CASE("noiseless inversion returns (s, 0)") {
  LatticeParams p = LatticeParams::demo_preset();
  Zq zq(p.q);
  SplitRng rng(23);
  GadgetTrapdoor td = trap_gen(p, rng);
  ModQVector s = uniform_vec(zq, p.k, p.n, rng);
  ModQVector v = vec_mat(zq, s, td.A);
  auto sol = invert_lwe(p, td, v);
  REQUIRE(sol.has_value());
  CHECK(sol->s == s);
  CHECK(norm2(sol->e) == 0);
}

TEST_CASE("uniform vectors fail inversion") {
  LatticeParams p = LatticeParams::demo_preset();
  Zq zq(p.q);
  SplitRng rng(29);
  GadgetTrapdoor td = trap_gen(p, rng);
  int fail = 0;
  const int trials = 200;
  for (int t = 0; t < trials; t++) {
    ModQVector v = uniform_vec(zq, p.k, p.m, rng);
    if (!invert_lwe(p, td, v)) fail++;
  }
  CHECK(double(fail) / trials >= 0.99);
}

TEST_CASE("byte entropy of A is near uniform") {
  LatticeParams p = LatticeParams::demo_preset();
  SplitRng rng(31);
  GadgetTrapdoor td = trap_gen(p, rng);
  // low bytes of the canonical representatives should be uniform
  Zq zq(p.q);
  std::map<uint8_t, int> counts;
  int total = 0;
  for (const Int& x : td.A.a) {
    counts[uint8_t(zq.canonical(x) & 0xff)]++;
    total++;
  }
  double expect = double(total) / 256.0;
  double chi2 = 0;
  for (int b = 0; b < 256; b++) {
    double d = double(counts[uint8_t(b)]) - expect;
    chi2 += d * d / expect;
  }
  CHECK(chi2 < 360.0);  // dof 255, far beyond the 0.001 quantile
}

TEST_CASE("is_messy separates structured from uniform on the full preset") {
  LatticeParams p = LatticeParams::full_preset();
  Zq zq(p.q);
  SplitRng rng(37);
  GadgetTrapdoor td = trap_gen(p, rng);
  int structured_flagged = 0, uniform_flagged = 0;
  const int trials = 20;
  for (int t = 0; t < trials; t++) {
    ModQVector s = uniform_vec(zq, p.k, p.n, rng);
    ModQVector e = sample_gauss_vec(p.gauss_sigma_prime(), p.m,
                                    rng.split("e", uint64_t(t)));
    ModQVector v = vec_add(zq, vec_mat(zq, s, td.A), e);
    structured_flagged += is_messy(p, td, v);
    ModQVector u = uniform_vec(zq, p.k, p.m, rng);
    uniform_flagged += is_messy(p, td, u);
  }
  CHECK(structured_flagged == 0);
  CHECK(uniform_flagged == trials);
  // noiseless point is not messy
  ModQVector s = uniform_vec(zq, p.k, p.n, rng);
  CHECK(is_messy(p, td, vec_mat(zq, s, td.A)) == 0);
}

TEST_CASE("is_messy refuses presets without the tau bound") {
  LatticeParams p = LatticeParams::demo_preset();
  SplitRng rng(41);
  GadgetTrapdoor td = trap_gen(p, rng);
  Zq zq(p.q);
  ModQVector v = uniform_vec(zq, p.k, p.m, rng);
  CHECK_THROWS(is_messy(p, td, v));
}
