#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "skl/gauss.hpp"

using namespace skl;

TEST_CASE("samples stay within the truncation bound") {
  GaussSampler g(3, 64);
  CHECK(g.bound() == 24);
  SplitRng rng(1);
  for (int t = 0; t < 20000; t++) {
    int64_t x = g.sample(rng);
    CHECK(x >= -24);
    CHECK(x <= 24);
  }
}

TEST_CASE("vanishing width forces the zero vector") {
  // sigma=1, m=1: bound 1, but the mass at 0 dominates; the spec's
  // degenerate case sigma < 1/sqrt(m) is approximated by the smallest
  // integer width, whose samples are almost always 0
  GaussSampler g(1, 1);
  SplitRng rng(2);
  int zeros = 0;
  for (int t = 0; t < 1000; t++) zeros += g.sample(rng) == 0 ? 1 : 0;
  CHECK(zeros > 900);
}

TEST_CASE("empirical variance matches the exact pmf at sigma=3") {
  GaussSampler g(3, 64);
  const double exact = g.exact_variance();
  // oracle cross-check: the untruncated variance is sigma^2/(2 pi)
  const double nominal = 9.0 / (2.0 * 3.14159265358979323846);
  CHECK(std::abs(exact - nominal) / nominal < 0.05);

  SplitRng rng(3);
  const int trials = 1000000;
  double acc = 0;
  for (int t = 0; t < trials; t++) {
    double x = double(g.sample(rng));
    acc += x * x;
  }
  double emp = acc / trials;
  CHECK(std::abs(emp - nominal) / nominal < 0.10);
  CHECK(std::abs(emp - exact) / exact < 0.05);
}

TEST_CASE("large-width sampler matches the pmf moments") {
  GaussSampler g(int64_t(1) << 22, 1024);  // table would need 2^27 entries
  CHECK(!g.table_mode());
  SplitRng rng(4);
  const int trials = 200000;
  long double acc = 0;
  for (int t = 0; t < trials; t++) {
    long double x = (long double)(g.sample(rng));
    acc += x * x;
  }
  long double emp = acc / trials;
  long double nominal =
      (long double)(g.sigma()) * g.sigma() / (2.0L * 3.14159265358979323846L);
  CHECK(std::abs(double(emp / nominal - 1.0L)) < 0.02);
}

// independent oracle: full |p(x) - p(x-e)| summation over the whole support
static double tv_bruteforce(int64_t sigma, int m, int64_t e) {
  GaussSampler g(sigma, m);
  double acc = 0;
  for (int64_t x = -g.bound() - std::abs(e); x <= g.bound() + std::abs(e); x++)
    acc += std::abs(g.pmf(x) - g.pmf(x - e));
  return acc / 2.0;
}

TEST_CASE("smudging_tv equals the brute-force oracle") {
  for (int64_t sigma : {5, 17, 50}) {
    for (int64_t e : {0, 1, 2, 5, 9}) {
      double fast = smudging_tv(sigma, 16, e);
      double slow = tv_bruteforce(sigma, 16, e);
      CHECK(std::abs(fast - slow) < 1e-12);
    }
  }
}

TEST_CASE("smudging_tv pinned values and the lemma bound") {
  CHECK(smudging_tv(1 << 20, 64, 0) == 0.0);
  double tv = smudging_tv(int64_t(1) << 20, 64, 3);
  CHECK(tv <= std::pow(2.0, -8));
  for (int64_t sigma : {1024, 1 << 20}) {
    for (int64_t e : {1, 3, 8, 100}) {
      CHECK(smudging_tv(sigma, 64, e) <= smudging_lemma_bound(sigma, 64, e));
    }
  }
}

TEST_CASE("escape mass is tiny deep inside the support") {
  double l2 = log2_escape_mass(int64_t(1) << 25, 1500, 10000);
  CHECK(l2 < -1000.0);  // order exp(-pi m)
  CHECK(std::isinf(log2_escape_mass(1 << 10, 64, 0)));
}
