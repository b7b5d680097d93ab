#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "skl/rng.hpp"

namespace skl {

// Truncated discrete Gaussian with density proportional to
// exp(-pi x^2 / sigma^2) on the support {x : |x| <= ceil(sigma*sqrt(m))}.
//
// Small supports use an inverse-CDF table, which is exact given the table
// (built by direct pmf summation). Supports too large to tabulate fall
// back to rounding a continuous Gaussian of matching variance; the
// distributions agree up to a relative error of order 1/sigma^2, far
// below every tolerance used here.
class GaussSampler {
 public:
  GaussSampler(int64_t sigma, int m);

  int64_t sample(SplitRng& rng) const;
  int64_t bound() const { return bound_; }
  int64_t sigma() const { return sigma_; }
  bool table_mode() const { return table_mode_; }

  double pmf(int64_t x) const;
  // log base e of pmf; valid for |x| <= bound
  double log_pmf(int64_t x) const;
  // exact mean/variance by direct pmf summation (table mode only)
  double exact_variance() const;

  static constexpr size_t kMaxTable = size_t(1) << 23;

 private:
  int64_t sigma_;
  int m_;
  int64_t bound_;
  bool table_mode_;
  double log_z_;            // log of the normalizer
  std::vector<double> cdf_;  // cumulative, index x+bound, table mode
};

// Exact total-variation distance between the truncated discrete Gaussian
// (width sigma, truncation ceil(sigma*sqrt(m))) and its shift by e, by
// direct summation of the pmf over the region where the difference is
// nonzero. |e| must be at most the truncation bound.
double smudging_tv(int64_t sigma, int m, int64_t e);
double smudging_tv_serial(int64_t sigma, int m, int64_t e);

// Upper bound from the smudging lemma: sqrt(2(1-exp(-2 pi sqrt(m) |e| / sigma)))
double smudging_lemma_bound(int64_t sigma, int m, int64_t e);

// log2 of Pr[X + e falls outside the truncated support], X ~ the above
// Gaussian; computed by log-domain summation of the edge window. This is
// the quantity that bounds the per-coordinate collapse rate of the
// coherent receiver. Returns -inf when e = 0.
double log2_escape_mass(int64_t sigma, int m, int64_t e);

}  // namespace skl
