#include "skl/gauss.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace skl {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

GaussSampler::GaussSampler(int64_t sigma, int m) : sigma_(sigma), m_(m) {
  if (sigma <= 0 || m <= 0) throw std::invalid_argument("GaussSampler: bad args");
  bound_ = int64_t(std::ceil(double(sigma) * std::sqrt(double(m))));
  const size_t support = size_t(2 * bound_ + 1);
  table_mode_ = support <= kMaxTable;
  const double s2 = double(sigma) * double(sigma);
  if (table_mode_) {
    cdf_.resize(support);
    double acc = 0;
    for (int64_t x = -bound_; x <= bound_; x++) {
      acc += std::exp(-kPi * double(x) * double(x) / s2);
      cdf_[size_t(x + bound_)] = acc;
    }
    const double z = acc;
    for (auto& c : cdf_) c /= z;
    cdf_.back() = 1.0;
    log_z_ = std::log(z);
  } else {
    // Poisson summation: sum_Z exp(-pi x^2/s^2) = sigma * (1 + 2e^{-pi s^2} + ...),
    // and the truncated tail beyond sigma*sqrt(m) weighs ~ e^{-pi m}. Both
    // corrections are far below double precision here.
    log_z_ = std::log(double(sigma));
  }
}

int64_t GaussSampler::sample(SplitRng& rng) const {
  if (table_mode_) {
    const double u = rng.next_double();
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return int64_t(it - cdf_.begin()) - bound_;
  }
  const double s = double(sigma_) / std::sqrt(2.0 * kPi);  // std deviation
  for (;;) {
    double u = rng.next_double();
    double v = rng.next_double();
    if (u <= 0) continue;
    double z = std::sqrt(-2.0 * std::log1p(-u)) * std::cos(2.0 * kPi * v) * s;
    int64_t x = int64_t(std::llround(z));
    if (x >= -bound_ && x <= bound_) return x;
  }
}

double GaussSampler::log_pmf(int64_t x) const {
  const double s2 = double(sigma_) * double(sigma_);
  return -kPi * double(x) * double(x) / s2 - log_z_;
}

double GaussSampler::pmf(int64_t x) const {
  if (x < -bound_ || x > bound_) return 0.0;
  return std::exp(log_pmf(x));
}

double GaussSampler::exact_variance() const {
  if (!table_mode_) throw std::logic_error("exact_variance: table mode only");
  double var = 0;
  double prev = 0;
  for (int64_t x = -bound_; x <= bound_; x++) {
    double p = cdf_[size_t(x + bound_)] - prev;
    prev = cdf_[size_t(x + bound_)];
    var += p * double(x) * double(x);
  }
  return var;  // mean is 0 by symmetry
}

// TV(D, D+e) = sum over x of max(0, p(x-e) - p(x)). The ratio
// p(x-e)/p(x) exceeds 1 exactly when |x-e| < |x|, so the positive part
// telescopes to the pmf mass of a window of |e| integers at the center.
double smudging_tv_serial(int64_t sigma, int m, int64_t e) {
  GaussSampler g(sigma, m);
  if (e == 0) return 0.0;
  int64_t a = std::abs(e);
  if (a > g.bound()) throw std::invalid_argument("smudging_tv: |e| beyond support");
  const int64_t t = a / 2;  // window is [t+1-a, t]
  double tv = 0;
  for (int64_t x = t + 1 - a; x <= t; x++) tv += g.pmf(x);
  return tv;
}

double smudging_tv(int64_t sigma, int m, int64_t e) {
  // the window never exceeds |e| terms, so the serial path is already fast
  return smudging_tv_serial(sigma, m, e);
}

double smudging_lemma_bound(int64_t sigma, int m, int64_t e) {
  const double x = 2.0 * kPi * std::sqrt(double(m)) * std::abs(double(e)) / double(sigma);
  return std::sqrt(2.0 * (1.0 - std::exp(-x)));
}

double log2_escape_mass(int64_t sigma, int m, int64_t e) {
  if (e == 0) return -std::numeric_limits<double>::infinity();
  GaussSampler g(sigma, m);
  int64_t a = std::abs(e);
  const int64_t B = g.bound();
  // mass of (B-a, B]: log-sum-exp over a terms at the edge
  double mx = -std::numeric_limits<double>::infinity();
  for (int64_t x = B - a + 1; x <= B; x++) mx = std::max(mx, g.log_pmf(x));
  if (!std::isfinite(mx)) return -std::numeric_limits<double>::infinity();
  double acc = 0;
  for (int64_t x = B - a + 1; x <= B; x++) acc += std::exp(g.log_pmf(x) - mx);
  return (mx + std::log(acc)) / std::log(2.0);
}

}  // namespace skl
