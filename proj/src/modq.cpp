#include "skl/modq.hpp"

#include <omp.h>

#include <boost/multiprecision/miller_rabin.hpp>
#include <boost/random/mersenne_twister.hpp>

#include <stdexcept>

namespace skl {

Int Zq::uniform(SplitRng& rng, int kbits) const {
  for (;;) {
    Int v = 0;
    int got = 0;
    while (got < kbits) {
      uint64_t w = rng.next_u64();
      int take = std::min(64, kbits - got);
      if (take < 64) w &= (uint64_t(1) << take) - 1;
      v |= Int(w) << got;
      got += take;
    }
    if (v < q) return center_int(v);
  }
}

bool is_probable_prime(const Int& v) {
  using boost::multiprecision::cpp_int;
  cpp_int x(v.str());
  boost::random::mt19937 gen(0xDEADBEEF);
  return boost::multiprecision::miller_rabin_test(x, 40, gen);
}

const GaussSampler& LatticeParams::gauss_sigma() const {
  if (!gs_) gs_ = std::make_shared<GaussSampler>(sigma, m);
  return *gs_;
}
const GaussSampler& LatticeParams::gauss_sigma_prime() const {
  if (!gsp_) gsp_ = std::make_shared<GaussSampler>(sigma_prime, m);
  return *gsp_;
}
const GaussSampler& LatticeParams::gauss_tau() const {
  if (!gt_) {
    // tau can exceed the sampler's int64 width only far beyond any preset
    // used here; samples at tau scale feed correctness bounds only.
    if (tau > Int(std::numeric_limits<int64_t>::max()))
      throw std::logic_error("tau exceeds sampler range");
    gt_ = std::make_shared<GaussSampler>(int64_t(tau), m);
  }
  return *gt_;
}

void LatticeParams::validate() const {
  if (n <= 0 || m <= 0 || k <= 0) throw std::invalid_argument("params: bad dims");
  if (msb(q) + 1 != unsigned(k)) throw std::invalid_argument("params: k != ceil(log2 q)");
  if (!is_probable_prime(q)) throw std::invalid_argument("params: q not prime");
  if (m < 2 * (n + 1) * k) throw std::invalid_argument("params: m too small");
  if (mbar() <= 0) throw std::invalid_argument("params: mbar <= 0");
  if (sigma <= 0 || sigma_prime <= 0 || tau <= 0)
    throw std::invalid_argument("params: widths must be positive");
  if (messy_enabled) {
    // tau >= sqrt(qm) log^2 m  and  m^2 sigma' tau <= q/8
    Int qm = q * m;
    Int root = sqrt(qm);
    double l2m = std::log2(double(m));
    Int need = root * Int(int64_t(l2m * l2m));
    if (tau < need) throw std::invalid_argument("params: tau below messiness bound");
    WideInt lhs = WideInt(m) * m * sigma_prime * WideInt(tau) * 8;
    if (lhs > WideInt(q)) throw std::invalid_argument("params: m^2 sigma' tau > q/8");
  }
}

LatticeParams LatticeParams::demo_preset() {
  LatticeParams p;
  p.name = "demo";
  p.n = 2;
  p.k = 62;
  p.q = Int("4611686018427387847");  // 2^62 - 57
  p.m = 2 * (p.n + 1) * p.k;         // 372
  p.sigma = 4;
  p.sigma_prime = 1 << 10;
  p.tau = 1 << 10;
  p.trap_c = 2.0;
  p.messy_enabled = false;
  p.validate();
  p.gauss_sigma();
  p.gauss_sigma_prime();
  p.gauss_tau();
  return p;
}

LatticeParams LatticeParams::full_preset() {
  LatticeParams p;
  p.name = "full";
  p.n = 4;
  p.k = 150;
  p.q = Int("1427247692705959881058285969449495136382746621");  // 2^150 - 3
  p.m = 2 * (p.n + 1) * p.k;  // 1500
  p.sigma = 1 << 8;
  p.sigma_prime = int64_t(1) << 25;
  {
    Int qm = p.q * p.m;
    double l2m = std::log2(double(p.m));
    p.tau = sqrt(qm) * Int(int64_t(std::ceil(l2m * l2m)));
  }
  p.trap_c = 2.0;
  p.messy_enabled = true;
  p.validate();
  p.gauss_sigma();
  p.gauss_sigma_prime();
  return p;
}

// ---- kernels ----

ModQVector vec_mat_serial(const Zq& zq, const ModQVector& s, const ModQMatrix& A) {
  if (s.size() != A.rows) throw std::invalid_argument("vec_mat: dim mismatch");
  ModQVector u(A.cols);
  for (size_t j = 0; j < A.cols; j++) {
    WideInt acc = 0;
    for (size_t i = 0; i < A.rows; i++)
      acc += WideInt(s[i]) * WideInt(A.a[i * A.cols + j]);
    u[j] = zq.center(acc);
  }
  return u;
}

ModQVector vec_mat_omp(const Zq& zq, const ModQVector& s, const ModQMatrix& A) {
  if (s.size() != A.rows) throw std::invalid_argument("vec_mat: dim mismatch");
  ModQVector u(A.cols);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < long(A.cols); j++) {
    WideInt acc = 0;
    for (size_t i = 0; i < A.rows; i++)
      acc += WideInt(s[i]) * WideInt(A.a[i * A.cols + size_t(j)]);
    u[size_t(j)] = zq.center(acc);
  }
  return u;
}

ModQVector vec_mat(const Zq& zq, const ModQVector& s, const ModQMatrix& A) {
  if (A.cols >= 512 && omp_get_max_threads() > 1) return vec_mat_omp(zq, s, A);
  return vec_mat_serial(zq, s, A);
}

ModQVector mat_vec_serial(const Zq& zq, const ModQMatrix& A, const ModQVector& t) {
  if (t.size() != A.cols) throw std::invalid_argument("mat_vec: dim mismatch");
  ModQVector w(A.rows);
  for (size_t i = 0; i < A.rows; i++) {
    WideInt acc = 0;
    const Int* row = &A.a[i * A.cols];
    for (size_t j = 0; j < A.cols; j++) acc += WideInt(row[j]) * WideInt(t[j]);
    w[i] = zq.center(acc);
  }
  return w;
}

ModQVector mat_vec(const Zq& zq, const ModQMatrix& A, const ModQVector& t) {
  return mat_vec_serial(zq, A, t);  // row counts here are always small
}

ModQMatrix mat_mul_sign_serial(const Zq& zq, const ModQMatrix& A, const SignMatrix& R) {
  if (A.cols != R.rows) throw std::invalid_argument("mat_mul_sign: dim mismatch");
  ModQMatrix C(A.rows, R.cols);
  for (size_t i = 0; i < A.rows; i++)
    for (size_t j = 0; j < R.cols; j++) {
      WideInt acc = 0;
      for (size_t l = 0; l < A.cols; l++) {
        int8_t r = R.a[l * R.cols + j];
        if (r == 1)
          acc += WideInt(A.a[i * A.cols + l]);
        else if (r == -1)
          acc -= WideInt(A.a[i * A.cols + l]);
      }
      C.a[i * C.cols + j] = zq.center(acc);
    }
  return C;
}

ModQMatrix mat_mul_sign_omp(const Zq& zq, const ModQMatrix& A, const SignMatrix& R) {
  if (A.cols != R.rows) throw std::invalid_argument("mat_mul_sign: dim mismatch");
  ModQMatrix C(A.rows, R.cols);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < long(R.cols); j++)
    for (size_t i = 0; i < A.rows; i++) {
      WideInt acc = 0;
      for (size_t l = 0; l < A.cols; l++) {
        int8_t r = R.a[l * R.cols + size_t(j)];
        if (r == 1)
          acc += WideInt(A.a[i * A.cols + l]);
        else if (r == -1)
          acc -= WideInt(A.a[i * A.cols + l]);
      }
      C.a[i * C.cols + size_t(j)] = zq.center(acc);
    }
  return C;
}

ModQMatrix mat_mul_sign(const Zq& zq, const ModQMatrix& A, const SignMatrix& R) {
  if (R.cols >= 64 && omp_get_max_threads() > 1) return mat_mul_sign_omp(zq, A, R);
  return mat_mul_sign_serial(zq, A, R);
}

ModQVector vec_mul_sign_serial(const Zq& zq, const ModQVector& v, const SignMatrix& R) {
  if (v.size() != R.rows) throw std::invalid_argument("vec_mul_sign: dim mismatch");
  ModQVector out(R.cols);
  for (size_t j = 0; j < R.cols; j++) {
    WideInt acc = 0;
    for (size_t i = 0; i < R.rows; i++) {
      int8_t r = R.a[i * R.cols + j];
      if (r == 1)
        acc += WideInt(v[i]);
      else if (r == -1)
        acc -= WideInt(v[i]);
    }
    out[j] = zq.center(acc);
  }
  return out;
}

ModQVector vec_mul_sign_omp(const Zq& zq, const ModQVector& v, const SignMatrix& R) {
  if (v.size() != R.rows) throw std::invalid_argument("vec_mul_sign: dim mismatch");
  ModQVector out(R.cols);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < long(R.cols); j++) {
    WideInt acc = 0;
    for (size_t i = 0; i < R.rows; i++) {
      int8_t r = R.a[i * R.cols + size_t(j)];
      if (r == 1)
        acc += WideInt(v[i]);
      else if (r == -1)
        acc -= WideInt(v[i]);
    }
    out[size_t(j)] = zq.center(acc);
  }
  return out;
}

ModQVector vec_mul_sign(const Zq& zq, const ModQVector& v, const SignMatrix& R) {
  if (R.cols >= 256 && omp_get_max_threads() > 1) return vec_mul_sign_omp(zq, v, R);
  return vec_mul_sign_serial(zq, v, R);
}

Int dot(const Zq& zq, const ModQVector& a, const ModQVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dim mismatch");
  WideInt acc = 0;
  for (size_t i = 0; i < a.size(); i++) acc += WideInt(a[i]) * WideInt(b[i]);
  return zq.center(acc);
}

ModQVector vec_add(const Zq& zq, const ModQVector& a, const ModQVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec_add: dim mismatch");
  ModQVector r(a.size());
  for (size_t i = 0; i < a.size(); i++) r[i] = zq.add(a[i], b[i]);
  return r;
}

ModQVector vec_sub(const Zq& zq, const ModQVector& a, const ModQVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec_sub: dim mismatch");
  ModQVector r(a.size());
  for (size_t i = 0; i < a.size(); i++) r[i] = zq.sub(a[i], b[i]);
  return r;
}

namespace {
constexpr int kGaussChunk = 64;
}

ModQVector sample_gauss_vec_serial(const GaussSampler& g, int m, const SplitRng& rng) {
  ModQVector v((size_t(m)));
  const int chunks = (m + kGaussChunk - 1) / kGaussChunk;
  for (int c = 0; c < chunks; c++) {
    SplitRng r = rng.split("gauss-chunk", uint64_t(c));
    for (int i = c * kGaussChunk; i < std::min(m, (c + 1) * kGaussChunk); i++)
      v[size_t(i)] = Int(g.sample(r));
  }
  return v;
}

ModQVector sample_gauss_vec_omp(const GaussSampler& g, int m, const SplitRng& rng) {
  ModQVector v((size_t(m)));
  const int chunks = (m + kGaussChunk - 1) / kGaussChunk;
#pragma omp parallel for schedule(static)
  for (int c = 0; c < chunks; c++) {
    SplitRng r = rng.split("gauss-chunk", uint64_t(c));
    for (int i = c * kGaussChunk; i < std::min(m, (c + 1) * kGaussChunk); i++)
      v[size_t(i)] = Int(g.sample(r));
  }
  return v;
}

ModQVector sample_gauss_vec(const GaussSampler& g, int m, const SplitRng& rng) {
  if (m >= 512 && omp_get_max_threads() > 1) return sample_gauss_vec_omp(g, m, rng);
  return sample_gauss_vec_serial(g, m, rng);
}

ModQVector uniform_vec(const Zq& zq, int kbits, int len, SplitRng& rng) {
  ModQVector v((size_t(len)));
  for (auto& x : v) x = zq.uniform(rng, kbits);
  return v;
}

ModQMatrix uniform_mat(const Zq& zq, int kbits, int rows, int cols, SplitRng& rng) {
  ModQMatrix mat((size_t(rows)), size_t(cols));
  for (auto& x : mat.a) x = zq.uniform(rng, kbits);
  return mat;
}

WideInt norm2(const ModQVector& v) {
  WideInt acc = 0;
  for (const auto& x : v) acc += WideInt(x) * WideInt(x);
  return acc;
}

Int linf(const ModQVector& v) {
  Int mx = 0;
  for (const auto& x : v) {
    Int a = x < 0 ? Int(-x) : x;
    if (a > mx) mx = a;
  }
  return mx;
}

// ---- serialization ----

void encode_int(std::vector<uint8_t>& out, const Int& v) {
  Int mag = v < 0 ? Int(-v) : v;
  std::vector<uint8_t> bytes;
  while (mag > 0) {
    bytes.push_back(uint8_t(mag & 0xff));
    mag >>= 8;
  }
  if (bytes.size() > 255) throw std::length_error("encode_int: too wide");
  out.push_back(uint8_t(bytes.size()));
  out.push_back(v < 0 ? 1 : 0);
  // big-endian magnitude
  for (auto it = bytes.rbegin(); it != bytes.rend(); ++it) out.push_back(*it);
}

Int decode_int(const std::vector<uint8_t>& in, size_t& pos) {
  if (pos + 2 > in.size()) throw std::runtime_error("decode_int: truncated");
  size_t len = in[pos];
  uint8_t sign = in[pos + 1];
  if (sign > 1) throw std::runtime_error("decode_int: bad sign byte");
  pos += 2;
  if (pos + len > in.size()) throw std::runtime_error("decode_int: truncated");
  Int v = 0;
  for (size_t i = 0; i < len; i++) v = (v << 8) | Int(in[pos + i]);
  pos += len;
  return sign ? Int(-v) : v;
}

static void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; i++) out.push_back(uint8_t(v >> (8 * i)));
}

static uint32_t get_u32(const std::vector<uint8_t>& in, size_t& pos) {
  if (pos + 4 > in.size()) throw std::runtime_error("get_u32: truncated");
  uint32_t v = 0;
  for (int i = 0; i < 4; i++) v |= uint32_t(in[pos + i]) << (8 * i);
  pos += 4;
  return v;
}

void encode_vec(std::vector<uint8_t>& out, const ModQVector& v) {
  put_u32(out, uint32_t(v.size()));
  for (const auto& x : v) encode_int(out, x);
}

ModQVector decode_vec(const std::vector<uint8_t>& in, size_t& pos) {
  uint32_t len = get_u32(in, pos);
  ModQVector v(len);
  for (auto& x : v) x = decode_int(in, pos);
  return v;
}

void encode_mat(std::vector<uint8_t>& out, const ModQMatrix& mat) {
  put_u32(out, uint32_t(mat.rows));
  put_u32(out, uint32_t(mat.cols));
  for (const auto& x : mat.a) encode_int(out, x);
}

ModQMatrix decode_mat(const std::vector<uint8_t>& in, size_t& pos) {
  uint32_t r = get_u32(in, pos);
  uint32_t c = get_u32(in, pos);
  ModQMatrix mat(r, c);
  for (auto& x : mat.a) x = decode_int(in, pos);
  return mat;
}

BitVec vec_to_bits(const Zq& zq, int k, const ModQVector& v) {
  BitVec out(v.size() * size_t(k));
  for (size_t i = 0; i < v.size(); i++) {
    Int c = zq.canonical(v[i]);
    for (int b = 0; b < k; b++)
      if (bit_test(c, unsigned(b))) out.set(i * size_t(k) + size_t(b), true);
  }
  return out;
}

ModQVector bits_to_vec(const Zq& zq, int k, const BitVec& bits) {
  if (bits.size() % size_t(k) != 0)
    throw std::invalid_argument("bits_to_vec: length not a multiple of k");
  ModQVector v((bits.size() / size_t(k)));
  for (size_t i = 0; i < v.size(); i++) {
    Int c = 0;
    for (int b = k - 1; b >= 0; b--) {
      c <<= 1;
      if (bits.get(i * size_t(k) + size_t(b))) c |= 1;
    }
    if (c >= zq.q) throw std::invalid_argument("bits_to_vec: value >= q");
    v[i] = zq.center_int(c);
  }
  return v;
}

}  // namespace skl
