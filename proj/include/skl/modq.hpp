#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "skl/bits.hpp"
#include "skl/gauss.hpp"
#include "skl/rng.hpp"

namespace skl {

using Int = boost::multiprecision::int256_t;
using WideInt = boost::multiprecision::int512_t;

using ModQVector = std::vector<Int>;

struct ModQMatrix {
  size_t rows = 0, cols = 0;
  std::vector<Int> a;  // row-major

  ModQMatrix() = default;
  ModQMatrix(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}
  Int& at(size_t r, size_t c) { return a[r * cols + c]; }
  const Int& at(size_t r, size_t c) const { return a[r * cols + c]; }
};

// Small-entry matrix (values in {-1,0,1}), used for gadget trapdoors.
struct SignMatrix {
  size_t rows = 0, cols = 0;
  std::vector<int8_t> a;

  SignMatrix() = default;
  SignMatrix(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}
  int8_t& at(size_t r, size_t c) { return a[r * cols + c]; }
  int8_t at(size_t r, size_t c) const { return a[r * cols + c]; }
};

// Arithmetic modulo an odd prime q with centered representatives in
// [-(q-1)/2, (q-1)/2]. All reductions are exact integer operations.
struct Zq {
  Int q;
  Int half;  // (q-1)/2

  explicit Zq(Int q_) : q(std::move(q_)), half((q - 1) / 2) {}

  Int center(const WideInt& x) const {
    WideInt r = x % WideInt(q);
    if (r > WideInt(half)) r -= WideInt(q);
    if (r < -WideInt(half)) r += WideInt(q);
    return Int(r);
  }
  Int center_int(const Int& x) const {
    Int r = x % q;
    if (r > half) r -= q;
    if (r < -half) r += q;
    return r;
  }
  Int add(const Int& a, const Int& b) const { return center_int(a + b); }
  Int sub(const Int& a, const Int& b) const { return center_int(a - b); }
  Int mul(const Int& a, const Int& b) const {
    return center(WideInt(a) * WideInt(b));
  }
  // canonical representative in [0, q)
  Int canonical(const Int& a) const {
    Int r = a % q;
    if (r < 0) r += q;
    return r;
  }
  Int uniform(SplitRng& rng, int kbits) const;
};

struct LatticeParams {
  std::string name;
  int n = 0;        // secret dimension
  int m = 0;        // sample dimension
  int k = 0;        // ceil(log2 q)
  Int q;
  int64_t sigma = 0;        // CRS noise width
  int64_t sigma_prime = 0;  // receiver noise width
  Int tau;                  // sender Gaussian width
  double trap_c = 2.0;      // constant C in the inversion bound
  bool messy_enabled = false;

  int mbar() const { return m - n * k; }

  const GaussSampler& gauss_sigma() const;
  const GaussSampler& gauss_sigma_prime() const;
  const GaussSampler& gauss_tau() const;

  // Throws if the dimension/primality/parameter constraints fail.
  void validate() const;

  static LatticeParams demo_preset();
  static LatticeParams full_preset();

 private:
  mutable std::shared_ptr<GaussSampler> gs_, gsp_, gt_;
};

// ---- kernels: each has a serial reference and an OpenMP variant that
// must produce identical output. The unsuffixed entry point dispatches.

// u[j] = sum_i s[i] * A[i][j]  (mod q)
ModQVector vec_mat_serial(const Zq& zq, const ModQVector& s, const ModQMatrix& A);
ModQVector vec_mat_omp(const Zq& zq, const ModQVector& s, const ModQMatrix& A);
ModQVector vec_mat(const Zq& zq, const ModQVector& s, const ModQMatrix& A);

// w[i] = sum_j A[i][j] * t[j]  (mod q)
ModQVector mat_vec_serial(const Zq& zq, const ModQMatrix& A, const ModQVector& t);
ModQVector mat_vec(const Zq& zq, const ModQMatrix& A, const ModQVector& t);

// C = A * R with R small-entry; C is rows(A) x cols(R)  (mod q)
ModQMatrix mat_mul_sign_serial(const Zq& zq, const ModQMatrix& A, const SignMatrix& R);
ModQMatrix mat_mul_sign_omp(const Zq& zq, const ModQMatrix& A, const SignMatrix& R);
ModQMatrix mat_mul_sign(const Zq& zq, const ModQMatrix& A, const SignMatrix& R);

// out[j] = sum_i v[i] * R[i][j]  (mod q), R small-entry
ModQVector vec_mul_sign_serial(const Zq& zq, const ModQVector& v, const SignMatrix& R);
ModQVector vec_mul_sign_omp(const Zq& zq, const ModQVector& v, const SignMatrix& R);
ModQVector vec_mul_sign(const Zq& zq, const ModQVector& v, const SignMatrix& R);

Int dot(const Zq& zq, const ModQVector& a, const ModQVector& b);

ModQVector vec_add(const Zq& zq, const ModQVector& a, const ModQVector& b);
ModQVector vec_sub(const Zq& zq, const ModQVector& a, const ModQVector& b);

// Batch Gaussian sampling; both variants split the stream per fixed-size
// chunk so the parallel version reproduces the serial output exactly.
ModQVector sample_gauss_vec_serial(const GaussSampler& g, int m, const SplitRng& rng);
ModQVector sample_gauss_vec_omp(const GaussSampler& g, int m, const SplitRng& rng);
ModQVector sample_gauss_vec(const GaussSampler& g, int m, const SplitRng& rng);

ModQVector uniform_vec(const Zq& zq, int kbits, int len, SplitRng& rng);
ModQMatrix uniform_mat(const Zq& zq, int kbits, int rows, int cols, SplitRng& rng);

// squared Euclidean norm, exact
WideInt norm2(const ModQVector& v);
Int linf(const ModQVector& v);

// ---- serialization ----
// wire format: entries as [len u8][sign u8][big-endian magnitude bytes]
void encode_int(std::vector<uint8_t>& out, const Int& v);
Int decode_int(const std::vector<uint8_t>& in, size_t& pos);
void encode_vec(std::vector<uint8_t>& out, const ModQVector& v);
ModQVector decode_vec(const std::vector<uint8_t>& in, size_t& pos);
void encode_mat(std::vector<uint8_t>& out, const ModQMatrix& mat);
ModQMatrix decode_mat(const std::vector<uint8_t>& in, size_t& pos);

// fixed-width encoding: each entry as its canonical representative in
// [0, q), k bits LSB-first; used wherever bit-exact register layouts matter
BitVec vec_to_bits(const Zq& zq, int k, const ModQVector& v);
ModQVector bits_to_vec(const Zq& zq, int k, const BitVec& bits);

bool is_probable_prime(const Int& v);

}  // namespace skl
