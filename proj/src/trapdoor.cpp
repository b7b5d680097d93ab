#include "skl/trapdoor.hpp"

#include <stdexcept>

namespace skl {

GadgetTrapdoor trap_gen(const LatticeParams& p, SplitRng& rng) {
  const Zq zq(p.q);
  const int n = p.n, k = p.k, mbar = p.mbar();
  ModQMatrix Abar = uniform_mat(zq, k, n, mbar, rng);
  SignMatrix R(size_t(mbar), size_t(n * k));
  for (auto& x : R.a) {
    uint64_t r = rng.next_u64() & 3;  // P(0)=1/2, P(+1)=P(-1)=1/4
    x = r == 0 ? 1 : (r == 1 ? int8_t(-1) : 0);
  }
  ModQMatrix AR = mat_mul_sign(zq, Abar, R);
  GadgetTrapdoor td;
  td.R = std::move(R);
  td.A = ModQMatrix(size_t(n), size_t(p.m));
  for (int i = 0; i < n; i++) {
    for (int j = 0; j < mbar; j++) td.A.at(size_t(i), size_t(j)) = Abar.at(size_t(i), size_t(j));
    for (int j = 0; j < n * k; j++) {
      // gadget entry 2^l on the block diagonal
      Int g = (j / k == i) ? (Int(1) << (j % k)) : Int(0);
      td.A.at(size_t(i), size_t(mbar + j)) =
          zq.sub(g, AR.at(size_t(i), size_t(j)));
    }
  }
  return td;
}

static WideInt floor_div(const WideInt& a, const WideInt& b) {
  WideInt quot = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) quot -= 1;
  return quot;
}

LweSolution gadget_decode(const LatticeParams& p, const GadgetTrapdoor& td,
                          const ModQVector& v) {
  const Zq zq(p.q);
  const int n = p.n, k = p.k, mbar = p.mbar();
  if (v.size() != size_t(p.m)) throw std::invalid_argument("gadget_decode: bad length");

  ModQVector vbar(v.begin(), v.begin() + mbar);
  ModQVector v2(v.begin() + mbar, v.end());
  // c = v2 + vbar * R  =  s^T G + e' (for well-formed v)
  ModQVector c = vec_add(zq, v2, vec_mul_sign(zq, vbar, td.R));

  ModQVector s((size_t(n)));
  for (int i = 0; i < n; i++) {
    // Block entries c_j = s_i 2^j + e_j mod q. Successive differences
    // c_{j+1} - 2 c_j reveal e_{j+1} - 2 e_j exactly, so every e_j equals
    // 2^j e_0 plus a known offset; |e_{k-1}| << 2^{k-1} pins e_0.
    const Int* blk = &c[size_t(i) * size_t(k)];
    WideInt off = 0;  // offset of e_{k-1}: e_{k-1} = 2^{k-1} e_0 + off
    for (int j = 0; j + 1 < k; j++) {
      Int d = zq.center_int(Int(blk[j + 1] - 2 * blk[j]));
      off = 2 * off + WideInt(d);
    }
    WideInt pow = WideInt(1) << (k - 1);
    WideInt e0 = floor_div(2 * (-off) + pow, 2 * pow);
    s[size_t(i)] = zq.center(WideInt(blk[0]) - e0);
  }

  LweSolution sol;
  sol.s = std::move(s);
  ModQVector sA = vec_mat(zq, sol.s, td.A);
  sol.e = vec_sub(zq, v, sA);
  return sol;
}

std::optional<LweSolution> invert_lwe(const LatticeParams& p,
                                      const GadgetTrapdoor& td,
                                      const ModQVector& v) {
  LweSolution sol = gadget_decode(p, td, v);
  // ||e||_2 <= q / (C sqrt(n k)); compare squares exactly
  WideInt lhs = norm2(sol.e) * WideInt(int64_t(p.trap_c * p.trap_c)) *
                WideInt(p.n) * WideInt(p.k);
  WideInt rhs = WideInt(p.q) * WideInt(p.q);
  if (lhs > rhs) return std::nullopt;
  return sol;
}

int is_messy(const LatticeParams& p, const GadgetTrapdoor& td,
             const ModQVector& v) {
  if (!p.messy_enabled)
    throw std::logic_error("is_messy: preset does not satisfy the tau bound");
  LweSolution sol = gadget_decode(p, td, v);
  WideInt lhs = norm2(sol.e);
  WideInt tm = WideInt(p.tau) * WideInt(p.m);
  return lhs > tm * tm ? 1 : 0;
}

}  // namespace skl
