#include "skl/ot.hpp"

#include <cmath>
#include <stdexcept>

namespace skl {

namespace {
constexpr double kPi = 3.14159265358979323846;

// log of the (unnormalized) Gaussian mass of a noise vector
double log_rho(const LatticeParams& p, const ModQVector& e) {
  WideInt n2 = norm2(e);
  double s = double(p.sigma_prime);
  return -kPi * double(n2) / (s * s);
}

bool within_support(const LatticeParams& p, const ModQVector& e) {
  Int bound = Int(p.gauss_sigma_prime().bound());
  return linf(e) <= bound;
}
}  // namespace

std::pair<OtCrs, OtTrapdoor> ot_crs_gen(const LatticeParams& p, int mode,
                                        SplitRng& rng) {
  if (mode != 1 && mode != 2) throw std::invalid_argument("ot_crs_gen: mode must be 1 or 2");
  const Zq zq(p.q);
  GadgetTrapdoor gt = trap_gen(p, rng);
  ModQVector v;
  if (mode == 1) {
    v = uniform_vec(zq, p.k, p.m, rng);
  } else {
    ModQVector s = uniform_vec(zq, p.k, p.n, rng);
    ModQVector e = sample_gauss_vec(p.gauss_sigma(), p.m, rng.split("crs-noise"));
    v = vec_add(zq, vec_mat(zq, s, gt.A), e);
  }
  OtCrs crs{gt.A, v};
  OtTrapdoor td{std::move(gt), std::move(v), mode};
  return {std::move(crs), std::move(td)};
}

OtReceive1Out ot_receive1(const LatticeParams& p, const OtCrs& crs, int b,
                          SplitRng& rng) {
  if (b != 0 && b != 1) throw std::invalid_argument("ot_receive1: bad choice bit");
  const Zq zq(p.q);
  ModQVector r = uniform_vec(zq, p.k, p.n, rng);
  ModQVector e = sample_gauss_vec(p.gauss_sigma_prime(), p.m, rng.split("rcv-noise"));
  ModQVector u_b = vec_add(zq, vec_mat(zq, r, crs.A), e);
  ModQVector msg1 = b == 0 ? u_b : vec_sub(zq, u_b, crs.v);
  return {std::move(msg1), OtReceiverState{std::move(r)}};
}

OtMsg2 ot_send(const LatticeParams& p, const OtCrs& crs, const ModQVector& msg1,
               int z0, int z1, SplitRng& rng) {
  if (msg1.size() != size_t(p.m)) throw std::invalid_argument("ot_send: bad msg1 length");
  const Zq zq(p.q);
  const Int half_q = p.q / 2;  // floor(q/2)
  OtMsg2 out;
  for (int b = 0; b < 2; b++) {
    ModQVector u = b == 0 ? msg1 : vec_add(zq, msg1, crs.v);
    ModQVector t = sample_gauss_vec(p.gauss_tau(), p.m,
                                    rng.split("send-noise", uint64_t(b)));
    ModQVector w = mat_vec(zq, crs.A, t);
    Int last = dot(zq, u, t);
    int z = b == 0 ? z0 : z1;
    if (z) last = zq.add(last, half_q);
    w.push_back(last);
    (b == 0 ? out.w0 : out.w1) = std::move(w);
  }
  return out;
}

int ot_receive2(const LatticeParams& p, const OtCrs& crs, int b,
                const OtReceiverState& st, const OtMsg2& msg2) {
  (void)crs;
  const Zq zq(p.q);
  const ModQVector& w = b == 0 ? msg2.w0 : msg2.w1;
  if (w.size() != size_t(p.n) + 1) throw std::invalid_argument("ot_receive2: bad msg2 length");
  ModQVector head(w.begin(), w.end() - 1);
  Int res = zq.sub(w.back(), dot(zq, st.r, head));
  Int mag = res < 0 ? Int(-res) : res;
  return mag * 4 < p.q ? 0 : 1;
}

std::pair<std::optional<OtReceiverState>, std::optional<OtReceiverState>>
ot_sta_rcv(const LatticeParams& p, const OtTrapdoor& td, const ModQVector& msg1) {
  if (td.mode != 2) throw std::logic_error("ot_sta_rcv: hiding-mode trapdoor required");
  const Zq zq(p.q);
  std::pair<std::optional<OtReceiverState>, std::optional<OtReceiverState>> out;
  for (int b = 0; b < 2; b++) {
    ModQVector u = b == 0 ? msg1 : vec_add(zq, msg1, td.v);
    auto sol = invert_lwe(p, td.gt, u);
    auto& slot = b == 0 ? out.first : out.second;
    if (sol) slot = OtReceiverState{std::move(sol->s)};
  }
  return out;
}

std::optional<int> ot_extract(const LatticeParams& p, const OtTrapdoor& td,
                              const ModQVector& msg1) {
  if (td.mode != 1) throw std::logic_error("ot_extract: extraction-mode trapdoor required");
  const Zq zq(p.q);
  ModQVector u1 = vec_add(zq, msg1, td.v);
  int beta0 = is_messy(p, td.gt, msg1);
  int beta1 = is_messy(p, td.gt, u1);
  if (beta0 == 1 && beta1 == 0) return 1;
  if (beta1 == 1 && beta0 == 0) return 0;
  return std::nullopt;  // both messy or both structured
}

OtMsg2 ot_simulate_send(const LatticeParams& p, const OtCrs& crs,
                        const ModQVector& msg1, int z_b, SplitRng& rng) {
  return ot_send(p, crs, msg1, z_b, z_b, rng);
}

OtCoherentOut ot_coherent_receive1_raw(const LatticeParams& p, const OtCrs& crs,
                                       const OtTrapdoor& god,
                                       const std::vector<int>& branch_bits,
                                       size_t anchor, SplitRng& rng) {
  if (branch_bits.empty() || branch_bits.size() > 2)
    throw std::invalid_argument("ot_coherent_receive1: 1 or 2 branches");
  if (anchor >= branch_bits.size())
    throw std::invalid_argument("ot_coherent_receive1: bad anchor");
  const Zq zq(p.q);
  OtCoherentOut out;
  out.branches.resize(branch_bits.size());

  const int b_anchor = branch_bits[anchor];
  ModQVector r = uniform_vec(zq, p.k, p.n, rng);
  ModQVector e = sample_gauss_vec(p.gauss_sigma_prime(), p.m, rng.split("rcv-noise"));
  ModQVector u_anchor = vec_add(zq, vec_mat(zq, r, crs.A), e);
  out.msg1 = b_anchor == 0 ? u_anchor : vec_sub(zq, u_anchor, crs.v);
  out.branches[anchor] = {b_anchor, true, std::move(r), 0.5 * log_rho(p, e)};

  for (size_t i = 0; i < branch_bits.size(); i++) {
    if (i == anchor) continue;
    if (branch_bits[i] == b_anchor) {
      // same choice bit: the branch shares the anchor's unique state
      out.branches[i] = out.branches[anchor];
      continue;
    }
    const int b_other = branch_bits[i];
    ModQVector u_other =
        b_other == 0 ? out.msg1 : vec_add(zq, out.msg1, god.v);
    auto sol = invert_lwe(p, god.gt, u_other);
    if (sol && within_support(p, sol->e)) {
      out.branches[i] = {b_other, true, std::move(sol->s), 0.5 * log_rho(p, sol->e)};
    } else {
      out.branches[i].b = b_other;
      out.branches[i].alive = false;
      out.collapsed = true;
    }
  }
  return out;
}

std::pair<ModQVector, BranchState> ot_coherent_receive1(
    const LatticeParams& p, const OtCrs& crs, const BranchState& s,
    const OtTrapdoor& god, SplitRng& rng) {
  std::vector<int> bits;
  for (const auto& br : s.branches()) bits.push_back(br.reg("b").get(0) ? 1 : 0);
  size_t anchor = 0;
  if (bits.size() == 2) {
    double p0 = s.branches()[0].amp * s.branches()[0].amp;
    anchor = rng.next_double() < p0 ? 0 : 1;
  }
  OtCoherentOut res = ot_coherent_receive1_raw(p, crs, god, bits, anchor, rng);

  std::vector<double> lw;
  std::vector<size_t> keep;
  for (size_t i = 0; i < res.branches.size(); i++) {
    if (!res.branches[i].alive) continue;
    keep.push_back(i);
    lw.push_back(std::log(std::max(s.branches()[i].amp, 1e-300)) +
                 res.branches[i].log_weight);
  }
  double mx = -1e300;
  for (double v : lw) mx = std::max(mx, v);
  std::vector<BranchState::Branch> out;
  for (size_t ki = 0; ki < keep.size(); ki++) {
    size_t i = keep[ki];
    BranchState::Branch nb = s.branches()[i];
    nb.amp = std::exp(lw[ki] - mx);
    nb.regs.emplace_back("st", ot_state_bits(p, OtReceiverState{res.branches[i].r}));
    out.push_back(std::move(nb));
  }
  return {std::move(res.msg1), BranchState::make(std::move(out))};
}

BitVec ot_state_bits(const LatticeParams& p, const OtReceiverState& st) {
  return vec_to_bits(Zq(p.q), p.k, st.r);
}

OtReceiverState ot_state_from_bits(const LatticeParams& p, const BitVec& bits) {
  return OtReceiverState{bits_to_vec(Zq(p.q), p.k, bits)};
}

}  // namespace skl
