#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skl/bits.hpp"

namespace skl {

// A pure state stored exactly as at most two weighted computational-basis
// branches. Amplitudes are nonnegative reals (every honest state in the
// protocols has relative phase +1); a signed phase is deliberately not
// modeled. Register tuples must be pairwise distinct across branches.
class BranchState {
 public:
  static constexpr size_t kMaxBranches = 2;

  struct Branch {
    double amp = 0;
    std::vector<std::pair<std::string, BitVec>> regs;

    const BitVec& reg(std::string_view name) const;
    bool has_reg(std::string_view name) const;
  };

  static BranchState make(std::vector<Branch> branches);

  const std::vector<Branch>& branches() const { return branches_; }
  size_t branch_count() const { return branches_.size(); }
  // total bit length of all registers of one branch
  size_t total_bits() const;

  std::vector<uint8_t> serialize() const;
  static BranchState deserialize(const std::vector<uint8_t>& in, size_t& pos);

 private:
  std::vector<Branch> branches_;
};

using RegisterFn =
    std::function<std::optional<BitVec>(const BranchState::Branch&)>;

// Appends register out_name = f(branch) to every branch; f returning
// nullopt on any branch is an error naming that branch.
BranchState apply_map(const BranchState& s, const std::string& out_name,
                      const RegisterFn& f);

// Removes reg_name after checking regs[reg_name] == f(branch without it)
// on every branch.
BranchState uncompute(const BranchState& s, const std::string& reg_name,
                      const RegisterFn& f);

// Measures one register in the computational basis. When every branch
// agrees on the value the state is returned untouched (gentle case).
std::pair<BitVec, BranchState> measure_register(const BranchState& s,
                                                const std::string& reg_name,
                                                SplitRng& rng);

// Measures every qubit in the Hadamard basis and returns the outcome
// string over all registers concatenated in order. For two branches with
// amplitudes (q0, q1) over strings u != v the outcome lands in the coset
// <outcome, u^v> = 0 with probability (q0+q1)^2/2 and in the complementary
// coset with probability (q0-q1)^2/2, uniformly within the chosen coset.
BitVec measure_hadamard_all(const BranchState& s, SplitRng& rng);

}  // namespace skl
