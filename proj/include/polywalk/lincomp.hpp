#pragma once

#include <cstdint>
#include <vector>

#include "polywalk/field.hpp"

namespace polywalk {

// Vector-coefficient linear relation: sum_{h<=L} c_h . u_{n+h} = 0 for every
// window position n = 0..N-L-1, with c_L nonzero.
struct RelationWitness {
  std::uint64_t L = 0;
  std::vector<std::vector<std::uint64_t>> coeffs;  // L+1 blocks of m residues
};

struct LinearComplexityResult {
  std::uint64_t L = 0;
  RelationWitness witness;
  // True when L = N: the window is empty and the relation holds vacuously.
  bool window_empty = false;
};

// Smallest L admitting a witness, found by growing L and extracting a kernel
// vector of the block-Hankel system whose last block is nonzero.
// rows: the truncated orbit u_0..u_{N-1}, each of length m.  Requires N >= 2.
LinearComplexityResult linear_complexity(const Prime& p,
                                         const std::vector<std::vector<std::uint64_t>>& rows);

// Re-checks a witness against the sequence at every window position.
bool verify_relation(const Prime& p, const std::vector<std::vector<std::uint64_t>>& rows,
                     const RelationWitness& witness);

struct LowerBoundReport {
  std::uint64_t L;
  double reference;   // N^{1/m} / p
  double ratio;       // L / reference
  bool degenerate;    // L == 0
};

// Quantities for the L(N) >> N^{1/m} p^{-1} comparison; asserts nothing.
LowerBoundReport lower_bound_report(std::uint64_t L, std::uint64_t N, const Prime& p,
                                    std::uint32_t m);

}  // namespace polywalk
