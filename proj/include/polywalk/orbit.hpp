#pragma once

#include <cstdint>
#include <vector>

#include "polywalk/field.hpp"
#include "polywalk/systems.hpp"

namespace polywalk {

// One point of the trajectory: w_n and its step index.
struct OrbitState {
  std::vector<FieldElement> w;
  std::uint64_t n = 0;
};

// A generated prefix of the trajectory, stored as raw residues.
struct Orbit {
  Prime p;
  std::vector<std::vector<std::uint64_t>> states;  // each of length m+1

  std::size_t length() const { return states.size(); }
  // Rows with the last coordinate dropped.
  std::vector<std::vector<std::uint64_t>> truncated() const;
};

struct PeriodInfo {
  std::uint64_t tail;  // pre-period length (0 for permutation members)
  std::uint64_t tau;   // period
};

// Applies the member selected by the schedule for step n+1.
OrbitState step(const SystemFamily& family, const OrbitState& state);

// w_0 = v followed by count-1 steps.
Orbit generate(const SystemFamily& family, const std::vector<FieldElement>& v,
               std::uint64_t count);

// Brent cycle detection on the composite one-schedule-cycle map; constant or
// cyclic schedules only.  tail and tau are reported in base steps (multiples
// of the schedule cycle length; minimal for constant schedules).
PeriodInfo find_period(const SystemFamily& family, const std::vector<FieldElement>& v,
                       std::uint64_t max_steps = 100'000'000);

// The last coordinate after n steps under a fixed affine last row:
//   g != 1:  g^n*u0 + (g^n - 1)/(g - 1) * h
//   g == 1:  u0 + n*h
FieldElement last_coordinate_closed_form(const FieldElement& gm, const FieldElement& hm,
                                         const FieldElement& u0m, std::uint64_t n);

}  // namespace polywalk
