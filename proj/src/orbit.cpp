#include "polywalk/orbit.hpp"

#include <stdexcept>

#include "polywalk/common.hpp"

namespace polywalk {

std::vector<std::vector<std::uint64_t>> Orbit::truncated() const {
  std::vector<std::vector<std::uint64_t>> rows;
  rows.reserve(states.size());
  for (const auto& s : states) rows.emplace_back(s.begin(), s.end() - 1);
  return rows;
}

namespace {

std::vector<std::uint64_t> to_residues(const SystemFamily& family,
                                       const std::vector<FieldElement>& v) {
  if (v.size() != family.dim())
    throw std::invalid_argument("orbit: initial vector must have m+1 coordinates");
  std::vector<std::uint64_t> raw(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].modulus() != family.prime().value())
      throw std::invalid_argument("orbit: initial vector modulus mismatch");
    raw[i] = v[i].value();
  }
  return raw;
}

}  // namespace

OrbitState step(const SystemFamily& family, const OrbitState& state) {
  std::vector<std::uint64_t> in = to_residues(family, state.w);
  std::vector<std::uint64_t> out(in.size());
  family.member_for_step(state.n + 1).apply(in, out);
  OrbitState next;
  next.n = state.n + 1;
  next.w.reserve(out.size());
  for (std::uint64_t r : out) next.w.emplace_back(r, family.prime());
  return next;
}

Orbit generate(const SystemFamily& family, const std::vector<FieldElement>& v,
               std::uint64_t count) {
  if (count < 1) throw std::invalid_argument("generate: count must be >= 1");
  Orbit orbit{family.prime(), {}};
  orbit.states.reserve(static_cast<std::size_t>(count));
  std::vector<std::uint64_t> cur = to_residues(family, v);
  std::vector<std::uint64_t> next(cur.size());
  orbit.states.push_back(cur);
  for (std::uint64_t n = 1; n < count; ++n) {
    family.member_for_step(n).apply(cur, next);
    std::swap(cur, next);
    orbit.states.push_back(cur);
  }
  return orbit;
}

PeriodInfo find_period(const SystemFamily& family, const std::vector<FieldElement>& v,
                       std::uint64_t max_steps) {
  const auto cycle = family.schedule().cycle_length(family.members().size());
  if (!cycle.has_value())
    throw std::invalid_argument("find_period: requires a constant or cyclic schedule");
  const std::uint64_t L = *cycle;

  // one full schedule cycle of the (autonomous) composite map
  std::uint64_t budget = max_steps / L;
  if (budget == 0) throw BudgetExceeded("find_period: max_steps below one schedule cycle");
  std::uint64_t used = 0;
  const auto apply_cycle = [&](std::vector<std::uint64_t>& w,
                               std::vector<std::uint64_t>& scratch) {
    if (++used > budget) throw BudgetExceeded("find_period: step guard exceeded");
    for (std::uint64_t k = 1; k <= L; ++k) {
      family.member_for_step(k).apply(w, scratch);
      std::swap(w, scratch);
    }
  };

  std::vector<std::uint64_t> scratch(family.dim());
  std::vector<std::uint64_t> tortoise = to_residues(family, v);
  std::vector<std::uint64_t> hare = tortoise;
  apply_cycle(hare, scratch);

  // Brent: search for the cycle length in powers of two
  std::uint64_t power = 1, lam = 1;
  while (tortoise != hare) {
    if (power == lam) {
      tortoise = hare;
      power *= 2;
      lam = 0;
    }
    apply_cycle(hare, scratch);
    ++lam;
  }

  // find the tail: two pointers lam apart
  tortoise = to_residues(family, v);
  hare = tortoise;
  for (std::uint64_t i = 0; i < lam; ++i) apply_cycle(hare, scratch);
  std::uint64_t mu = 0;
  while (tortoise != hare) {
    apply_cycle(tortoise, scratch);
    apply_cycle(hare, scratch);
    ++mu;
  }
  return {mu * L, lam * L};
}

FieldElement last_coordinate_closed_form(const FieldElement& gm, const FieldElement& hm,
                                         const FieldElement& u0m, std::uint64_t n) {
  const Prime p(gm.modulus());
  if (gm.modulus() != hm.modulus() || gm.modulus() != u0m.modulus())
    throw std::invalid_argument("last_coordinate_closed_form: modulus mismatch");
  const FieldElement one(1, p);
  if (gm == one) {
    // u0 + n*h
    return u0m + FieldElement(n % p.value(), p) * hm;
  }
  const FieldElement gn = gm.pow(n);
  return gn * u0m + (gn - one) * inv(gm - one) * hm;
}

}  // namespace polywalk
