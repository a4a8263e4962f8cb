#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polywalk/field.hpp"
#include "polywalk/poly.hpp"

namespace polywalk {

// Unit upper-triangular exponent matrix governing degree growth.
class ShapeMatrix {
public:
  ShapeMatrix(std::uint32_t m, std::vector<std::uint32_t> row_major);

  std::uint32_t m() const { return m_; }
  std::uint32_t dim() const { return m_ + 1; }
  std::uint32_t at(std::uint32_t i, std::uint32_t j) const { return s_[i * dim() + j]; }
  const std::vector<std::uint32_t>& row_major() const { return s_; }

  friend bool operator==(const ShapeMatrix&, const ShapeMatrix&) = default;

private:
  std::uint32_t m_;
  std::vector<std::uint32_t> s_;
};

// One member of the triangular class: level i maps X_i to
// X_i*G_i(X_{i+1..m}) + H_i(X_{i+1..m}), and the last level is affine
// g_m*X_m + h_m with g_m != 0 (checked by validate(), not the constructor).
struct TriangularSystem {
  TriangularSystem(ShapeMatrix shape, std::vector<MultiPoly> G, std::vector<MultiPoly> H,
                   FieldElement gm, FieldElement hm);

  const Prime& prime() const { return G.empty() ? hm_prime_ : G.front().prime(); }
  std::uint32_t m() const { return shape.m(); }
  std::uint32_t dim() const { return shape.dim(); }

  // The full maps F_0..F_m as polynomials of arity m+1.
  std::vector<MultiPoly> full_polys() const;

  // out[i] = F_i(in); the pointwise map applied exactly once.
  void apply(std::span<const std::uint64_t> in, std::span<std::uint64_t> out) const;

  ShapeMatrix shape;
  std::vector<MultiPoly> G;  // size m
  std::vector<MultiPoly> H;  // size m
  FieldElement gm;
  FieldElement hm;

private:
  Prime hm_prime_;
};

struct Violation {
  enum class Kind { Support, MissingLeadingMonomial, LeadingUniqueness, HDegree, GmZero };
  Kind kind;
  std::uint32_t level;                 // index i of the offending polynomial
  std::optional<std::uint32_t> var;    // variable j, where applicable
  std::string message;
};

struct ValidationReport {
  bool ok() const { return violations.empty(); }
  std::vector<Violation> violations;
  std::string to_string() const;
};

// Checks class membership: variable support, unique leading monomial with the
// per-variable degree bounds, the H degree bounds, and g_m != 0.
ValidationReport validate(const TriangularSystem& sys);

struct PermutationCheck {
  bool is_permutation;
  // Two distinct inputs with equal images, present when is_permutation is false.
  std::optional<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>> collision;
};

// Bijectivity of the induced map on F_p^{m+1}.  The triangular structure makes
// this equivalent to g_m != 0 and every G_i nonvanishing, which is what is
// checked (cost p^{m-i} per level, guarded); a colliding pair is back-solved
// through the levels when the check fails.
PermutationCheck is_permutation(const TriangularSystem& sys,
                                std::uint64_t guard = 10'000'000);

// Independent oracle: enumerates all p^{m+1} inputs (guarded).
PermutationCheck exhaustive_bijection_check(const TriangularSystem& sys,
                                            std::uint64_t guard = 10'000'000);

// Rule assigning a member index to each step k >= 1.
class Schedule {
public:
  enum class Kind { Constant, Cyclic, Explicit };

  static Schedule constant() { return Schedule(Kind::Constant, {}); }
  static Schedule cyclic() { return Schedule(Kind::Cyclic, {}); }
  static Schedule explicit_list(std::vector<std::size_t> steps) {
    return Schedule(Kind::Explicit, std::move(steps));
  }

  Kind kind() const { return kind_; }
  const std::vector<std::size_t>& steps() const { return steps_; }

  std::size_t member_for_step(std::uint64_t k, std::size_t member_count) const;
  // Length of the repeating unit; nullopt for explicit schedules.
  std::optional<std::uint64_t> cycle_length(std::size_t member_count) const;

private:
  Schedule(Kind kind, std::vector<std::size_t> steps) : kind_(kind), steps_(std::move(steps)) {}
  Kind kind_;
  std::vector<std::size_t> steps_;
};

// An indexed family of validated systems sharing shape and modulus.
class SystemFamily {
public:
  SystemFamily(std::vector<TriangularSystem> members, Schedule schedule);

  const Prime& prime() const { return members_.front().prime(); }
  std::uint32_t m() const { return members_.front().m(); }
  std::uint32_t dim() const { return members_.front().dim(); }
  const ShapeMatrix& shape() const { return members_.front().shape; }
  const std::vector<TriangularSystem>& members() const { return members_; }
  const Schedule& schedule() const { return schedule_; }
  const TriangularSystem& member_for_step(std::uint64_t k) const {
    return members_[schedule_.member_for_step(k, members_.size())];
  }
  // All members carry the same g_m (hypothesis of the averaged-sum analyses).
  bool shared_gm() const;

private:
  std::vector<TriangularSystem> members_;
  Schedule schedule_;
};

// The k-th symbolic iterate and its split F_i = X_i*Gt_i + Ht_i, where both
// split parts live in the variables X_{i+1..m} only.
struct IterateSet {
  std::uint64_t k;
  std::vector<MultiPoly> polys;    // F_0^{(k)} .. F_m^{(k)}
  std::vector<MultiPoly> g_tilde;  // Gt_{k,0} .. Gt_{k,m}
  std::vector<MultiPoly> h_tilde;  // Ht_{k,0} .. Ht_{k,m}
};

// Incremental symbolic iteration; advance() composes one more step.
class SymbolicIterator {
public:
  explicit SymbolicIterator(const SystemFamily& family, std::size_t term_cap = 1'000'000);
  const IterateSet& current() const { return current_; }
  const IterateSet& advance();

private:
  const SystemFamily* family_;
  std::size_t term_cap_;
  IterateSet current_;
};

IterateSet iterate_symbolic(const SystemFamily& family, std::uint64_t k,
                            std::size_t term_cap = 1'000'000);

// S^k applied to the all-ones vector; entry i predicts 1 + deg Gt_{k,i}.
std::vector<std::uint64_t> predicted_degrees(const ShapeMatrix& shape, std::uint64_t k);

struct DegreeLawRow {
  std::uint32_t k;
  std::uint32_t i;
  std::uint64_t observed;   // 1 + total degree of Gt_{k,i}
  std::uint64_t predicted;  // (S^k 1)_i
  bool equal;
};

struct DegreeLawReport {
  std::vector<DegreeLawRow> rows;
  bool all_equal = true;
  std::optional<DegreeLawRow> first_mismatch;
  // Fit of deg Gt_{k,0} against its leading term k^m * (prod s_{i,i+1}) / m!:
  // the residual's polynomial degree in k, measured by finite differences.
  // -1 when the residual is identically zero over the sampled k.
  std::optional<int> residual_degree;
  bool residual_certified = false;  // enough sample points to pin the degree
  bool fit_applicable = false;      // superdiagonal product nonzero
};

DegreeLawReport check_degree_law(const SystemFamily& family, std::uint32_t k_max,
                                 std::size_t term_cap = 1'000'000);

}  // namespace polywalk
