#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polywalk/field.hpp"

namespace polywalk {

// Exponent vector of fixed length (one entry per variable X_j).
struct Monomial {
  std::vector<std::uint32_t> exps;

  std::uint64_t total_degree() const;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

// Graded-lexicographic order: total degree first, then lexicographic with X0
// most significant.  This is the canonical storage order of MultiPoly.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

// Sparse multivariate polynomial over F_p in variables X_0 .. X_{arity-1}.
// Canonical form: no zero coefficients, no duplicate monomials; value type,
// immutable in practice once built.
class MultiPoly {
public:
  using TermMap = std::map<Monomial, std::uint64_t, GrlexLess>;

  MultiPoly(const Prime& p, std::uint32_t arity);  // zero polynomial
  static MultiPoly constant(const Prime& p, std::uint32_t arity, std::int64_t c);
  static MultiPoly variable(const Prime& p, std::uint32_t arity, std::uint32_t index);

  const Prime& prime() const { return p_; }
  std::uint32_t arity() const { return arity_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  // Accumulates coeff * monomial and drops the term if it cancels.
  void add_term(Monomial mono, std::int64_t coeff);
  std::uint64_t coeff_at(const Monomial& mono) const;  // 0 when absent

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly operator-() const;
  friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

  FieldElement evaluate(std::span<const FieldElement> point) const;
  std::uint64_t evaluate_residues(std::span<const std::uint64_t> point) const;

  // f(subs[0], ..., subs[arity-1]), expanded by Horner over the lowest
  // variable present.  term_cap > 0 bounds intermediate sizes.
  MultiPoly compose(std::span<const MultiPoly> subs, std::size_t term_cap = 0) const;

  // Max exponent of X_j across terms; nullopt for the zero polynomial.
  std::optional<std::uint32_t> degree_in(std::uint32_t j) const;
  // Max total degree across terms; nullopt for the zero polynomial.
  std::optional<std::uint64_t> total_degree() const;
  bool depends_on(std::uint32_t j) const;

  // Rendering: sum of terms like `2*X0*X1^2`, unit coefficients and unit
  // exponents elided, highest term first; "0" for the zero polynomial.
  std::string to_string() const;
  static MultiPoly parse(const std::string& text, const Prime& p, std::uint32_t arity);

  // Product that throws TermCapExceeded past `cap` stored terms (0 = no cap).
  static MultiPoly mul_capped(const MultiPoly& a, const MultiPoly& b, std::size_t cap);

private:
  void check_compatible(const MultiPoly& o) const;

  Prime p_;
  std::uint32_t arity_;
  TermMap terms_;
};

}  // namespace polywalk
