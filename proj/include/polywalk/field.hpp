#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace polywalk {

// Deterministic Miller-Rabin, valid over the whole 64-bit range.
bool is_prime_u64(std::uint64_t n);

std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

// A verified prime modulus.
class Prime {
public:
  explicit Prime(std::uint64_t p);

  std::uint64_t value() const { return p_; }
  // Bit length of p, i.e. the width needed to serialize a residue.
  unsigned bit_width() const;

  friend bool operator==(const Prime&, const Prime&) = default;

private:
  std::uint64_t p_;
};

// Residue kept in canonical form [0, p).  Operations between elements of
// different moduli throw std::invalid_argument.
class FieldElement {
public:
  FieldElement(std::uint64_t value, const Prime& p);
  static FieldElement from_signed(std::int64_t value, const Prime& p);

  std::uint64_t value() const { return v_; }
  std::uint64_t modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }

  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  FieldElement operator-() const;

  FieldElement pow(std::uint64_t e) const;

  friend bool operator==(const FieldElement&, const FieldElement&) = default;

private:
  void check_same_modulus(const FieldElement& o) const;

  std::uint64_t v_;
  std::uint64_t p_;
};

// Multiplicative inverse; throws std::domain_error on zero.
FieldElement inv(const FieldElement& a);

// Smallest t >= 1 with g^t = 1; throws std::domain_error on zero.
std::uint64_t mult_order(const FieldElement& g);

// Unit-modulus complex value; construction enforces |re^2 + im^2 - 1| <= 1e-12.
struct UnitComplex {
  UnitComplex(double re_, double im_);
  double re;
  double im;
  std::complex<double> to_complex() const { return {re, im}; }
};

// exp(2*pi*i*c/modulus).  c may be any integer; modulus >= 1.
UnitComplex char_ep(std::int64_t c, std::uint64_t modulus);

// All p-th roots of unity indexed by residue.  Sum sweeps revisit the same p
// values over and over, so the table is built once per modulus.
class CharacterTable {
public:
  static constexpr std::uint64_t kMaxTabulated = 1'000'000;

  explicit CharacterTable(const Prime& p);

  std::uint64_t modulus() const { return p_; }
  std::complex<double> operator()(std::uint64_t residue) const {
    return {re_[residue], im_[residue]};
  }
  const double* re_data() const { return re_.data(); }
  const double* im_data() const { return im_.data(); }

private:
  std::uint64_t p_;
  std::vector<double> re_;
  std::vector<double> im_;
};

}  // namespace polywalk
