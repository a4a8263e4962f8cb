#include "polywalk/field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace polywalk {

std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t r = 1;
  base %= m;
  while (exp) {
    if (exp & 1) r = mul_mod_u64(r, base, m);
    base = mul_mod_u64(base, base, m);
    exp >>= 1;
  }
  return r;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases decide primality for every 64-bit integer.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

Prime::Prime(std::uint64_t p) : p_(p) {
  if (!is_prime_u64(p)) throw std::invalid_argument("Prime: " + std::to_string(p) + " is not prime");
}

unsigned Prime::bit_width() const { return static_cast<unsigned>(std::bit_width(p_)); }

FieldElement::FieldElement(std::uint64_t value, const Prime& p)
    : v_(value % p.value()), p_(p.value()) {}

FieldElement FieldElement::from_signed(std::int64_t value, const Prime& p) {
  const std::uint64_t m = p.value();
  std::int64_t r = value % static_cast<std::int64_t>(m);
  if (r < 0) r += static_cast<std::int64_t>(m);
  return FieldElement(static_cast<std::uint64_t>(r), p);
}

void FieldElement::check_same_modulus(const FieldElement& o) const {
  if (p_ != o.p_) throw std::invalid_argument("FieldElement: modulus mismatch");
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  check_same_modulus(o);
  v_ += o.v_;               // p < 2^63, no overflow
  if (v_ >= p_) v_ -= p_;
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  check_same_modulus(o);
  v_ = (v_ >= o.v_) ? v_ - o.v_ : v_ + p_ - o.v_;
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  check_same_modulus(o);
  v_ = mul_mod_u64(v_, o.v_, p_);
  return *this;
}

FieldElement FieldElement::operator-() const {
  FieldElement r = *this;
  r.v_ = (v_ == 0) ? 0 : p_ - v_;
  return r;
}

FieldElement FieldElement::pow(std::uint64_t e) const {
  FieldElement r = *this;
  r.v_ = pow_mod_u64(v_, e, p_);
  return r;
}

FieldElement inv(const FieldElement& a) {
  if (a.is_zero()) throw std::domain_error("inv: zero has no inverse");
  return a.pow(a.modulus() - 2);
}

namespace {

std::uint64_t pollard_rho(std::uint64_t n) {
  if ((n & 1) == 0) return 2;
  std::uint64_t c = 1;
  while (true) {
    std::uint64_t x = 2, y = 2, d = 1;
    std::uint64_t count = 0;
    while (d == 1) {
      x = (mul_mod_u64(x, x, n) + c) % n;
      y = (mul_mod_u64(y, y, n) + c) % n;
      y = (mul_mod_u64(y, y, n) + c) % n;
      d = std::gcd(x > y ? x - y : y - x, n);
      if (++count > (std::uint64_t(1) << 24)) break;
    }
    if (d != n && d != 1) return d;
    ++c;
  }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& primes) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    primes.push_back(n);
    return;
  }
  for (std::uint64_t q = 2; q < 100 && q * q <= n; ++q) {
    while (n % q == 0) {
      primes.push_back(q);
      n /= q;
    }
  }
  if (n == 1) return;
  if (is_prime_u64(n)) {
    primes.push_back(n);
    return;
  }
  std::uint64_t d = pollard_rho(n);
  factor_into(d, primes);
  factor_into(n / d, primes);
}

}  // namespace

std::uint64_t mult_order(const FieldElement& g) {
  if (g.is_zero()) throw std::domain_error("mult_order: undefined for zero");
  const std::uint64_t p = g.modulus();
  std::uint64_t t = p - 1;
  std::vector<std::uint64_t> primes;
  factor_into(p - 1, primes);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (std::uint64_t q : primes) {
    while (t % q == 0 && pow_mod_u64(g.value(), t / q, p) == 1) t /= q;
  }
  return t;
}

UnitComplex::UnitComplex(double re_, double im_) : re(re_), im(im_) {
  const double norm = re * re + im * im;
  if (std::abs(norm - 1.0) > 1e-12)
    throw std::invalid_argument("UnitComplex: modulus deviates from 1");
}

UnitComplex char_ep(std::int64_t c, std::uint64_t modulus) {
  if (modulus < 1) throw std::invalid_argument("char_ep: modulus must be >= 1");
  std::int64_t r = c % static_cast<std::int64_t>(modulus);
  if (r < 0) r += static_cast<std::int64_t>(modulus);
  const double angle =
      2.0 * std::numbers::pi * (static_cast<double>(r) / static_cast<double>(modulus));
  return UnitComplex(std::cos(angle), std::sin(angle));
}

CharacterTable::CharacterTable(const Prime& p) : p_(p.value()) {
  if (p_ > kMaxTabulated)
    throw std::invalid_argument("CharacterTable: modulus too large to tabulate");
  re_.resize(p_);
  im_.resize(p_);
  for (std::uint64_t k = 0; k < p_; ++k) {
    const double angle =
        2.0 * std::numbers::pi * (static_cast<double>(k) / static_cast<double>(p_));
    re_[k] = std::cos(angle);
    im_[k] = std::sin(angle);
  }
}

}  // namespace polywalk
