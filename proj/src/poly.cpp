#include "polywalk/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

#include "polywalk/common.hpp"

namespace polywalk {

std::uint64_t Monomial::total_degree() const {
  return std::accumulate(exps.begin(), exps.end(), std::uint64_t(0));
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
  const std::uint64_t da = a.total_degree();
  const std::uint64_t db = b.total_degree();
  if (da != db) return da < db;
  // lexicographic with X0 most significant
  return std::lexicographical_compare(a.exps.begin(), a.exps.end(),
                                      b.exps.begin(), b.exps.end());
}

MultiPoly::MultiPoly(const Prime& p, std::uint32_t arity) : p_(p), arity_(arity) {
  if (arity == 0) throw std::invalid_argument("MultiPoly: arity must be positive");
}

MultiPoly MultiPoly::constant(const Prime& p, std::uint32_t arity, std::int64_t c) {
  MultiPoly f(p, arity);
  f.add_term(Monomial{std::vector<std::uint32_t>(arity, 0)}, c);
  return f;
}

MultiPoly MultiPoly::variable(const Prime& p, std::uint32_t arity, std::uint32_t index) {
  if (index >= arity) throw std::invalid_argument("MultiPoly::variable: index out of range");
  MultiPoly f(p, arity);
  Monomial m{std::vector<std::uint32_t>(arity, 0)};
  m.exps[index] = 1;
  f.add_term(std::move(m), 1);
  return f;
}

void MultiPoly::add_term(Monomial mono, std::int64_t coeff) {
  if (mono.exps.size() != arity_)
    throw std::invalid_argument("MultiPoly::add_term: exponent vector has wrong length");
  const std::uint64_t c = FieldElement::from_signed(coeff, p_).value();
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(std::move(mono), c);
  if (!inserted) {
    it->second += c;
    if (it->second >= p_.value()) it->second -= p_.value();
    if (it->second == 0) terms_.erase(it);
  }
}

std::uint64_t MultiPoly::coeff_at(const Monomial& mono) const {
  auto it = terms_.find(mono);
  return it == terms_.end() ? 0 : it->second;
}

void MultiPoly::check_compatible(const MultiPoly& o) const {
  if (p_ != o.p_) throw std::invalid_argument("MultiPoly: modulus mismatch");
  if (arity_ != o.arity_) throw std::invalid_argument("MultiPoly: arity mismatch");
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, static_cast<std::int64_t>(c));
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  check_compatible(o);
  const std::uint64_t p = p_.value();
  for (const auto& [m, c] : o.terms_) add_term(m, static_cast<std::int64_t>(p - c));
  return *this;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(p_, arity_);
  r -= *this;
  return r;
}

MultiPoly MultiPoly::mul_capped(const MultiPoly& a, const MultiPoly& b, std::size_t cap) {
  a.check_compatible(b);
  MultiPoly r(a.p_, a.arity_);
  const std::uint64_t p = a.p_.value();
  Monomial m{std::vector<std::uint32_t>(a.arity_, 0)};
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      for (std::uint32_t j = 0; j < a.arity_; ++j) m.exps[j] = ma.exps[j] + mb.exps[j];
      const std::uint64_t c = mul_mod_u64(ca, cb, p);
      auto [it, inserted] = r.terms_.emplace(m, c);
      if (!inserted) {
        it->second += c;
        if (it->second >= p) it->second -= p;
        if (it->second == 0) r.terms_.erase(it);
      }
    }
    if (cap != 0 && r.terms_.size() > cap)
      throw TermCapExceeded("polynomial product exceeds term cap");
  }
  return r;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  return MultiPoly::mul_capped(a, b, 0);
}

FieldElement MultiPoly::evaluate(std::span<const FieldElement> point) const {
  if (point.size() != arity_)
    throw std::invalid_argument("MultiPoly::evaluate: point has wrong arity");
  std::vector<std::uint64_t> raw(point.size());
  for (std::size_t j = 0; j < point.size(); ++j) {
    if (point[j].modulus() != p_.value())
      throw std::invalid_argument("MultiPoly::evaluate: modulus mismatch");
    raw[j] = point[j].value();
  }
  return FieldElement(evaluate_residues(raw), p_);
}

std::uint64_t MultiPoly::evaluate_residues(std::span<const std::uint64_t> point) const {
  if (point.size() != arity_)
    throw std::invalid_argument("MultiPoly::evaluate_residues: point has wrong arity");
  const std::uint64_t p = p_.value();
  std::uint64_t acc = 0;
  for (const auto& [m, c] : terms_) {
    std::uint64_t t = c;
    for (std::uint32_t j = 0; j < arity_; ++j) {
      if (m.exps[j] != 0) t = mul_mod_u64(t, pow_mod_u64(point[j], m.exps[j], p), p);
    }
    acc += t;
    if (acc >= p) acc -= p;
  }
  return acc;
}

namespace {

// Horner over variable j: f = sum_e X_j^e * f_e with f_e free of X_j.
MultiPoly compose_rec(const MultiPoly& f, std::span<const MultiPoly> subs,
                      std::uint32_t j, std::size_t cap) {
  const Prime& p = subs.front().prime();
  const std::uint32_t out_arity = subs.front().arity();
  if (f.is_zero()) return MultiPoly(p, out_arity);
  if (j >= f.arity()) {
    // only the constant monomial can remain
    MultiPoly r(p, out_arity);
    for (const auto& [m, c] : f.terms()) {
      (void)m;
      r += MultiPoly::constant(p, out_arity, static_cast<std::int64_t>(c));
    }
    return r;
  }
  std::uint32_t emax = 0;
  for (const auto& [m, c] : f.terms()) emax = std::max(emax, m.exps[j]);
  // bucket by exponent of X_j, zeroing that slot
  std::vector<MultiPoly> bucket(emax + 1, MultiPoly(f.prime(), f.arity()));
  for (const auto& [m, c] : f.terms()) {
    Monomial reduced = m;
    const std::uint32_t e = reduced.exps[j];
    reduced.exps[j] = 0;
    bucket[e].add_term(std::move(reduced), static_cast<std::int64_t>(c));
  }
  MultiPoly result = compose_rec(bucket[emax], subs, j + 1, cap);
  for (std::uint32_t e = emax; e-- > 0;) {
    result = MultiPoly::mul_capped(result, subs[j], cap);
    result += compose_rec(bucket[e], subs, j + 1, cap);
    if (cap != 0 && result.term_count() > cap)
      throw TermCapExceeded("composition exceeds term cap");
  }
  return result;
}

}  // namespace

MultiPoly MultiPoly::compose(std::span<const MultiPoly> subs, std::size_t term_cap) const {
  if (subs.size() != arity_)
    throw std::invalid_argument("MultiPoly::compose: substitution count must equal arity");
  for (const MultiPoly& s : subs) {
    if (s.prime() != p_) throw std::invalid_argument("MultiPoly::compose: modulus mismatch");
    if (s.arity() != subs.front().arity())
      throw std::invalid_argument("MultiPoly::compose: substitutions must share arity");
  }
  return compose_rec(*this, subs, 0, term_cap);
}

std::optional<std::uint32_t> MultiPoly::degree_in(std::uint32_t j) const {
  if (j >= arity_) throw std::invalid_argument("MultiPoly::degree_in: variable out of range");
  if (terms_.empty()) return std::nullopt;
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.exps[j]);
  return d;
}

std::optional<std::uint64_t> MultiPoly::total_degree() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.rbegin()->first.total_degree();  // grlex: last term has max degree
}

bool MultiPoly::depends_on(std::uint32_t j) const {
  auto d = degree_in(j);
  return d.has_value() && *d > 0;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!out.empty()) out += " + ";
    const auto& [m, c] = *it;
    const bool is_const = m.total_degree() == 0;
    bool printed = false;
    if (c != 1 || is_const) {
      out += std::to_string(c);
      printed = true;
    }
    for (std::uint32_t j = 0; j < arity_; ++j) {
      if (m.exps[j] == 0) continue;
      if (printed) out += "*";
      out += "X" + std::to_string(j);
      if (m.exps[j] > 1) out += "^" + std::to_string(m.exps[j]);
      printed = true;
    }
  }
  return out;
}

namespace {

struct Cursor {
  const std::string& s;
  std::size_t i = 0;
  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("polynomial text, position " + std::to_string(i) + ": " + what);
  }
  std::uint64_t number() {
    skip_ws();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) fail("expected number");
    std::uint64_t v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + static_cast<std::uint64_t>(s[i] - '0');
      ++i;
    }
    return v;
  }
};

}  // namespace

MultiPoly MultiPoly::parse(const std::string& text, const Prime& p, std::uint32_t arity) {
  MultiPoly f(p, arity);
  Cursor c{text};
  if (c.done()) c.fail("empty input");
  bool first = true;
  while (!c.done()) {
    bool negate = false;
    c.skip_ws();
    if (!first) {
      if (c.s[c.i] == '+') {
        ++c.i;
      } else if (c.s[c.i] == '-') {
        negate = true;
        ++c.i;
      } else {
        c.fail("expected '+' or '-'");
      }
    } else if (c.s[c.i] == '-') {
      negate = true;
      ++c.i;
    }
    first = false;
    // term: optional coefficient, then X<i>[^e] factors joined by '*'
    std::int64_t coeff = 1;
    Monomial mono{std::vector<std::uint32_t>(arity, 0)};
    bool want_factor = true;
    bool any = false;
    while (want_factor) {
      c.skip_ws();
      if (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) {
        if (any) c.fail("coefficient must come first in a term");
        coeff = static_cast<std::int64_t>(c.number() % p.value());
      } else if (c.i < c.s.size() && (c.s[c.i] == 'X' || c.s[c.i] == 'x')) {
        ++c.i;
        const std::uint64_t idx = c.number();
        if (idx >= arity) c.fail("variable index out of range");
        std::uint32_t e = 1;
        c.skip_ws();
        if (c.i < c.s.size() && c.s[c.i] == '^') {
          ++c.i;
          e = static_cast<std::uint32_t>(c.number());
        }
        mono.exps[static_cast<std::uint32_t>(idx)] += e;
      } else {
        c.fail("expected coefficient or variable");
      }
      any = true;
      c.skip_ws();
      if (c.i < c.s.size() && c.s[c.i] == '*') {
        ++c.i;
      } else {
        want_factor = false;
      }
    }
    f.add_term(std::move(mono), negate ? -coeff : coeff);
  }
  return f;
}

}  // namespace polywalk
