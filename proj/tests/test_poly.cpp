#include <doctest.h>

#include <random>

#include "polywalk/common.hpp"
#include "polywalk/poly.hpp"
#include "test_util.hpp"

using namespace polywalk;

namespace {

MultiPoly random_poly(std::mt19937_64& rng, const Prime& p, std::uint32_t arity,
                      std::uint32_t max_deg, int terms) {
  MultiPoly f(p, arity);
  std::uniform_int_distribution<std::uint64_t> coeff(0, p.value() - 1);
  std::uniform_int_distribution<std::uint32_t> exp(0, max_deg);
  for (int t = 0; t < terms; ++t) {
    Monomial mono{std::vector<std::uint32_t>(arity, 0)};
    std::uint32_t budget = max_deg;
    for (std::uint32_t j = 0; j < arity; ++j) {
      const std::uint32_t e = std::min(exp(rng), budget);
      mono.exps[j] = e;
      budget -= e;
    }
    f.add_term(std::move(mono), static_cast<std::int64_t>(coeff(rng)));
  }
  return f;
}

std::vector<FieldElement> point(const Prime& p, std::initializer_list<std::uint64_t> vs) {
  std::vector<FieldElement> out;
  for (std::uint64_t v : vs) out.emplace_back(v, p);
  return out;
}

}  // namespace

TEST_CASE("evaluation") {
  const Prime p5(5);
  const MultiPoly f = MultiPoly::parse("X0*X1", p5, 2);
  CHECK(f.evaluate(point(p5, {2, 3})) == FieldElement(1, p5));
  const MultiPoly zero(p5, 2);
  CHECK(zero.evaluate(point(p5, {4, 4})) == FieldElement(0, p5));
  const Prime p3(3);
  const MultiPoly g = MultiPoly::parse("X1^2 + 1", p3, 2);
  CHECK(g.evaluate(point(p3, {0, 2})) == FieldElement(2, p3));
  CHECK_THROWS_AS(f.evaluate(point(p5, {1})), std::invalid_argument);
}

TEST_CASE("ring operations") {
  const Prime p5(5);
  const MultiPoly f = MultiPoly::parse("2*X0*X1^2 + X0 + 3", p5, 2);
  CHECK((f - f).is_zero());
  CHECK((f + (-f)).is_zero());
  const MultiPoly x0 = MultiPoly::variable(p5, 2, 0);
  const MultiPoly x1 = MultiPoly::variable(p5, 2, 1);
  CHECK(x0 * x1 == MultiPoly::parse("X0*X1", p5, 2));

  const MultiPoly prod = MultiPoly::parse("X0*X1", p5, 2) * MultiPoly::parse("X1 + 1", p5, 2);
  CHECK(prod == MultiPoly::parse("X0*X1^2 + X0*X1", p5, 2));
  // evaluate-equality over all of F_5^2
  for (std::uint64_t a = 0; a < 5; ++a)
    for (std::uint64_t b = 0; b < 5; ++b) {
      const auto w = point(p5, {a, b});
      CHECK(prod.evaluate(w) ==
            MultiPoly::parse("X0*X1", p5, 2).evaluate(w) *
                MultiPoly::parse("X1 + 1", p5, 2).evaluate(w));
    }

  const Prime p7(7);
  CHECK_THROWS_AS(f + MultiPoly(p7, 2), std::invalid_argument);
  CHECK_THROWS_AS(f + MultiPoly(p5, 3), std::invalid_argument);
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937_64 rng(5);
  const Prime p7(7);
  for (int it = 0; it < 40; ++it) {
    const MultiPoly f = random_poly(rng, p7, 3, 3, 4);
    const MultiPoly g = random_poly(rng, p7, 3, 3, 4);
    const MultiPoly h = random_poly(rng, p7, 3, 3, 4);
    CHECK((f + g) + h == f + (g + h));
    CHECK(f * g == g * f);
    CHECK((f * g) * h == f * (g * h));
    CHECK(f * (g + h) == f * g + f * h);
  }
}

TEST_CASE("composition") {
  const Prime p5(5);
  const MultiPoly f = MultiPoly::parse("X0*X1", p5, 2);
  const std::vector<MultiPoly> id = {MultiPoly::variable(p5, 2, 0), MultiPoly::variable(p5, 2, 1)};
  CHECK(f.compose(id) == f);

  const std::vector<MultiPoly> subs = {MultiPoly::parse("X0*X1", p5, 2),
                                       MultiPoly::parse("X1 + 1", p5, 2)};
  CHECK(f.compose(subs) == MultiPoly::parse("X0*X1^2 + X0*X1", p5, 2));

  const MultiPoly c = MultiPoly::constant(p5, 2, 4);
  CHECK(c.compose(subs) == c);

  CHECK_THROWS_AS(f.compose(std::vector<MultiPoly>{id[0]}), std::invalid_argument);
}

TEST_CASE("composition: identity fixes random polynomials") {
  std::mt19937_64 rng(17);
  for (std::uint64_t pv : {5ull, 7ull}) {
    const Prime p(pv);
    for (std::uint32_t arity : {2u, 3u}) {
      std::vector<MultiPoly> id;
      for (std::uint32_t j = 0; j < arity; ++j) id.push_back(MultiPoly::variable(p, arity, j));
      for (int it = 0; it < 25; ++it) {
        const MultiPoly f = random_poly(rng, p, arity, 4, 5);
        CHECK(f.compose(id) == f);
      }
    }
  }
}

TEST_CASE("composition commutes with evaluation, exhaustively") {
  std::mt19937_64 rng(23);
  for (std::uint64_t pv : {3ull, 5ull}) {
    const Prime p(pv);
    for (std::uint32_t arity : {2u, 3u}) {
      for (int it = 0; it < 6; ++it) {
        const MultiPoly f = random_poly(rng, p, arity, 3, 4);
        std::vector<MultiPoly> subs;
        for (std::uint32_t j = 0; j < arity; ++j) subs.push_back(random_poly(rng, p, arity, 2, 3));
        const MultiPoly composed = f.compose(subs);
        std::vector<std::uint64_t> w(arity, 0);
        while (true) {
          std::vector<std::uint64_t> inner(arity);
          for (std::uint32_t j = 0; j < arity; ++j) inner[j] = subs[j].evaluate_residues(w);
          CHECK(composed.evaluate_residues(w) == f.evaluate_residues(inner));
          std::uint32_t j = 0;
          for (; j < arity; ++j) {
            if (++w[j] < pv) break;
            w[j] = 0;
          }
          if (j == arity) break;
        }
      }
    }
  }
}

TEST_CASE("degree queries") {
  const Prime p5(5);
  const MultiPoly f = MultiPoly::parse("X0*X1^2 + X0*X1", p5, 2);
  CHECK(f.degree_in(1) == 2);
  CHECK(f.degree_in(0) == 1);
  CHECK(f.total_degree() == 3);
  const MultiPoly zero(p5, 2);
  CHECK_FALSE(zero.degree_in(0).has_value());
  CHECK_FALSE(zero.total_degree().has_value());
  const MultiPoly g = MultiPoly::parse("X1^2 + 1", p5, 2);
  CHECK(g.degree_in(0) == 0);
  CHECK(MultiPoly::constant(p5, 2, 2).total_degree() == 0);
  CHECK(MultiPoly::parse("X1^3*X0^2", p5, 2).total_degree() == 5);
  CHECK_THROWS_AS(f.degree_in(2), std::invalid_argument);
}

TEST_CASE("rendering and parsing") {
  const Prime p5(5);
  MultiPoly f(p5, 2);
  f.add_term(Monomial{{1, 2}}, 2);
  f.add_term(Monomial{{0, 0}}, 1);
  CHECK(f.to_string() == "2*X0*X1^2 + 1");
  CHECK(MultiPoly::parse("X0*X1^2 + X0*X1", p5, 2).to_string() == "X0*X1^2 + X0*X1");
  CHECK(MultiPoly(p5, 2).to_string() == "0");
  CHECK(MultiPoly::constant(p5, 2, 3).to_string() == "3");
  // negative coefficients canonicalize
  CHECK(MultiPoly::parse("-X0 + 1", p5, 2).to_string() == "4*X0 + 1");

  std::mt19937_64 rng(31);
  for (int it = 0; it < 30; ++it) {
    const MultiPoly g = random_poly(rng, p5, 3, 4, 5);
    if (g.is_zero()) continue;
    CHECK(MultiPoly::parse(g.to_string(), p5, 3) == g);
  }
  CHECK_THROWS_AS(MultiPoly::parse("X0 + + X1", p5, 2), ParseError);
  CHECK_THROWS_AS(MultiPoly::parse("X9", p5, 2), ParseError);
}

TEST_CASE("term cap") {
  const Prime p101(101);
  // (X0+1)(X1+1)(X2+1) has 8 terms; cap at 4 must trip
  const MultiPoly a = MultiPoly::parse("X0 + 1", p101, 3);
  const MultiPoly b = MultiPoly::parse("X1 + 1", p101, 3);
  const MultiPoly c = MultiPoly::parse("X2 + 1", p101, 3);
  CHECK_THROWS_AS(MultiPoly::mul_capped(a * b, c, 4), TermCapExceeded);
  CHECK(MultiPoly::mul_capped(a * b, c, 100).term_count() == 8);
}
