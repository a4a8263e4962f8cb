#include <doctest.h>

#include <random>
#include <set>

#include "polywalk/orbit.hpp"
#include "polywalk/walk_hash.hpp"
#include "test_util.hpp"

using namespace polywalk;
using namespace testutil;

namespace {

// the two-member p=3 walk from the validation examples:
//   member 0: F0 = X0*(X1^2+1),     F1 = X1 + 1
//   member 1: F0 = X0*(X1^2+1) + 1, F1 = X1 + 2
HashParams params_p3_r1() {
  const Prime p(3);
  ShapeMatrix shape(1, {1, 2, 0, 1});
  MultiPoly g0 = MultiPoly::parse("X1^2 + 1", p, 2);
  TriangularSystem s0(shape, {g0}, {MultiPoly(p, 2)}, FieldElement(1, p), FieldElement(1, p));
  TriangularSystem s1(shape, {g0}, {MultiPoly::constant(p, 2, 1)}, FieldElement(1, p),
                      FieldElement(2, p));
  return HashParams({s0, s1}, 1, {FieldElement(1, p), FieldElement(0, p)});
}

HashParams params_p5_r2() {
  const Prime p(5);
  ShapeMatrix shape(1, {1, 2, 0, 1});
  MultiPoly g0 = MultiPoly::parse("X1^2 + X1 + 1", p, 2);
  std::vector<TriangularSystem> members;
  for (std::uint64_t h0 = 0; h0 < 4; ++h0) {
    members.emplace_back(shape, std::vector<MultiPoly>{g0},
                         std::vector<MultiPoly>{MultiPoly::constant(p, 2, static_cast<std::int64_t>(h0))},
                         FieldElement(2, p), FieldElement(h0 + 1, p));
  }
  return HashParams(members, 2, {FieldElement(1, p), FieldElement(3, p)});
}

std::string random_bits(std::mt19937_64& rng, std::size_t len) {
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += (rng() & 1) ? '1' : '0';
  return s;
}

}  // namespace

TEST_CASE("padding") {
  CHECK(pad_input("1", 2) == "01");
  CHECK(pad_input("10", 2) == "10");
  CHECK(pad_input("101", 2) == "0101");
  CHECK(pad_input("1", 1) == "1");
  CHECK_THROWS_AS(pad_input("", 2), std::invalid_argument);
  CHECK_THROWS_AS(pad_input("10x", 2), std::invalid_argument);
}

TEST_CASE("block splitting") {
  CHECK(split_blocks("0101", 2) == std::vector<std::uint32_t>{1, 1});
  CHECK(split_blocks("10", 1) == std::vector<std::uint32_t>{1, 0});
  CHECK(split_blocks("1111", 4) == std::vector<std::uint32_t>{15});
  CHECK(split_blocks("1011", 2) == std::vector<std::uint32_t>{2, 3});
  CHECK_THROWS_AS(split_blocks("101", 2), std::invalid_argument);
}

TEST_CASE("worked digest") {
  const HashParams params = params_p3_r1();
  const Digest d = walk_hash(params, "10");
  REQUIRE(d.coords.size() == 2);
  CHECK(d.coords[0].value() == 1);
  CHECK(d.coords[1].value() == 0);
  CHECK(d.bits == "0100");
  // deterministic
  CHECK(walk_hash(params, "10").bits == d.bits);
  CHECK_THROWS_AS(walk_hash(params, ""), std::invalid_argument);
}

TEST_CASE("cross-length collision from left zero-padding") {
  const HashParams params = params_p5_r2();
  CHECK(walk_hash(params, "1").bits == walk_hash(params, "01").bits);
  CHECK(walk_hash(params, "101").bits == walk_hash(params, "0101").bits);
}

TEST_CASE("hash equals the orbit generator under the block schedule") {
  std::mt19937_64 rng(107);
  for (std::uint64_t pv : {3ull, 5ull, 7ull}) {
    const Prime p(pv);
    const std::uint32_t m = 1 + static_cast<std::uint32_t>(rng() % 2);
    const std::uint32_t r = 1 + static_cast<std::uint32_t>(rng() % 2);
    const std::vector<TriangularSystem> members =
        random_permutation_members(rng, p, m, std::size_t(1) << r);
    std::vector<FieldElement> w0;
    for (std::uint32_t j = 0; j <= m; ++j) w0.emplace_back(rng() % pv, p);
    const HashParams params(members, r, w0);

    for (int it = 0; it < 333; ++it) {
      const std::string bits = random_bits(rng, 1 + rng() % 64);
      const Digest d = walk_hash(params, bits);

      const auto blocks = split_blocks(pad_input(bits, r), r);
      std::vector<std::size_t> schedule(blocks.begin(), blocks.end());
      SystemFamily fam(members, Schedule::explicit_list(schedule));
      const Orbit orbit = generate(fam, w0, blocks.size() + 1);
      std::vector<std::uint64_t> got;
      for (const FieldElement& x : d.coords) got.push_back(x.value());
      CHECK(got == orbit.states.back());
    }
  }
}

TEST_CASE("for a fixed message the seed map is a bijection") {
  std::mt19937_64 rng(109);
  for (std::uint64_t pv : {3ull, 5ull}) {
    const Prime p(pv);
    for (std::uint32_t m : {1u, 2u}) {
      const std::vector<TriangularSystem> members = random_permutation_members(rng, p, m, 2);
      const std::string bits = random_bits(rng, 12);
      std::uint64_t total = 1;
      for (std::uint32_t j = 0; j <= m; ++j) total *= pv;

      std::set<std::string> digests;
      for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<FieldElement> w0;
        std::uint64_t t = code;
        for (std::uint32_t j = 0; j <= m; ++j) {
          w0.emplace_back(t % pv, p);
          t /= pv;
        }
        const HashParams params(members, 1, w0);
        digests.insert(walk_hash(params, bits).bits);
      }
      CHECK(digests.size() == total);
    }
  }
}

TEST_CASE("serialization") {
  const Prime p3(3);
  const std::vector<FieldElement> w = {FieldElement(1, p3), FieldElement(0, p3)};
  CHECK(serialize_state(w, 2) == "0100");
  CHECK(serialize_state(std::vector<FieldElement>(3, FieldElement(0, p3)), 2) == "000000");
  CHECK(parse_state("0100", p3, 2, 2) == w);
  CHECK_THROWS_AS(serialize_state(std::vector<FieldElement>{FieldElement(2, p3)}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_state("11", p3, 1, 2), std::invalid_argument);  // 3 out of range
  CHECK_THROWS_AS(parse_state("010", p3, 2, 2), std::invalid_argument);

  std::mt19937_64 rng(113);
  const Prime p(101);
  for (int it = 0; it < 20; ++it) {
    std::vector<FieldElement> v;
    for (int j = 0; j < 3; ++j) v.emplace_back(rng() % 101, p);
    CHECK(parse_state(serialize_state(v, 7), p, 3, 7) == v);
  }
}

TEST_CASE("hash parameter validation") {
  const Prime p(3);
  ShapeMatrix shape(1, {1, 2, 0, 1});
  MultiPoly g0 = MultiPoly::parse("X1^2 + 1", p, 2);
  TriangularSystem perm(shape, {g0}, {MultiPoly(p, 2)}, FieldElement(1, p), FieldElement(1, p));
  const std::vector<FieldElement> w0 = {FieldElement(1, p), FieldElement(0, p)};

  CHECK_THROWS_AS(HashParams({perm}, 1, w0), std::invalid_argument);  // 1 != 2^1
  CHECK_THROWS_AS(HashParams({perm, perm}, 0, w0), std::invalid_argument);

  TriangularSystem not_perm = non_perm_system_p3();
  ShapeMatrix shape2 = not_perm.shape;
  CHECK_THROWS_AS(HashParams({not_perm, not_perm}, 1, w0), std::invalid_argument);
}

TEST_CASE("hex helpers") {
  CHECK(bits_from_hex("a3") == "10100011");
  CHECK(bits_from_hex("F") == "1111");
  CHECK(hex_from_bits("10100011") == "a3");
  CHECK(hex_from_bits("100") == "4");  // left-padded to a nibble
  CHECK_THROWS_AS(bits_from_hex("0g"), std::invalid_argument);
  std::mt19937_64 rng(127);
  for (int it = 0; it < 20; ++it) {
    std::string bits = random_bits(rng, 4 * (1 + rng() % 8));
    CHECK(bits_from_hex(hex_from_bits(bits)) == bits);
  }
}
