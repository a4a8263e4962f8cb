// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with its wall-clock time.  Run via ctest or directly.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <set>

#include "polywalk/field.hpp"
#include "polywalk/lincomp.hpp"
#include "polywalk/orbit.hpp"
#include "polywalk/spectral.hpp"
#include "polywalk/systems.hpp"
#include "polywalk/walk_hash.hpp"
#include "test_util.hpp"

using namespace polywalk;
using namespace testutil;

namespace {

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

bool report(int number, const char* name, bool ok, double seconds) {
  std::printf("criterion %d (%s): %s  [%.2f s]\n", number, name, ok ? "PASS" : "FAIL", seconds);
  std::fflush(stdout);
  return ok;
}

std::vector<FieldElement> fe(const Prime& p, const std::vector<std::uint64_t>& vs) {
  std::vector<FieldElement> out;
  for (std::uint64_t v : vs) out.emplace_back(v, p);
  return out;
}

}  // namespace

TEST_CASE("criterion 1: degree law") {
  Stopwatch timer;
  bool ok = true;
  std::mt19937_64 rng(20101);
  for (int fam_idx = 0; fam_idx < 10; ++fam_idx) {
    const Prime p(fam_idx % 2 == 0 ? 5 : 7);
    const ShapeMatrix shape = random_shape(rng, 2, 1, 2);
    std::vector<TriangularSystem> members;
    members.push_back(random_system(rng, p, shape));
    Schedule schedule = Schedule::constant();
    if (fam_idx % 3 == 0) {
      members.push_back(random_system(rng, p, shape));
      schedule = Schedule::cyclic();
    }
    for (const TriangularSystem& sys : members) ok = ok && validate(sys).ok();
    const SystemFamily family(members, schedule);
    const DegreeLawReport r = check_degree_law(family, 6);
    ok = ok && r.all_equal;
    for (const DegreeLawRow& row : r.rows) {
      ok = ok && row.observed == row.predicted;
      if (row.i == 2) ok = ok && row.observed == 1;  // deg Gt_{k,m} = 0
    }
  }
  const double secs = timer.seconds();
  ok = ok && secs <= 60.0;
  CHECK(report(1, "degree law", ok, secs));
}

TEST_CASE("criterion 2: closed forms for the last coordinate") {
  Stopwatch timer;
  bool ok = true;
  const Prime p(101);
  for (std::uint64_t g : {1ull, 2ull, 51ull}) {
    const SystemFamily family = affine_tail_family(101, g, 7);
    const FieldElement u0(9, p);
    const Orbit orbit = generate(family, fe(p, {3, 9}), 10'000);
    for (std::uint64_t n = 0; n < orbit.length(); ++n) {
      const FieldElement expect =
          last_coordinate_closed_form(FieldElement(g, p), FieldElement(7, p), u0, n);
      ok = ok && orbit.states[n][1] == expect.value();
    }
  }
  const double secs = timer.seconds();
  ok = ok && secs <= 5.0;
  CHECK(report(2, "closed forms", ok, secs));
}

TEST_CASE("criterion 3: complete character sums") {
  Stopwatch timer;
  bool ok = true;
  for (std::uint64_t pv : {3ull, 5ull, 7ull, 101ull}) {
    for (std::uint64_t c = 0; c < 2 * pv; ++c) {
      std::complex<double> acc = 0.0;
      for (std::uint64_t u = 1; u <= pv; ++u)
        acc += char_ep(static_cast<std::int64_t>(c * u), pv).to_complex();
      const double expected = (c % pv == 0) ? static_cast<double>(pv) : 0.0;
      ok = ok && std::abs(std::abs(acc) - expected) <= 1e-9;
    }
  }
  CHECK(report(3, "character identity", ok, timer.seconds()));
}

TEST_CASE("criterion 4: permutation orbit structure") {
  Stopwatch timer;
  bool ok = true;
  std::mt19937_64 rng(20104);
  // deliberate g_m = 1 cases plus random permutation families
  std::vector<SystemFamily> families;
  families.push_back(perm_family_p3());            // g = 1, h = 1
  families.push_back(perm_family_p5(1, 2));        // g = 1, h = 2
  families.push_back(perm_family_p5(2, 1));        // t = 4
  families.push_back(perm_family_p5(4, 0));        // t = 2, h = 0
  for (std::uint64_t pv : {3ull, 5ull}) {
    const Prime p(pv);
    for (std::uint32_t m : {1u, 2u}) {
      families.emplace_back(
          std::vector<TriangularSystem>{random_permutation_system(rng, p, m)},
          Schedule::constant());
    }
  }

  for (const SystemFamily& family : families) {
    const std::uint64_t pv = family.prime().value();
    const Prime p(pv);
    const std::uint32_t m = family.m();
    const TriangularSystem& sys = family.members()[0];
    const std::uint64_t t =
        sys.gm == FieldElement(1, p) ? pv : mult_order(sys.gm);
    std::uint64_t pm = 1;
    for (std::uint32_t j = 0; j < m; ++j) pm *= pv;
    const std::uint64_t total = pm * pv;

    std::set<std::vector<std::uint64_t>> visited;
    std::uint64_t cycle_sum = 0;
    for (std::uint64_t code = 0; code < total; ++code) {
      std::vector<std::uint64_t> w(m + 1);
      std::uint64_t tcode = code;
      for (std::uint32_t j = 0; j <= m; ++j) {
        w[j] = tcode % pv;
        tcode /= pv;
      }
      const PeriodInfo info = find_period(family, fe(p, w));
      ok = ok && info.tail == 0;
      ok = ok && info.tau <= pm * t;

      const Orbit orbit = generate(family, fe(p, w), info.tau);
      std::set<std::uint64_t> distinct;
      for (const auto& s : orbit.states) distinct.insert(s[m]);
      std::uint64_t expected;
      if (sys.gm == FieldElement(1, p)) {
        expected = sys.hm.is_zero() ? 1 : pv;
      } else {
        const FieldElement shift =
            FieldElement(w[m], p) + sys.hm * inv(sys.gm - FieldElement(1, p));
        expected = shift.is_zero() ? 1 : t;
      }
      ok = ok && distinct.size() == expected;

      if (!visited.count(orbit.states.front())) {
        cycle_sum += info.tau;
        for (const auto& s : orbit.states) visited.insert(s);
      }
    }
    ok = ok && cycle_sum == total;
  }
  CHECK(report(4, "permutation structure", ok, timer.seconds()));
}

TEST_CASE("criterion 5: vanishing structure of the averaged sum") {
  Stopwatch timer;
  bool ok = true;
  const SystemFamily family = perm_family_p5(2, 1);  // g = 2, t = 4
  const Prime p(5);
  const std::uint64_t N = 12;
  const std::uint64_t t = mult_order(FieldElement(2, p));

  // last coordinate of every seed after k steps, by direct simulation
  std::vector<std::vector<std::uint64_t>> last(N, std::vector<std::uint64_t>(25));
  for (std::uint64_t code = 0; code < 25; ++code) {
    std::vector<std::uint64_t> w = {code % 5, code / 5};
    for (std::uint64_t k = 0; k < N; ++k) {
      last[k][code] = w[1];
      w = oracle_apply(family.members()[0], w);
    }
  }

  std::complex<double> reconstruction = 0.0;
  for (std::uint64_t k = 0; k < N; ++k) {
    for (std::uint64_t n = 0; n < N; ++n) {
      std::complex<double> cross = 0.0;
      for (std::uint64_t code = 0; code < 25; ++code) {
        const std::uint64_t diff = (last[k][code] + 5 - last[n][code]) % 5;
        cross += unit(static_cast<double>(diff) / 5.0);
      }
      if (k % t == n % t) {
        ok = ok && std::abs(std::abs(cross) - 25.0) <= 1e-6;
        reconstruction += cross;
      } else {
        ok = ok && std::abs(cross) <= 1e-6;
      }
    }
  }

  const std::vector<std::int64_t> b = {0, 1};
  const double v = sum_V(family, b, 0, 1, N);
  ok = ok && std::abs(v - reconstruction.real()) <= 1e-6 * std::abs(v);
  ok = ok && std::abs(reconstruction.imag()) <= 1e-6;
  CHECK(report(5, "averaged-sum vanishing structure", ok, timer.seconds()));
}

TEST_CASE("criterion 6: discrepancy machinery") {
  Stopwatch timer;
  bool ok = true;
  std::mt19937_64 rng(20106);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int it = 0; it < 20; ++it) {
    const std::size_t s = 1 + it % 2;
    const std::size_t n = 2 + rng() % 63;
    std::vector<std::vector<double>> pts(n, std::vector<double>(s));
    for (auto& pt : pts)
      for (double& x : pt) x = std::min(dist(rng), 0.999999999);
    const PointSet ps(s, std::move(pts));
    const double exact = discrepancy_exact(ps);
    ok = ok && exact == oracle_discrepancy(ps);
    ok = ok && exact <= etk_bound(ps, 32, default_etk_constant(s));
  }
  CHECK(report(6, "discrepancy vs oracle and bound", ok, timer.seconds()));
}

TEST_CASE("criterion 7: walk hash") {
  Stopwatch timer;
  bool ok = true;

  // worked digest over F_3
  {
    const Prime p(3);
    ShapeMatrix shape(1, {1, 2, 0, 1});
    MultiPoly g0 = MultiPoly::parse("X1^2 + 1", p, 2);
    TriangularSystem s0(shape, {g0}, {MultiPoly(p, 2)}, FieldElement(1, p), FieldElement(1, p));
    TriangularSystem s1(shape, {g0}, {MultiPoly::constant(p, 2, 1)}, FieldElement(1, p),
                        FieldElement(2, p));
    const HashParams params({s0, s1}, 1, fe(p, {1, 0}));
    const Digest d = walk_hash(params, "10");
    ok = ok && d.bits == "0100";
    ok = ok && d.coords[0].value() == 1 && d.coords[1].value() == 0;
  }

  // the cross-length collision at r = 2
  {
    const Prime p(5);
    ShapeMatrix shape(1, {1, 2, 0, 1});
    MultiPoly g0 = MultiPoly::parse("X1^2 + X1 + 1", p, 2);
    std::vector<TriangularSystem> members;
    for (std::int64_t h0 = 0; h0 < 4; ++h0)
      members.emplace_back(shape, std::vector<MultiPoly>{g0},
                           std::vector<MultiPoly>{MultiPoly::constant(p, 2, h0)},
                           FieldElement(2, p), FieldElement(static_cast<std::uint64_t>(h0) + 1, p));
    const HashParams params(members, 2, fe(p, {1, 3}));
    ok = ok && walk_hash(params, "1").bits == walk_hash(params, "01").bits;
  }

  // hash == orbit generator driven by the block schedule, 1000 random inputs
  {
    std::mt19937_64 rng(20107);
    int runs = 0;
    while (runs < 1000) {
      const std::uint64_t pv = std::vector<std::uint64_t>{3, 5, 7}[rng() % 3];
      const Prime p(pv);
      const std::uint32_t m = 1 + static_cast<std::uint32_t>(rng() % 2);
      const std::uint32_t r = 1 + static_cast<std::uint32_t>(rng() % 2);
      const std::vector<TriangularSystem> members =
          random_permutation_members(rng, p, m, std::size_t(1) << r);
      std::vector<FieldElement> w0;
      for (std::uint32_t j = 0; j <= m; ++j) w0.emplace_back(rng() % pv, p);
      const HashParams params(members, r, w0);
      for (int rep = 0; rep < 50; ++rep, ++runs) {
        std::string bits;
        const std::size_t len = 1 + rng() % 64;
        for (std::size_t i = 0; i < len; ++i) bits += (rng() & 1) ? '1' : '0';
        const Digest d = walk_hash(params, bits);
        const auto blocks = split_blocks(pad_input(bits, r), r);
        SystemFamily fam(members,
                         Schedule::explicit_list({blocks.begin(), blocks.end()}));
        const Orbit orbit = generate(fam, w0, blocks.size() + 1);
        std::vector<std::uint64_t> got;
        for (const FieldElement& x : d.coords) got.push_back(x.value());
        ok = ok && got == orbit.states.back();
      }
    }
  }

  // fixed message: the seed-to-digest map permutes F_p^{m+1}
  {
    std::mt19937_64 rng(20207);
    for (std::uint64_t pv : {3ull, 5ull}) {
      const Prime p(pv);
      for (std::uint32_t m : {1u, 2u}) {
        const std::vector<TriangularSystem> members = random_permutation_members(rng, p, m, 2);
        std::string bits;
        for (int i = 0; i < 11; ++i) bits += (rng() & 1) ? '1' : '0';
        std::uint64_t total = 1;
        for (std::uint32_t j = 0; j <= m; ++j) total *= pv;
        std::set<std::string> digests;
        for (std::uint64_t code = 0; code < total; ++code) {
          std::vector<std::uint64_t> w(m + 1);
          std::uint64_t t = code;
          for (std::uint32_t j = 0; j <= m; ++j) {
            w[j] = t % pv;
            t /= pv;
          }
          const HashParams params(members, 1, fe(p, w));
          digests.insert(walk_hash(params, bits).bits);
        }
        ok = ok && digests.size() == total;
      }
    }
  }
  CHECK(report(7, "walk hash", ok, timer.seconds()));
}

TEST_CASE("criterion 8: linear complexity") {
  Stopwatch timer;
  bool ok = true;

  // the arithmetic progression example
  {
    const Prime p5(5);
    std::vector<std::vector<std::uint64_t>> rows;
    for (std::uint64_t n = 0; n < 10; ++n) rows.push_back({n % 5});
    const LinearComplexityResult r = linear_complexity(p5, rows);
    ok = ok && r.L == 2;
    ok = ok && verify_relation(p5, rows, r.witness);
  }

  // exhaustive-oracle agreement across small orbits (oracle capped at L <= 3)
  {
    std::mt19937_64 rng(20108);
    for (std::uint64_t pv : {2ull, 3ull}) {
      const Prime p(pv);
      for (std::uint32_t m : {1u, 2u}) {
        for (int it = 0; it < 6; ++it) {
          const ShapeMatrix shape = random_shape(rng, m, 1, 2);
          SystemFamily fam({random_system(rng, p, shape)}, Schedule::constant());
          std::vector<std::uint64_t> seed(m + 1);
          for (auto& x : seed) x = rng() % pv;
          for (std::size_t N : {4, 6, 8}) {
            const auto rows = generate(fam, fe(p, seed), N).truncated();
            const LinearComplexityResult r = linear_complexity(p, rows);
            ok = ok && verify_relation(p, rows, r.witness);
            if (r.L <= 3) {
              ok = ok && r.L == oracle_lincomp(rows, pv);
            } else {
              for (std::size_t L = 0; L <= 3; ++L)
                ok = ok && !oracle_lincomp_at(rows, pv, L).has_value();
            }
          }
        }
      }
    }
  }

  // monotone in N over 20 randomized orbits
  {
    std::mt19937_64 rng(20208);
    for (int it = 0; it < 20; ++it) {
      const std::uint64_t pv = it % 2 == 0 ? 3 : 5;
      const Prime p(pv);
      const std::uint32_t m = 1 + it % 2;
      const ShapeMatrix shape = random_shape(rng, m, 1, 2);
      SystemFamily fam({random_system(rng, p, shape)}, Schedule::constant());
      std::vector<std::uint64_t> seed(m + 1);
      for (auto& x : seed) x = rng() % pv;
      const auto rows = generate(fam, fe(p, seed), 10).truncated();
      std::uint64_t prev = 0;
      for (std::size_t N = 2; N <= rows.size(); ++N) {
        const std::vector<std::vector<std::uint64_t>> prefix(rows.begin(), rows.begin() + N);
        const std::uint64_t L = linear_complexity(p, prefix).L;
        ok = ok && L >= prev;
        prev = L;
      }
    }
  }
  CHECK(report(8, "linear complexity", ok, timer.seconds()));
}

TEST_CASE("criterion 9: sum sanity and ratio reporting") {
  Stopwatch timer;
  bool ok = true;
  const Prime p(101);
  std::mt19937_64 rng(20109);

  ShapeMatrix shape(1, {1, 2, 0, 1});
  MultiPoly g0 = MultiPoly::parse("X1^2 + X1 + 4", p, 2);
  TriangularSystem sys(shape, {g0}, {MultiPoly::parse("X1 + 2", p, 2)}, FieldElement(3, p),
                       FieldElement(5, p));
  REQUIRE(validate(sys).ok());
  const SystemFamily fam({sys}, Schedule::constant());
  const std::size_t N = 10'000;
  const Orbit orbit = generate(fam, fe(p, {1, 2}), N);
  const auto trunc = orbit.truncated();

  std::vector<std::vector<std::int64_t>> as;
  for (int it = 0; it < 8; ++it) {
    const std::int64_t a0 = static_cast<std::int64_t>(rng() % 201) - 100;
    as.push_back({a0});
    const SumResult s = sum_S(p, trunc, as.back(), N);
    const std::vector<std::int64_t> b = {a0, 0};
    const SumResult t = sum_T(p, orbit.states, b, N);
    ok = ok && std::abs(s.value) <= static_cast<double>(N) + 1e-6;
    ok = ok && std::abs(t.value) <= static_cast<double>(N) + 1e-6;
    ok = ok && std::abs(s.value - t.value) <= 1e-9;

    const std::vector<std::int64_t> b2 = {a0, 1 + static_cast<std::int64_t>(rng() % 100)};
    const SumResult t2 = sum_T(p, orbit.states, b2, N);
    ok = ok && std::abs(t2.value) <= static_cast<double>(N) + 1e-6;
  }

  const std::vector<std::size_t> lengths = {100, 1000, N};
  const RatioReport report_rows = ratio_report(p, trunc, as, lengths, 2);
  ok = ok && report_rows.rows.size() == as.size() * lengths.size();
  for (const RatioRow& row : report_rows.rows) {
    ok = ok && row.sum_modulus <= static_cast<double>(row.N) + 1e-6;
    ok = ok && std::isfinite(row.ratio);
  }
  const double secs = timer.seconds();
  ok = ok && secs <= 30.0;
  CHECK(report(9, "sum sanity and ratios", ok, secs));
}
