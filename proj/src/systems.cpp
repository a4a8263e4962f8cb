#include "polywalk/systems.hpp"

#include <algorithm>
#include <stdexcept>

#include "polywalk/common.hpp"

namespace polywalk {

ShapeMatrix::ShapeMatrix(std::uint32_t m, std::vector<std::uint32_t> row_major)
    : m_(m), s_(std::move(row_major)) {
  if (m_ < 1) throw std::invalid_argument("ShapeMatrix: m must be >= 1");
  const std::size_t d = dim();
  if (s_.size() != d * d)
    throw std::invalid_argument("ShapeMatrix: expected a (m+1)x(m+1) matrix, row-major");
  for (std::uint32_t i = 0; i < d; ++i) {
    if (at(i, i) != 1) throw std::invalid_argument("ShapeMatrix: diagonal entries must be 1");
    for (std::uint32_t j = 0; j < i; ++j)
      if (at(i, j) != 0)
        throw std::invalid_argument("ShapeMatrix: entries below the diagonal must be 0");
  }
}

TriangularSystem::TriangularSystem(ShapeMatrix shape_, std::vector<MultiPoly> G_,
                                   std::vector<MultiPoly> H_, FieldElement gm_,
                                   FieldElement hm_)
    : shape(std::move(shape_)),
      G(std::move(G_)),
      H(std::move(H_)),
      gm(gm_),
      hm(hm_),
      hm_prime_(Prime(gm_.modulus())) {
  const std::uint32_t mm = shape.m();
  if (G.size() != mm || H.size() != mm)
    throw std::invalid_argument("TriangularSystem: need exactly m polynomials G_i and H_i");
  if (gm.modulus() != hm.modulus())
    throw std::invalid_argument("TriangularSystem: g_m and h_m modulus mismatch");
  for (const std::vector<MultiPoly>* v : {&G, &H})
    for (const MultiPoly& f : *v) {
      if (f.arity() != dim())
        throw std::invalid_argument("TriangularSystem: polynomial arity must be m+1");
      if (f.prime().value() != gm.modulus())
        throw std::invalid_argument("TriangularSystem: polynomial modulus mismatch");
    }
}

std::vector<MultiPoly> TriangularSystem::full_polys() const {
  const Prime& p = prime();
  std::vector<MultiPoly> fs;
  fs.reserve(dim());
  for (std::uint32_t i = 0; i < m(); ++i) {
    MultiPoly f = MultiPoly::variable(p, dim(), i) * G[i];
    f += H[i];
    fs.push_back(std::move(f));
  }
  MultiPoly last(p, dim());
  last.add_term(
      [&] {
        Monomial mono{std::vector<std::uint32_t>(dim(), 0)};
        mono.exps[m()] = 1;
        return mono;
      }(),
      static_cast<std::int64_t>(gm.value()));
  last.add_term(Monomial{std::vector<std::uint32_t>(dim(), 0)},
                static_cast<std::int64_t>(hm.value()));
  fs.push_back(std::move(last));
  return fs;
}

void TriangularSystem::apply(std::span<const std::uint64_t> in,
                             std::span<std::uint64_t> out) const {
  const std::uint64_t p = prime().value();
  for (std::uint32_t i = 0; i < m(); ++i) {
    const std::uint64_t gi = G[i].evaluate_residues(in);
    const std::uint64_t hi = H[i].evaluate_residues(in);
    out[i] = (mul_mod_u64(in[i], gi, p) + hi) % p;
  }
  out[m()] = (mul_mod_u64(gm.value(), in[m()], p) + hm.value()) % p;
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::string s;
  for (const Violation& v : violations) {
    if (!s.empty()) s += "\n";
    s += v.message;
  }
  return s;
}

namespace {

void check_support(const MultiPoly& f, std::uint32_t level, const char* name,
                   std::vector<Violation>& out) {
  for (std::uint32_t j = 0; j <= level; ++j) {
    if (f.depends_on(j)) {
      out.push_back({Violation::Kind::Support, level, j,
                     std::string(name) + std::to_string(level) + " depends on X" +
                         std::to_string(j) + "; only X" + std::to_string(level + 1) +
                         "..X_m are allowed"});
    }
  }
}

}  // namespace

ValidationReport validate(const TriangularSystem& sys) {
  ValidationReport report;
  const std::uint32_t m = sys.m();
  for (std::uint32_t i = 0; i < m; ++i) {
    check_support(sys.G[i], i, "G", report.violations);
    check_support(sys.H[i], i, "H", report.violations);

    // leading monomial X_{i+1}^{s_{i,i+1}} ... X_m^{s_{i,m}}
    Monomial lead{std::vector<std::uint32_t>(sys.dim(), 0)};
    for (std::uint32_t j = i + 1; j <= m; ++j) lead.exps[j] = sys.shape.at(i, j);
    if (sys.G[i].coeff_at(lead) == 0) {
      report.violations.push_back(
          {Violation::Kind::MissingLeadingMonomial, i, std::nullopt,
           "G" + std::to_string(i) + " lacks the leading monomial prescribed by S"});
    } else {
      MultiPoly tail = sys.G[i];
      tail.add_term(lead, -static_cast<std::int64_t>(sys.G[i].coeff_at(lead)));
      for (std::uint32_t j = i + 1; j <= m; ++j) {
        const auto d = tail.degree_in(j);
        if (d.has_value() && *d >= sys.shape.at(i, j)) {
          report.violations.push_back(
              {Violation::Kind::LeadingUniqueness, i, j,
               "G" + std::to_string(i) + ": a non-leading term has deg_X" +
                   std::to_string(j) + " = " + std::to_string(*d) + " >= s(" +
                   std::to_string(i) + "," + std::to_string(j) + ") = " +
                   std::to_string(sys.shape.at(i, j))});
        }
      }
    }

    for (std::uint32_t j = i + 1; j <= m; ++j) {
      const auto d = sys.H[i].degree_in(j);
      if (d.has_value() && *d > sys.shape.at(i, j)) {
        report.violations.push_back(
            {Violation::Kind::HDegree, i, j,
             "H" + std::to_string(i) + ": deg_X" + std::to_string(j) + " = " +
                 std::to_string(*d) + " > s(" + std::to_string(i) + "," +
                 std::to_string(j) + ") = " + std::to_string(sys.shape.at(i, j))});
      }
    }
  }
  if (sys.gm.is_zero())
    report.violations.push_back(
        {Violation::Kind::GmZero, m, std::nullopt, "g_m must be nonzero"});
  return report;
}

namespace {

// Enumerates assignments of X_{i+1..m} until G_i vanishes; returns the tail
// (coordinates i+1..m) of a zero, if any.
std::optional<std::vector<std::uint64_t>> find_vanishing_tail(
    const TriangularSystem& sys, std::uint32_t i) {
  const std::uint64_t p = sys.prime().value();
  const std::uint32_t nvars = sys.m() - i;
  std::vector<std::uint64_t> point(sys.dim(), 0);
  std::vector<std::uint64_t> tail(nvars, 0);
  while (true) {
    for (std::uint32_t v = 0; v < nvars; ++v) point[i + 1 + v] = tail[v];
    if (sys.G[i].evaluate_residues(point) == 0) return tail;
    std::uint32_t v = 0;
    for (; v < nvars; ++v) {
      if (++tail[v] < p) break;
      tail[v] = 0;
    }
    if (v == nvars) return std::nullopt;
  }
}

// Builds two distinct inputs with equal images, given a level whose G
// vanishes at `tail` (coordinates i+1..m).  Lower levels are solved one by
// one; when a lower G vanishes along the way the construction restarts
// there, so the level index strictly decreases and the loop terminates.
std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>> build_collision(
    const TriangularSystem& sys, std::uint32_t level, std::vector<std::uint64_t> tail) {
  const Prime& pr = sys.prime();
restart:
  std::vector<std::uint64_t> a(sys.dim(), 0);
  std::vector<std::uint64_t> b(sys.dim(), 0);
  for (std::uint32_t v = 0; v < tail.size(); ++v)
    a[level + 1 + v] = b[level + 1 + v] = tail[v];
  a[level] = 0;
  b[level] = 1;  // G_level vanishes on the shared tail, so images agree here
  for (std::uint32_t j = level; j-- > 0;) {
    const std::uint64_t ga = sys.G[j].evaluate_residues(a);
    const std::uint64_t gb = sys.G[j].evaluate_residues(b);
    if (ga == 0 || gb == 0) {
      const std::vector<std::uint64_t>& src = (ga == 0) ? a : b;
      tail.assign(src.begin() + j + 1, src.end());
      level = j;
      goto restart;
    }
    const std::uint64_t ha = sys.H[j].evaluate_residues(a);
    const std::uint64_t hb = sys.H[j].evaluate_residues(b);
    // choose a_j = 0 and solve b_j so the j-th image coordinates match
    a[j] = 0;
    const FieldElement target = FieldElement(ha, pr) - FieldElement(hb, pr);
    b[j] = (target * inv(FieldElement(gb, pr))).value();
  }
  return {a, b};
}

}  // namespace

PermutationCheck is_permutation(const TriangularSystem& sys, std::uint64_t guard) {
  const std::uint64_t p = sys.prime().value();
  // total evaluations: sum over levels of p^{m-i}
  unsigned __int128 work = 0;
  for (std::uint32_t i = 0; i < sys.m(); ++i) {
    unsigned __int128 w = 1;
    for (std::uint32_t v = 0; v < sys.m() - i; ++v) w *= p;
    work += w;
  }
  if (work > guard)
    throw BudgetExceeded("is_permutation: p^m exceeds the nonvanishing-check guard");
  if (sys.gm.is_zero()) {
    // the last level maps x_m = 0 and x_m = 1 together; back-solve the rest
    return {false, build_collision(sys, sys.m(), {})};
  }
  for (std::uint32_t i = 0; i < sys.m(); ++i) {
    if (auto tail = find_vanishing_tail(sys, i)) {
      return {false, build_collision(sys, i, std::move(*tail))};
    }
  }
  return {true, std::nullopt};
}

PermutationCheck exhaustive_bijection_check(const TriangularSystem& sys,
                                            std::uint64_t guard) {
  const std::uint64_t p = sys.prime().value();
  unsigned __int128 total = 1;
  for (std::uint32_t i = 0; i < sys.dim(); ++i) total *= p;
  if (total > guard)
    throw BudgetExceeded("exhaustive_bijection_check: p^{m+1} exceeds guard");
  const std::size_t n = static_cast<std::size_t>(total);
  std::vector<std::uint64_t> seen(n, UINT64_MAX);
  std::vector<std::uint64_t> w(sys.dim(), 0);
  std::vector<std::uint64_t> img(sys.dim());
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    std::uint64_t t = idx;
    for (std::uint32_t j = 0; j < sys.dim(); ++j) {
      w[j] = t % p;
      t /= p;
    }
    sys.apply(w, img);
    std::uint64_t key = 0;
    for (std::uint32_t j = sys.dim(); j-- > 0;) key = key * p + img[j];
    if (seen[key] != UINT64_MAX) {
      std::vector<std::uint64_t> first(sys.dim());
      std::uint64_t f = seen[key];
      for (std::uint32_t j = 0; j < sys.dim(); ++j) {
        first[j] = f % p;
        f /= p;
      }
      return {false, std::make_pair(first, w)};
    }
    seen[key] = idx;
  }
  return {true, std::nullopt};
}

std::size_t Schedule::member_for_step(std::uint64_t k, std::size_t member_count) const {
  if (k < 1) throw std::invalid_argument("Schedule: steps are numbered from 1");
  switch (kind_) {
    case Kind::Constant:
      return 0;
    case Kind::Cyclic:
      return static_cast<std::size_t>((k - 1) % member_count);
    case Kind::Explicit:
      if (k > steps_.size())
        throw std::out_of_range("Schedule: explicit schedule has no step " + std::to_string(k));
      return steps_[static_cast<std::size_t>(k - 1)];
  }
  throw std::logic_error("Schedule: bad kind");
}

std::optional<std::uint64_t> Schedule::cycle_length(std::size_t member_count) const {
  switch (kind_) {
    case Kind::Constant:
      return 1;
    case Kind::Cyclic:
      return member_count;
    case Kind::Explicit:
      return std::nullopt;
  }
  return std::nullopt;
}

SystemFamily::SystemFamily(std::vector<TriangularSystem> members, Schedule schedule)
    : members_(std::move(members)), schedule_(std::move(schedule)) {
  if (members_.empty()) throw std::invalid_argument("SystemFamily: needs at least one member");
  const TriangularSystem& head = members_.front();
  for (const TriangularSystem& s : members_) {
    if (!(s.shape == head.shape))
      throw std::invalid_argument("SystemFamily: members must share the shape matrix");
    if (s.prime().value() != head.prime().value())
      throw std::invalid_argument("SystemFamily: members must share the modulus");
    ValidationReport r = validate(s);
    if (!r.ok())
      throw std::invalid_argument("SystemFamily: member fails validation:\n" + r.to_string());
  }
  if (schedule_.kind() == Schedule::Kind::Explicit) {
    for (std::size_t idx : schedule_.steps())
      if (idx >= members_.size())
        throw std::invalid_argument("SystemFamily: schedule index out of range");
  }
}

bool SystemFamily::shared_gm() const {
  for (const TriangularSystem& s : members_)
    if (!(s.gm == members_.front().gm)) return false;
  return true;
}

namespace {

IterateSet identity_iterates(const SystemFamily& fam) {
  const Prime& p = fam.prime();
  const std::uint32_t d = fam.dim();
  IterateSet it;
  it.k = 0;
  for (std::uint32_t i = 0; i < d; ++i) {
    it.polys.push_back(MultiPoly::variable(p, d, i));
    it.g_tilde.push_back(MultiPoly::constant(p, d, 1));
    it.h_tilde.push_back(MultiPoly(p, d));
  }
  return it;
}

// Splits F_i = X_i*Gt + Ht; requires F_i linear in X_i and free of X_{<i}.
void split_iterate(const MultiPoly& f, std::uint32_t i, MultiPoly& gt, MultiPoly& ht) {
  const Prime& p = f.prime();
  gt = MultiPoly(p, f.arity());
  ht = MultiPoly(p, f.arity());
  for (const auto& [mono, coeff] : f.terms()) {
    for (std::uint32_t j = 0; j < i; ++j)
      if (mono.exps[j] != 0)
        throw std::logic_error("iterate split: F_i depends on an earlier variable");
    if (mono.exps[i] > 1)
      throw std::logic_error("iterate split: F_i is not linear in X_i");
    Monomial reduced = mono;
    if (mono.exps[i] == 1) {
      reduced.exps[i] = 0;
      gt.add_term(std::move(reduced), static_cast<std::int64_t>(coeff));
    } else {
      ht.add_term(std::move(reduced), static_cast<std::int64_t>(coeff));
    }
  }
}

}  // namespace

SymbolicIterator::SymbolicIterator(const SystemFamily& family, std::size_t term_cap)
    : family_(&family), term_cap_(term_cap), current_(identity_iterates(family)) {}

const IterateSet& SymbolicIterator::advance() {
  const std::uint64_t k = current_.k + 1;
  const TriangularSystem& member = family_->member_for_step(k);
  std::vector<MultiPoly> fs = member.full_polys();
  IterateSet next;
  next.k = k;
  next.polys.reserve(fs.size());
  try {
    for (const MultiPoly& f : fs) next.polys.push_back(f.compose(current_.polys, term_cap_));
  } catch (const TermCapExceeded&) {
    throw TermCapExceeded("iterate_symbolic: term cap exceeded; last complete iterate k=" +
                          std::to_string(current_.k));
  }
  next.g_tilde.resize(next.polys.size(), MultiPoly(family_->prime(), family_->dim()));
  next.h_tilde.resize(next.polys.size(), MultiPoly(family_->prime(), family_->dim()));
  for (std::uint32_t i = 0; i < next.polys.size(); ++i)
    split_iterate(next.polys[i], i, next.g_tilde[i], next.h_tilde[i]);
  current_ = std::move(next);
  return current_;
}

IterateSet iterate_symbolic(const SystemFamily& family, std::uint64_t k,
                            std::size_t term_cap) {
  SymbolicIterator it(family, term_cap);
  for (std::uint64_t step = 0; step < k; ++step) it.advance();
  return it.current();
}

std::vector<std::uint64_t> predicted_degrees(const ShapeMatrix& shape, std::uint64_t k) {
  const std::uint32_t d = shape.dim();
  std::vector<std::uint64_t> v(d, 1);
  std::vector<std::uint64_t> next(d);
  for (std::uint64_t step = 0; step < k; ++step) {
    for (std::uint32_t i = 0; i < d; ++i) {
      std::uint64_t acc = 0;
      for (std::uint32_t j = i; j < d; ++j) {
        std::uint64_t prod;
        if (__builtin_mul_overflow(static_cast<std::uint64_t>(shape.at(i, j)), v[j], &prod) ||
            __builtin_add_overflow(acc, prod, &acc))
          throw std::overflow_error("predicted_degrees: overflow; k too large");
      }
      next[i] = acc;
    }
    v = next;
  }
  return v;
}

namespace {

std::uint64_t factorial_u64(std::uint32_t n) {
  std::uint64_t f = 1;
  for (std::uint32_t i = 2; i <= n; ++i) f *= i;
  return f;
}

// Degree of the polynomial interpolating `seq` at k = 1,2,..., found by
// differencing; nullopt when the points cannot certify it (never vanished).
std::optional<int> finite_difference_degree(std::vector<long long> seq) {
  int level = 0;
  while (!seq.empty()) {
    if (std::all_of(seq.begin(), seq.end(), [](long long x) { return x == 0; }))
      return level - 1;
    std::vector<long long> next;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) next.push_back(seq[i + 1] - seq[i]);
    seq = std::move(next);
    ++level;
  }
  return std::nullopt;
}

}  // namespace

DegreeLawReport check_degree_law(const SystemFamily& family, std::uint32_t k_max,
                                 std::size_t term_cap) {
  DegreeLawReport report;
  const std::uint32_t m = family.m();
  SymbolicIterator it(family, term_cap);
  std::vector<long long> lead_residual;  // m!*deg Gt_{k,0} - P*k^m

  std::uint64_t superdiag_product = 1;
  for (std::uint32_t i = 0; i < m; ++i) superdiag_product *= family.shape().at(i, i + 1);
  report.fit_applicable = superdiag_product != 0;

  for (std::uint32_t k = 1; k <= k_max; ++k) {
    const IterateSet& cur = it.advance();
    const std::vector<std::uint64_t> predicted = predicted_degrees(family.shape(), k);
    for (std::uint32_t i = 0; i <= m; ++i) {
      const auto deg = cur.g_tilde[i].total_degree();
      const std::uint64_t observed = 1 + (deg ? *deg : 0);
      DegreeLawRow row{k, i, observed, predicted[i], observed == predicted[i]};
      if (!row.equal && !report.first_mismatch) report.first_mismatch = row;
      report.all_equal = report.all_equal && row.equal;
      report.rows.push_back(row);
    }
    if (report.fit_applicable) {
      const auto deg0 = cur.g_tilde[0].total_degree();
      const long long d0 = static_cast<long long>(deg0 ? *deg0 : 0);
      long long km = 1;
      for (std::uint32_t t = 0; t < m; ++t) km *= static_cast<long long>(k);
      lead_residual.push_back(static_cast<long long>(factorial_u64(m)) * d0 -
                              static_cast<long long>(superdiag_product) * km);
    }
  }

  if (report.fit_applicable) {
    report.residual_degree = finite_difference_degree(lead_residual);
    report.residual_certified = report.residual_degree.has_value();
  }
  return report;
}

}  // namespace polywalk
