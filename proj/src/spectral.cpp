#include "polywalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <stdexcept>
#include <thread>

#include "polywalk/common.hpp"
#include "polywalk/kernels.hpp"

namespace polywalk {

namespace {

void kahan_add(double x, double& sum, double& carry) {
  const double y = x - carry;
  const double t = sum + y;
  carry = (t - sum) - y;
  sum = t;
}

std::vector<double> reduce_coeffs(std::span<const std::int64_t> coeff, const Prime& p) {
  std::vector<double> out(coeff.size());
  for (std::size_t j = 0; j < coeff.size(); ++j)
    out[j] = static_cast<double>(FieldElement::from_signed(coeff[j], p).value());
  return out;
}

SumResult character_sum(const Prime& p, const std::vector<std::vector<std::uint64_t>>& rows,
                        std::span<const std::int64_t> coeff, std::size_t N) {
  if (N > rows.size())
    throw std::invalid_argument("character sum: N exceeds the available orbit length");
  const std::size_t nc = coeff.size();
  for (std::size_t n = 0; n < N; ++n)
    if (rows[n].size() < nc)
      throw std::invalid_argument("character sum: orbit rows are too short");

  const auto& k = kernels::ops();
  double re = 0.0, im = 0.0;
  if (p.value() < kernels::kMaxPrime && p.value() <= CharacterTable::kMaxTabulated) {
    static thread_local std::map<std::uint64_t, CharacterTable> cache;
    auto it = cache.find(p.value());
    if (it == cache.end()) it = cache.emplace(p.value(), CharacterTable(p)).first;
    const CharacterTable* table = &it->second;
    std::vector<std::vector<double>> cols(nc, std::vector<double>(N));
    std::vector<const double*> colptrs(nc);
    for (std::size_t j = 0; j < nc; ++j) {
      for (std::size_t n = 0; n < N; ++n) cols[j][n] = static_cast<double>(rows[n][j]);
      colptrs[j] = cols[j].data();
    }
    const std::vector<double> cs = reduce_coeffs(coeff, p);
    std::vector<double> idx(N);
    k.dot_mod(colptrs.data(), cs.data(), nc, N, static_cast<double>(p.value()), idx.data());
    k.gather_sum(idx.data(), N, table->re_data(), table->im_data(), &re, &im);
  } else {
    // large modulus: exact 64-bit dot, then unit phases
    std::vector<std::uint64_t> cs(nc);
    for (std::size_t j = 0; j < nc; ++j)
      cs[j] = FieldElement::from_signed(coeff[j], p).value();
    std::vector<double> turns(N);
    const std::uint64_t pv = p.value();
    for (std::size_t n = 0; n < N; ++n) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < nc; ++j) {
        acc += mul_mod_u64(cs[j], rows[n][j], pv);
        if (acc >= pv) acc -= pv;
      }
      turns[n] = static_cast<double>(acc) / static_cast<double>(pv);
    }
    k.phase_sum(turns.data(), N, &re, &im);
  }
  return {std::complex<double>(re, im), N};
}

}  // namespace

SumResult sum_S(const Prime& p, const std::vector<std::vector<std::uint64_t>>& rows,
                std::span<const std::int64_t> a, std::size_t N) {
  return character_sum(p, rows, a, N);
}

SumResult sum_T(const Prime& p, const std::vector<std::vector<std::uint64_t>>& rows,
                std::span<const std::int64_t> b, std::size_t N) {
  return character_sum(p, rows, b, N);
}

namespace {

struct CompiledTerm {
  double coeff;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pows;  // (variable, exponent)
};
using CompiledPoly = std::vector<CompiledTerm>;

CompiledPoly compile_poly(const MultiPoly& f) {
  CompiledPoly out;
  for (const auto& [mono, c] : f.terms()) {
    CompiledTerm t;
    t.coeff = static_cast<double>(c);
    for (std::uint32_t j = 0; j < f.arity(); ++j)
      if (mono.exps[j] != 0) t.pows.emplace_back(j, mono.exps[j]);
    out.push_back(std::move(t));
  }
  return out;
}

void eval_compiled(const kernels::Ops& k, const CompiledPoly& prog,
                   const std::vector<std::vector<double>>& cols, double p, std::size_t n,
                   std::vector<double>& out, std::vector<double>& scratch) {
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
  for (const CompiledTerm& t : prog) {
    std::fill(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(n), t.coeff);
    for (const auto& [var, exp] : t.pows)
      for (std::uint32_t r = 0; r < exp; ++r)
        k.mul_mod(scratch.data(), cols[var].data(), p, n);
    k.add_mod(out.data(), scratch.data(), p, n);
  }
}

double avg_sum_core(const SystemFamily& family, std::span<const std::int64_t> coeff,
                    std::int64_t c, std::uint64_t M, std::uint64_t N,
                    const AvgSumOptions& opt) {
  if (N < 1) throw std::invalid_argument("averaged sum: N must be >= 1");
  if (M < 1) throw std::invalid_argument("averaged sum: M must be >= 1");
  const Prime& p = family.prime();
  const std::uint32_t d = family.dim();

  unsigned __int128 seeds = 1;
  for (std::uint32_t j = 0; j < d; ++j) seeds *= p.value();
  if (seeds * N > opt.budget)
    throw BudgetExceeded("averaged sum: p^(m+1)*N exceeds the budget cap");
  if (p.value() >= kernels::kMaxPrime || p.value() > CharacterTable::kMaxTabulated)
    throw BudgetExceeded("averaged sum: modulus too large for the seed sweep");
  const std::uint64_t P = static_cast<std::uint64_t>(seeds);

  const CharacterTable table(p);
  const double pd = static_cast<double>(p.value());
  const std::vector<double> cs = reduce_coeffs(coeff, p);

  // per member, per coordinate
  std::vector<std::vector<CompiledPoly>> programs;
  for (const TriangularSystem& member : family.members()) {
    std::vector<CompiledPoly> per_coord;
    for (const MultiPoly& f : member.full_polys()) per_coord.push_back(compile_poly(f));
    programs.push_back(std::move(per_coord));
  }

  std::int64_t cm = c % static_cast<std::int64_t>(M);
  if (cm < 0) cm += static_cast<std::int64_t>(M);

  constexpr std::uint64_t kBlock = 8192;
  const std::uint64_t nblocks = (P + kBlock - 1) / kBlock;
  std::vector<double> block_totals(static_cast<std::size_t>(nblocks), 0.0);

  const auto run_block = [&](std::uint64_t b) {
    const kernels::Ops& k = kernels::ops();
    const std::uint64_t first = b * kBlock;
    const std::size_t n_blk = static_cast<std::size_t>(std::min(kBlock, P - first));
    std::vector<std::vector<double>> cols(d, std::vector<double>(n_blk));
    std::vector<std::vector<double>> next(d, std::vector<double>(n_blk));
    for (std::size_t i = 0; i < n_blk; ++i) {
      std::uint64_t seed = first + i;
      for (std::uint32_t j = 0; j < d; ++j) {
        cols[j][i] = static_cast<double>(seed % p.value());
        seed /= p.value();
      }
    }
    std::vector<const double*> colptrs(cs.size());
    std::vector<double> idx(n_blk), scratch(n_blk);
    std::vector<double> acc_re(n_blk, 0.0), acc_im(n_blk, 0.0);
    for (std::uint64_t n = 0; n < N; ++n) {
      for (std::size_t j = 0; j < cs.size(); ++j) colptrs[j] = cols[j].data();
      k.dot_mod(colptrs.data(), cs.data(), cs.size(), n_blk, pd, idx.data());
      const std::uint64_t r = mul_mod_u64(static_cast<std::uint64_t>(cm), n % M, M);
      const UnitComplex w = char_ep(static_cast<std::int64_t>(r), M);
      k.gather_axpy(idx.data(), n_blk, table.re_data(), table.im_data(), w.re, w.im,
                    acc_re.data(), acc_im.data());
      if (n + 1 < N) {
        const std::size_t mi = family.schedule().member_for_step(n + 1, family.members().size());
        for (std::uint32_t j = 0; j < d; ++j)
          eval_compiled(k, programs[mi][j], cols, pd, n_blk, next[j], scratch);
        std::swap(cols, next);
      }
    }
    double total = 0.0, carry = 0.0;
    for (std::size_t i = 0; i < n_blk; ++i)
      kahan_add(acc_re[i] * acc_re[i] + acc_im[i] * acc_im[i], total, carry);
    block_totals[static_cast<std::size_t>(b)] = total;
  };

  const unsigned workers = std::max(1u, opt.workers);
  if (workers == 1 || nblocks == 1) {
    for (std::uint64_t b = 0; b < nblocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t b = w; b < nblocks; b += workers) run_block(b);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // block totals are combined in index order, so the result does not depend
  // on the worker count
  double total = 0.0, carry = 0.0;
  for (double b : block_totals) kahan_add(b, total, carry);
  return total;
}

}  // namespace

double sum_U(const SystemFamily& family, std::span<const std::int64_t> a, std::int64_t c,
             std::uint64_t M, std::uint64_t N, const AvgSumOptions& opt) {
  if (a.size() != family.m())
    throw std::invalid_argument("sum_U: coefficient vector must have m entries");
  return avg_sum_core(family, a, c, M, N, opt);
}

double sum_V(const SystemFamily& family, std::span<const std::int64_t> b, std::int64_t c,
             std::uint64_t M, std::uint64_t N, const AvgSumOptions& opt) {
  if (b.size() != family.dim())
    throw std::invalid_argument("sum_V: coefficient vector must have m+1 entries");
  return avg_sum_core(family, b, c, M, N, opt);
}

PointSet::PointSet(std::size_t s, std::vector<std::vector<double>> points)
    : s_(s), points_(std::move(points)) {
  if (s_ < 1) throw std::invalid_argument("PointSet: dimension must be >= 1");
  for (const auto& pt : points_) {
    if (pt.size() != s_) throw std::invalid_argument("PointSet: point has wrong dimension");
    for (double x : pt)
      if (!(x >= 0.0 && x < 1.0))
        throw std::invalid_argument("PointSet: coordinates must lie in [0,1)");
  }
}

PointSet PointSet::from_orbit(const Orbit& orbit, bool truncate) {
  const double p = static_cast<double>(orbit.p.value());
  std::vector<std::vector<double>> pts;
  pts.reserve(orbit.states.size());
  for (const auto& w : orbit.states) {
    const std::size_t s = truncate ? w.size() - 1 : w.size();
    std::vector<double> pt(s);
    for (std::size_t j = 0; j < s; ++j) pt[j] = static_cast<double>(w[j]) / p;
    pts.push_back(std::move(pt));
  }
  const std::size_t s = pts.empty() ? 1 : pts.front().size();
  return PointSet(s, std::move(pts));
}

BoxQuery::BoxQuery(std::vector<double> alpha_, std::vector<double> beta_)
    : alpha(std::move(alpha_)), beta(std::move(beta_)) {
  if (alpha.size() != beta.size() || alpha.empty())
    throw std::invalid_argument("BoxQuery: alpha and beta must have equal positive length");
  for (std::size_t j = 0; j < alpha.size(); ++j)
    if (!(alpha[j] >= 0.0 && alpha[j] < beta[j] && beta[j] <= 1.0))
      throw std::invalid_argument("BoxQuery: need 0 <= alpha_j < beta_j <= 1");
}

std::size_t count_in_box(const PointSet& ps, const BoxQuery& box) {
  if (box.alpha.size() != ps.dim())
    throw std::invalid_argument("count_in_box: dimension mismatch");
  std::size_t count = 0;
  for (const auto& pt : ps.points()) {
    bool in = true;
    for (std::size_t j = 0; j < ps.dim(); ++j)
      if (pt[j] < box.alpha[j] || pt[j] >= box.beta[j]) {
        in = false;
        break;
      }
    count += in ? 1 : 0;
  }
  return count;
}

namespace {

// Dense grid of cell counts with (c_j + 1)-sized prefix sums per dimension.
struct CountGrid {
  std::size_t s;
  std::vector<std::vector<double>> coords;  // sorted unique per dimension
  std::vector<std::size_t> stride;          // over the (c_j + 1) prefix grid
  std::vector<std::uint32_t> pref;
  bool dense = false;
  const PointSet* ps;

  CountGrid(const PointSet& set, std::size_t cell_cap) : s(set.dim()), ps(&set) {
    coords.resize(s);
    for (const auto& pt : set.points())
      for (std::size_t j = 0; j < s; ++j) coords[j].push_back(pt[j]);
    for (auto& c : coords) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    std::size_t cells = 1;
    bool fits = cell_cap > 0;
    for (const auto& c : coords) {
      if (!fits || cells > cell_cap / (c.size() + 1)) {
        fits = false;
        break;
      }
      cells *= c.size() + 1;
    }
    if (!fits) return;  // fall back to scanning
    dense = true;
    stride.resize(s);
    std::size_t acc = 1;
    for (std::size_t j = s; j-- > 0;) {
      stride[j] = acc;
      acc *= coords[j].size() + 1;
    }
    pref.assign(acc, 0);
    for (const auto& pt : set.points()) {
      std::size_t off = 0;
      for (std::size_t j = 0; j < s; ++j) {
        const std::size_t cell = static_cast<std::size_t>(
            std::lower_bound(coords[j].begin(), coords[j].end(), pt[j]) - coords[j].begin());
        off += (cell + 1) * stride[j];
      }
      pref[off] += 1;
    }
    // running sums along each dimension
    for (std::size_t j = 0; j < s; ++j) {
      const std::size_t dim_size = coords[j].size() + 1;
      for (std::size_t base = 0; base < pref.size(); ++base) {
        const std::size_t pos = (base / stride[j]) % dim_size;
        if (pos > 0) continue;
        std::uint32_t run = 0;
        for (std::size_t i = 0; i < dim_size; ++i) {
          run += pref[base + i * stride[j]];
          pref[base + i * stride[j]] = run;
        }
      }
    }
  }

  // number of points whose cell index lies in [lo_j, hi_j] per dimension
  std::size_t closed_count(const std::size_t* lo, const std::size_t* hi) const {
    for (std::size_t j = 0; j < s; ++j)
      if (lo[j] > hi[j]) return 0;
    if (dense) {
      long long total = 0;
      for (std::size_t corner = 0; corner < (std::size_t(1) << s); ++corner) {
        std::size_t off = 0;
        int sign = 1;
        for (std::size_t j = 0; j < s; ++j) {
          if (corner & (std::size_t(1) << j)) {
            off += lo[j] * stride[j];
            sign = -sign;
          } else {
            off += (hi[j] + 1) * stride[j];
          }
        }
        total += sign * static_cast<long long>(pref[off]);
      }
      return static_cast<std::size_t>(total);
    }
    std::size_t count = 0;
    for (const auto& pt : ps->points()) {
      bool in = true;
      for (std::size_t j = 0; j < s; ++j) {
        if (pt[j] < coords[j][lo[j]] || pt[j] > coords[j][hi[j]]) {
          in = false;
          break;
        }
      }
      count += in ? 1 : 0;
    }
    return count;
  }
};

}  // namespace

double discrepancy_exact(const PointSet& ps, std::size_t grid_cell_cap) {
  const std::size_t s = ps.dim();
  const std::size_t N = ps.size();
  if (s > 3 || N > 512)
    throw BudgetExceeded("discrepancy_exact: guard s <= 3 and N <= 512 exceeded");
  if (N == 0) throw std::invalid_argument("discrepancy_exact: empty point set");

  const CountGrid grid(ps, grid_cell_cap);
  const double dN = static_cast<double>(N);
  double best = 0.0;

  // excess side: boxes closing on point coordinates from both ends
  {
    std::vector<std::size_t> lo(s, 0), hi(s, 0);
    bool done = false;
    while (!done) {
      bool valid = true;
      double vol = 1.0;
      for (std::size_t j = 0; j < s; ++j) {
        if (lo[j] > hi[j]) {
          valid = false;
          break;
        }
        vol *= grid.coords[j][hi[j]] - grid.coords[j][lo[j]];
      }
      if (valid) {
        const double val =
            static_cast<double>(grid.closed_count(lo.data(), hi.data())) / dN - vol;
        best = std::max(best, val);
      }
      // odometer over (lo_j, hi_j) pairs
      std::size_t j = 0;
      for (; j < s; ++j) {
        const std::size_t c = grid.coords[j].size();
        if (++hi[j] < c) break;
        hi[j] = 0;
        if (++lo[j] < c) {
          hi[j] = lo[j];
          break;
        }
        lo[j] = 0;
      }
      done = j == s;
    }
  }

  // deficit side: boxes opening just past point coordinates (or the domain
  // boundary); the volume uses the limiting face positions
  {
    std::vector<std::size_t> tl(s, 0), th(s, 0);
    bool done = false;
    while (!done) {
      bool valid = true;
      double vol = 1.0;
      std::vector<std::size_t> lo(s), hi(s);
      for (std::size_t j = 0; j < s; ++j) {
        if (tl[j] > th[j]) {
          valid = false;
          break;
        }
        const std::size_t c = grid.coords[j].size();
        const double lo_val = (tl[j] == 0) ? 0.0 : grid.coords[j][tl[j] - 1];
        const double hi_val = (th[j] == c) ? 1.0 : grid.coords[j][th[j]];
        vol *= hi_val - lo_val;
        lo[j] = tl[j];
        hi[j] = th[j] == 0 ? 0 : th[j] - 1;  // strict interior cells
        if (th[j] == 0) {
          lo[j] = 1;  // empty range
          hi[j] = 0;
        }
      }
      if (valid) {
        const double val =
            vol - static_cast<double>(grid.closed_count(lo.data(), hi.data())) / dN;
        best = std::max(best, val);
      }
      std::size_t j = 0;
      for (; j < s; ++j) {
        const std::size_t c = grid.coords[j].size();
        if (++th[j] <= c) break;
        th[j] = 0;
        if (++tl[j] <= c) {
          th[j] = tl[j];
          break;
        }
        tl[j] = 0;
      }
      done = j == s;
    }
  }

  return best;
}

double default_etk_constant(std::size_t s) {
  double c = 1.0;
  for (std::size_t j = 0; j < s; ++j) c *= 1.5;
  return c;
}

double etk_bound(const PointSet& ps, unsigned H, double c_s) {
  if (H < 2) throw std::invalid_argument("etk_bound: H must be >= 2");
  const std::size_t s = ps.dim();
  const std::size_t N = ps.size();
  if (N == 0) throw std::invalid_argument("etk_bound: empty point set");

  const auto& k = kernels::ops();
  std::vector<double> turns(N);
  std::vector<long long> h(s, -static_cast<long long>(H));
  double total = 0.0, carry = 0.0;
  bool done = false;
  while (!done) {
    bool zero = std::all_of(h.begin(), h.end(), [](long long x) { return x == 0; });
    if (!zero) {
      double weight = 1.0;
      for (long long hj : h) weight /= static_cast<double>(std::llabs(hj) + 1);
      for (std::size_t n = 0; n < N; ++n) {
        double t = 0.0;
        for (std::size_t j = 0; j < s; ++j)
          t += static_cast<double>(h[j]) * ps.points()[n][j];
        turns[n] = t;
      }
      double re = 0.0, im = 0.0;
      k.phase_sum(turns.data(), N, &re, &im);
      kahan_add(weight * std::hypot(re, im), total, carry);
    }
    std::size_t j = 0;
    for (; j < s; ++j) {
      if (++h[j] <= static_cast<long long>(H)) break;
      h[j] = -static_cast<long long>(H);
    }
    done = j == s;
  }
  return c_s * (1.0 / static_cast<double>(H) + total / static_cast<double>(N));
}

RatioReport ratio_report(const Prime& p, const std::vector<std::vector<std::uint64_t>>& rows,
                         const std::vector<std::vector<std::int64_t>>& coefficient_vectors,
                         std::span<const std::size_t> lengths, unsigned nu) {
  if (nu < 1) throw std::invalid_argument("ratio_report: nu must be >= 1");
  RatioReport report;
  report.nu = nu;
  const std::size_t m = coefficient_vectors.empty() ? 0 : coefficient_vectors.front().size();
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(nu);
  report.alpha = (md * md + md * nd + md) / (2.0 * nd * (md + nd));
  report.beta = 1.0 / (2.0 * nd);
  for (const auto& a : coefficient_vectors) {
    for (std::size_t N : lengths) {
      const SumResult r = sum_S(p, rows, a, N);
      const double envelope = std::pow(static_cast<double>(N), 1.0 - report.beta) *
                              std::pow(static_cast<double>(p.value()), report.alpha);
      report.rows.push_back(
          {a, N, std::abs(r.value), envelope, std::abs(r.value) / envelope});
    }
  }
  return report;
}

}  // namespace polywalk
