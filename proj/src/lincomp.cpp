#include "polywalk/lincomp.hpp"

#include <cmath>
#include <stdexcept>

#include "polywalk/kernels.hpp"

namespace polywalk {

namespace {

// Kernel basis of the homogeneous system A x = 0 over F_p, via reduced row
// echelon form.  The double-domain path drives the row-axpy kernel; the
// 64-bit path covers large moduli.
std::vector<std::vector<std::uint64_t>> nullspace(std::vector<std::vector<std::uint64_t>> a,
                                                  const Prime& p) {
  const std::uint64_t pv = p.value();
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a.front().size();

  std::vector<std::size_t> pivot_col;
  if (pv < kernels::kMaxPrime && rows > 0) {
    const auto& k = kernels::ops();
    const double pd = static_cast<double>(pv);
    std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) m[r][c] = static_cast<double>(a[r][c]);

    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
      std::size_t piv = r;
      while (piv < rows && m[piv][c] == 0.0) ++piv;
      if (piv == rows) continue;
      std::swap(m[piv], m[r]);
      const std::uint64_t inv_piv =
          inv(FieldElement(static_cast<std::uint64_t>(m[r][c]), p)).value();
      // normalize the pivot row
      for (std::size_t j = c; j < cols; ++j)
        m[r][j] = static_cast<double>(
            mul_mod_u64(static_cast<std::uint64_t>(m[r][j]), inv_piv, pv));
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == r || m[i][c] == 0.0) continue;
        const double f = pd - m[i][c];  // -m[i][c] mod p
        k.row_axpy_mod(m[i].data() + c, m[r].data() + c, f, pd, cols - c);
      }
      pivot_col.push_back(c);
      ++r;
    }
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        a[i][j] = static_cast<std::uint64_t>(m[i][j]);
  } else if (rows > 0) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
      std::size_t piv = r;
      while (piv < rows && a[piv][c] == 0) ++piv;
      if (piv == rows) continue;
      std::swap(a[piv], a[r]);
      const std::uint64_t inv_piv = inv(FieldElement(a[r][c], p)).value();
      for (std::size_t j = c; j < cols; ++j) a[r][j] = mul_mod_u64(a[r][j], inv_piv, pv);
      for (std::size_t i = 0; i < rows; ++i) {
        if (i == r || a[i][c] == 0) continue;
        const std::uint64_t f = pv - a[i][c];
        for (std::size_t j = c; j < cols; ++j)
          a[i][j] = (a[i][j] + mul_mod_u64(f, a[r][j], pv)) % pv;
      }
      pivot_col.push_back(c);
      ++r;
    }
  }

  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;

  std::vector<std::vector<std::uint64_t>> basis;
  for (std::size_t free_c = 0; free_c < cols; ++free_c) {
    if (is_pivot[free_c]) continue;
    std::vector<std::uint64_t> v(cols, 0);
    v[free_c] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) {
      const std::uint64_t entry = a[r][free_c];
      if (entry != 0) v[pivot_col[r]] = pv - entry;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

bool verify_relation(const Prime& p, const std::vector<std::vector<std::uint64_t>>& rows,
                     const RelationWitness& witness) {
  const std::uint64_t pv = p.value();
  const std::size_t N = rows.size();
  const std::size_t L = static_cast<std::size_t>(witness.L);
  if (witness.coeffs.size() != L + 1) return false;
  bool last_nonzero = false;
  for (std::uint64_t x : witness.coeffs.back()) last_nonzero = last_nonzero || x != 0;
  if (!last_nonzero) return false;
  if (L >= N) return true;  // empty window
  const std::size_t m = rows.front().size();
  for (std::size_t n = 0; n + L < N; ++n) {
    std::uint64_t acc = 0;
    for (std::size_t h = 0; h <= L; ++h) {
      if (witness.coeffs[h].size() != m) return false;
      for (std::size_t j = 0; j < m; ++j) {
        acc += mul_mod_u64(witness.coeffs[h][j], rows[n + h][j], pv);
        if (acc >= pv) acc -= pv;
      }
    }
    if (acc != 0) return false;
  }
  return true;
}

LinearComplexityResult linear_complexity(const Prime& p,
                                         const std::vector<std::vector<std::uint64_t>>& rows) {
  const std::size_t N = rows.size();
  if (N < 2) throw std::invalid_argument("linear_complexity: need N >= 2");
  const std::size_t m = rows.front().size();
  if (m == 0) throw std::invalid_argument("linear_complexity: rows must be nonempty");
  for (const auto& r : rows)
    if (r.size() != m)
      throw std::invalid_argument("linear_complexity: rows must share a length");

  for (std::size_t L = 0; L < N; ++L) {
    const std::size_t windows = N - L;
    const std::size_t cols = m * (L + 1);
    std::vector<std::vector<std::uint64_t>> a(windows, std::vector<std::uint64_t>(cols));
    for (std::size_t n = 0; n < windows; ++n)
      for (std::size_t h = 0; h <= L; ++h)
        for (std::size_t j = 0; j < m; ++j) a[n][h * m + j] = rows[n + h][j];

    // any kernel vector with a nonzero last block yields a witness; if every
    // basis vector has a zero last block, so does the whole kernel
    for (const auto& v : nullspace(std::move(a), p)) {
      bool last_nonzero = false;
      for (std::size_t j = 0; j < m; ++j) last_nonzero = last_nonzero || v[L * m + j] != 0;
      if (!last_nonzero) continue;
      RelationWitness w;
      w.L = L;
      for (std::size_t h = 0; h <= L; ++h)
        w.coeffs.emplace_back(v.begin() + static_cast<std::ptrdiff_t>(h * m),
                              v.begin() + static_cast<std::ptrdiff_t>((h + 1) * m));
      if (!verify_relation(p, rows, w))
        throw std::logic_error("linear_complexity: witness failed re-verification");
      return {w.L, std::move(w), false};
    }
  }

  // L = N: the window is empty and any nonzero c_L works
  RelationWitness w;
  w.L = N;
  w.coeffs.assign(N + 1, std::vector<std::uint64_t>(m, 0));
  w.coeffs.back()[0] = 1;
  return {w.L, std::move(w), true};
}

LowerBoundReport lower_bound_report(std::uint64_t L, std::uint64_t N, const Prime& p,
                                    std::uint32_t m) {
  const double reference = std::pow(static_cast<double>(N), 1.0 / static_cast<double>(m)) /
                           static_cast<double>(p.value());
  return {L, reference, static_cast<double>(L) / reference, L == 0};
}

}  // namespace polywalk
