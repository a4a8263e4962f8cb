#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "polywalk/field.hpp"
#include "polywalk/orbit.hpp"
#include "polywalk/systems.hpp"

namespace polywalk {

struct SumResult {
  std::complex<double> value;
  std::size_t terms = 0;  // |value| <= terms up to rounding
};

// S_a(N) = sum_{n<N} e_p(sum_i a_i u_{n,i}) over the first m coordinates.
// rows are orbit states (length >= a.size() each); a may hold any integers.
SumResult sum_S(const Prime& p, const std::vector<std::vector<std::uint64_t>>& rows,
                std::span<const std::int64_t> a, std::size_t N);

// T_b(N): same with all m+1 coordinates.
SumResult sum_T(const Prime& p, const std::vector<std::vector<std::uint64_t>>& rows,
                std::span<const std::int64_t> b, std::size_t N);

struct AvgSumOptions {
  std::uint64_t budget = 100'000'000;  // cap on p^{m+1} * N
  unsigned workers = 1;
};

// U_{a,c}(M,N) = sum over all initial vectors w of
//   | sum_{n<N} e_p(sum_j a_j u_{n,j}(w)) e_M(c n) |^2,
// computed by running the orbit from every seed.  a has m entries.
double sum_U(const SystemFamily& family, std::span<const std::int64_t> a, std::int64_t c,
             std::uint64_t M, std::uint64_t N, const AvgSumOptions& opt = {});

// V_{b,c}(M,N): same with all m+1 coordinates.
double sum_V(const SystemFamily& family, std::span<const std::int64_t> b, std::int64_t c,
             std::uint64_t M, std::uint64_t N, const AvgSumOptions& opt = {});

// Points in [0,1)^s.
class PointSet {
public:
  PointSet(std::size_t s, std::vector<std::vector<double>> points);
  // Orbit coordinates scaled by 1/p; truncate drops the last coordinate.
  static PointSet from_orbit(const Orbit& orbit, bool truncate);

  std::size_t dim() const { return s_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<std::vector<double>>& points() const { return points_; }

private:
  std::size_t s_;
  std::vector<std::vector<double>> points_;
};

// Axis-aligned half-open box [alpha_j, beta_j) with 0 <= alpha < beta <= 1.
struct BoxQuery {
  BoxQuery(std::vector<double> alpha, std::vector<double> beta);
  std::vector<double> alpha;
  std::vector<double> beta;
};

std::size_t count_in_box(const PointSet& ps, const BoxQuery& box);

// Exact extreme discrepancy: sup over all boxes [alpha, beta) of
// |count/N - volume|, via the critical boxes whose faces sit on point
// coordinates (open and closed limits both scanned).  Guarded: s <= 3,
// N <= 512; cost grows as O(N^{2s}).  Box counts use a dense prefix grid up
// to grid_cell_cap cells and fall back to scanning the points above it.
double discrepancy_exact(const PointSet& ps,
                         std::size_t grid_cell_cap = std::size_t(1) << 22);

// (3/2)^s, the default constant used with etk_bound.
double default_etk_constant(std::size_t s);

// C_s*(1/H + (1/N) * sum_{0<|h|<=H} prod_j (|h_j|+1)^{-1} |sum_n e(h.x_n)|).
double etk_bound(const PointSet& ps, unsigned H, double c_s);

// Measured |S_a(N)| against the reference envelope N^{1-beta} p^alpha with
// alpha = (m^2+m*nu+m)/(2*nu*(m+nu)), beta = 1/(2*nu).  Reported only; no
// inequality is asserted.
struct RatioRow {
  std::vector<std::int64_t> a;
  std::size_t N;
  double sum_modulus;
  double envelope;
  double ratio;
};

struct RatioReport {
  unsigned nu;
  double alpha;
  double beta;
  std::vector<RatioRow> rows;
};

RatioReport ratio_report(const Prime& p, const std::vector<std::vector<std::uint64_t>>& rows,
                         const std::vector<std::vector<std::int64_t>>& coefficient_vectors,
                         std::span<const std::size_t> lengths, unsigned nu);

}  // namespace polywalk
