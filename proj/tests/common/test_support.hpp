#pragma once

// Shared oracles for the test suites. Everything here is independent of the
// scheduled kernels it checks: plain dense three-loop routines and index
// walks over the partition plans.

#include <cmath>
#include <cstdint>
#include <vector>

#include "symk/matrix.hpp"
#include "symk/tbs.hpp"

namespace symk::test {

// Full dense A*A^T by an independent three-loop routine.
inline Matrix dense_gram(const Matrix& a) {
  Matrix full(a.rows(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.rows(); ++j) {
      double s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * a(j, k);
      full(i, j) = s;
    }
  return full;
}

inline double max_abs(const PackedTriangular& m) {
  double v = 0;
  for (std::size_t i = 0; i < m.size(); ++i)
    v = std::max(v, std::abs(m.data()[i]));
  return v;
}

inline double max_abs_diff(const PackedTriangular& a,
                           const PackedTriangular& b) {
  double v = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    v = std::max(v, std::abs(a.data()[i] - b.data()[i]));
  return v;
}

inline double rel_diff(const PackedTriangular& got,
                       const PackedTriangular& want) {
  const double scale = max_abs(want);
  const double diff = max_abs_diff(got, want);
  return scale > 0 ? diff / scale : diff;
}

// max_{i>=j} |(L L^T)(i,j) - A(i,j)| / max|A|
inline double reconstruction_rel_error(const PackedTriangular& l,
                                       const PackedTriangular& a) {
  const std::size_t n = a.n();
  double diff = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0;
      for (std::size_t k = 0; k <= j; ++k) s += l.at(i, k) * l.at(j, k);
      diff = std::max(diff, std::abs(s - a.at(i, j)));
    }
  const double scale = max_abs(a);
  return scale > 0 ? diff / scale : diff;
}

// Number of C elements covered by triangle blocks over all recursion levels
// of the plan for (n, s, tile).
inline std::uint64_t triangle_block_coverage(std::size_t n, std::uint64_t s,
                                             std::size_t tile) {
  const TrianglePlan plan = build_plan_tiled(n, s, tile);
  if (plan.fallback) return 0;
  const std::uint64_t own = static_cast<std::uint64_t>(plan.c) * plan.c *
                            (plan.k * (plan.k - 1) / 2) * tile * tile;
  return own + plan.k * triangle_block_coverage(plan.c * tile, s, tile);
}

// Marks every strictly subdiagonal cell the TBS partition assigns, mirroring
// the schedule's control flow with pure index arithmetic: triangle blocks,
// k recursive zones, and the ooc strip. `hit(i, j)` is called once per cell.
template <typename Hit>
void walk_tbs_partition(std::size_t row0, std::size_t n, std::uint64_t s,
                        Hit&& hit) {
  const TrianglePlan plan = build_plan(n, s);
  if (plan.fallback) {
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) hit(row0 + i, row0 + j);
    return;
  }
  const std::size_t region = plan.c * plan.k;
  for (std::size_t i = region; i < n; ++i)  // ooc strip rows
    for (std::size_t j = 0; j < i; ++j) hit(row0 + i, row0 + j);
  for (std::size_t z = 0; z < plan.k; ++z)
    walk_tbs_partition(row0 + z * plan.c, plan.c, s, hit);
  for (std::size_t bi = 0; bi < plan.c; ++bi)
    for (std::size_t bj = 0; bj < plan.c; ++bj) {
      const auto rows = enumerate_block(plan, bi, bj);
      for (std::size_t u = 1; u < plan.k; ++u)
        for (std::size_t v = 0; v < u; ++v)
          hit(row0 + rows[u], row0 + rows[v]);
    }
}

}  // namespace symk::test
