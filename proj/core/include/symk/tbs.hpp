#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symk/io_ledger.hpp"
#include "symk/views.hpp"

namespace symk {

/// Smallest side s such that a triangle block of side s has at least m
/// subdiagonal elements: min { s : m <= s(s-1)/2 }, with sigma(0) = 0.
std::uint64_t sigma(std::uint64_t m);

/// Cyclic indexing family value f^{i,j}_c(u): j when u = 0, otherwise
/// (i + j*(u-1)) mod c.
std::size_t cyclic_index(std::size_t i, std::size_t j, std::size_t c,
                         std::size_t u);

/// Product of all primes <= k-2 (empty product = 1). Throws
/// std::overflow_error when the product does not fit in 64 bits (k > 54).
std::uint64_t primorial_q(std::size_t k);

/// Largest c <= x with gcd(c, q) = 1; exists for every x >= 1.
std::size_t largest_coprime_below(std::size_t x, std::uint64_t q);

/// One collision of an indexing family: blocks (i,j) and (i2,j2) share the
/// rows placed at zone-rows u and v.
struct FamilyCollision {
  std::size_t i = 0, j = 0, i2 = 0, j2 = 0, u = 0, v = 0;
};

struct FamilyCheck {
  bool valid = true;
  std::optional<FamilyCollision> witness;
};

/// Exhaustively checks the validity condition of the cyclic (c,k)-indexing
/// family: no two distinct (i,j) agree at two distinct arguments. Returns
/// the first collision found when invalid.
FamilyCheck validate_family(std::size_t c, std::size_t k);

/// The (c, k, q, l) partition of the result matrix for one recursion level.
/// For the tiled variant, c and the block row indices are in units of
/// `tile`-sized tile rows; l is in element rows.
struct TrianglePlan {
  std::size_t n = 0;     // rows covered by this plan
  std::size_t k = 0;     // rows per triangle block (block side count)
  std::uint64_t q = 0;   // product of primes <= k-2; 0 if wider than 64 bits
  std::size_t c = 0;     // zone side: largest coprime with q, <= n/(k*tile)
  std::size_t l = 0;     // remainder rows computed by ooc_syrk (n when fallback)
  std::size_t tile = 1;  // tile side b (1 = scalar algorithm)
  bool fallback = false; // c < k-1: the whole level delegates to ooc_syrk
  std::size_t depth = 0; // number of triangle-block levels below, incl. this

  std::string csv_row() const;  // "k,q,c,l,fallback,depth"
  static std::string csv_header();
};

/// Plan for fast memory of s elements: k is the largest integer with
/// k(k+1)/2 <= s (spare capacity is left unused).
TrianglePlan build_plan(std::size_t n, std::uint64_t s);

/// Tiled plan: k is the largest integer such that k(k-1)/2 tiles of b*b
/// elements plus k column slivers of b elements fit in s.
TrianglePlan build_plan_tiled(std::size_t n, std::uint64_t s,
                              std::size_t tile);

/// Row indices R of triangle block B^{i,j}: R[u] = u*c + f^{i,j}(u).
/// Strictly increasing, one index per zone row. Requires a non-fallback
/// plan and i, j < c.
std::vector<std::size_t> enumerate_block(const TrianglePlan& plan,
                                         std::size_t i, std::size_t j);

struct TbsResult {
  IoReport io;
  TrianglePlan plan;
  /// C elements loaded by triangle-block loops over all recursion levels
  /// (excludes the ooc strip and fallback regions). Each covered element
  /// is loaded exactly once.
  std::uint64_t block_loads_c = 0;
};

/// Triangle Block SYRK: C += sign * lower(A*A^T) under the ledger.
/// Partitions the first c*k rows of C into c^2 disjoint triangle blocks,
/// recurses on the k diagonal zones, and sweeps the last l rows with
/// ooc_syrk. Falls back entirely to ooc_syrk when c < k-1.
TbsResult tbs(const PanelView& a, const TriView& c, IoLedger& ledger,
              double sign = 1.0);

/// Tiled variant: triangle blocks of b x b tiles; A is still streamed one
/// column sliver (k*b elements) at a time.
TbsResult tbs_tiled(const PanelView& a, const TriView& c, std::size_t tile,
                    IoLedger& ledger, double sign = 1.0);

/// Frozen A-traffic envelope: N^2 M / (k-1) + 16 N M log2(N).
double tbs_load_envelope(std::size_t n, std::size_t m, std::uint64_t s);
double tbs_tiled_load_envelope(std::size_t n, std::size_t m, std::uint64_t s,
                               std::size_t tile);

}  // namespace symk
