#pragma once

#include <cstddef>
#include <utility>

#include "symk/io_ledger.hpp"
#include "symk/views.hpp"

namespace symk {

/// Largest tile side t with t*t + 2*t <= s: one square result tile plus two
/// operand column slivers. Throws std::invalid_argument when s < 3.
std::size_t tile_side_for(std::uint64_t s);

/// Partition of [0, extent) into tiles of side `tile`, last one ragged.
struct TileGrid {
  std::size_t tile = 1;
  std::size_t extent = 0;

  std::size_t count() const { return (extent + tile - 1) / tile; }
  std::size_t lo(std::size_t i) const { return i * tile; }
  std::size_t hi(std::size_t i) const {
    return std::min(extent, (i + 1) * tile);
  }
  std::size_t width(std::size_t i) const { return hi(i) - lo(i); }
};

/// Square-tile out-of-core SYRK: C[rows row_begin..N) += sign * (A*A^T),
/// holding one t x t result tile resident and streaming A one column sliver
/// at a time. Loads every element of the computed C region exactly once;
/// A traffic is M * N * ceil(N/t) elements for the full region.
IoReport ooc_syrk(const PanelView& a, const TriView& c, IoLedger& ledger,
                  double sign = 1.0, std::size_t row_begin = 0);

/// Out-of-core triangular solve B := B * L^-T for a lower-triangular factor
/// L of side b and a panel B of size M x b. Keeps the whole factor resident
/// when b*b + 2*b <= S, otherwise sweeps right-looking over t x t sub-tiles.
IoReport ooc_trsm(const TriView& l, PanelView b, IoLedger& ledger);

/// One-tile left-looking out-of-core Cholesky of the packed view, in place.
/// When the whole triangle fits (n(n+1)/2 <= S) it is loaded once and
/// factored; otherwise t x t tiles are finalized column by column, pulling
/// updates from the already-final panels on their left.
IoReport ooc_chol(const TriView& a, IoLedger& ledger);

}  // namespace symk
