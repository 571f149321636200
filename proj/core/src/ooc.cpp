#include "symk/ooc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace symk {

namespace {

void check_dual_mode(bool a_data, bool c_data, const char* kernel) {
  if (a_data != c_data)
    throw std::invalid_argument(std::string(kernel) +
                                ": operand views must agree on mode "
                                "(both with data or both count-only)");
}

}  // namespace

std::size_t tile_side_for(std::uint64_t s) {
  if (s < 3)
    throw std::invalid_argument(
        "fast memory too small: need S >= 3 (one 1x1 tile plus two scalars)");
  auto t = static_cast<std::size_t>(std::sqrt(static_cast<double>(s + 1)));
  while (t * t + 2 * t > s) --t;
  while ((t + 1) * (t + 1) + 2 * (t + 1) <= s) ++t;
  return t;
}

IoReport ooc_syrk(const PanelView& a, const TriView& c, IoLedger& ledger,
                  double sign, std::size_t row_begin) {
  if (a.rows != c.n)
    throw std::invalid_argument("ooc_syrk: A rows != C side");
  check_dual_mode(a.has_data(), c.has_data(), "ooc_syrk");
  const IoReport start = ledger.snapshot();
  const std::size_t n = c.n, m = a.cols;
  const std::size_t t = tile_side_for(ledger.capacity());
  const bool compute = c.has_data();
  // C is mutated through the view in compute mode.
  TriView cm = c;

  for (std::size_t rl = row_begin; rl < n; rl += t) {
    const std::size_t rh = std::min(rl + t, n);
    for (std::size_t cl = 0; cl < rh; cl += t) {
      const std::size_t ch = std::min(cl + t, rh);
      // Result cells of this tile, clipped at the diagonal.
      for (std::size_t i = rl; i < rh; ++i)
        for (std::size_t j = cl; j < std::min(ch, i + 1); ++j)
          ledger.load(cm.addr(i, j));
      // Rows of A needed by one column sliver: the union of the tile's row
      // range and column range (they may overlap on diagonal tiles).
      const bool merged = ch > rl;
      const std::size_t lo = std::min(cl, rl);
      for (std::size_t k = 0; k < m; ++k) {
        if (merged) {
          for (std::size_t r = lo; r < rh; ++r) ledger.load(a.addr(r, k));
        } else {
          for (std::size_t r = cl; r < ch; ++r) ledger.load(a.addr(r, k));
          for (std::size_t r = rl; r < rh; ++r) ledger.load(a.addr(r, k));
        }
        if (compute) {
          for (std::size_t i = rl; i < rh; ++i)
            for (std::size_t j = cl; j < std::min(ch, i + 1); ++j) {
              ledger.require_resident({a.addr(i, k), a.addr(j, k),
                                       cm.addr(i, j)});
              cm.ref(i, j) += sign * a.value(i, k) * a.value(j, k);
            }
        }
        if (merged) {
          for (std::size_t r = lo; r < rh; ++r)
            ledger.evict(a.addr(r, k), false);
        } else {
          for (std::size_t r = cl; r < ch; ++r)
            ledger.evict(a.addr(r, k), false);
          for (std::size_t r = rl; r < rh; ++r)
            ledger.evict(a.addr(r, k), false);
        }
      }
      for (std::size_t i = rl; i < rh; ++i)
        for (std::size_t j = cl; j < std::min(ch, i + 1); ++j)
          ledger.evict(cm.addr(i, j), true);
    }
  }
  return delta(ledger.snapshot(), start);
}

namespace {

// Solve one row in place against the resident factor: row := row * L^-T.
void solve_row_resident(const TriView& l, PanelView& b, std::size_t r,
                        IoLedger& ledger) {
  const std::size_t bf = l.n;
  for (std::size_t j = 0; j < bf; ++j) {
    double acc = b.value(r, j);
    for (std::size_t p = 0; p < j; ++p) {
      ledger.require_resident({b.addr(r, j), b.addr(r, p), l.addr(j, p)});
      acc -= b.value(r, p) * l.value(j, p);
    }
    ledger.require_resident({b.addr(r, j), l.addr(j, j)});
    const double d = l.value(j, j);
    if (d == 0.0)
      throw std::domain_error("ooc_trsm: zero diagonal element at column " +
                              std::to_string(l.row0 + j));
    b.ref(r, j) = acc / d;
  }
}

}  // namespace

IoReport ooc_trsm(const TriView& l, PanelView b, IoLedger& ledger) {
  if (l.n != b.cols)
    throw std::invalid_argument("ooc_trsm: factor side != panel width");
  check_dual_mode(l.has_data(), b.has_data(), "ooc_trsm");
  const IoReport start = ledger.snapshot();
  const std::size_t bf = l.n, m = b.rows;
  const bool compute = b.has_data();
  const std::uint64_t s = ledger.capacity();

  if (bf * bf + 2 * bf <= s) {
    // Factor-resident path: load L once, stream B one row at a time.
    for (std::size_t i = 0; i < bf; ++i)
      for (std::size_t j = 0; j <= i; ++j) ledger.load(l.addr(i, j));
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t j = 0; j < bf; ++j) ledger.load(b.addr(r, j));
      if (compute) solve_row_resident(l, b, r, ledger);
      for (std::size_t j = 0; j < bf; ++j) ledger.evict(b.addr(r, j), true);
    }
    for (std::size_t i = 0; i < bf; ++i)
      for (std::size_t j = 0; j <= i; ++j) ledger.evict(l.addr(i, j), false);
    return delta(ledger.snapshot(), start);
  }

  // Tiled right-looking sweep: finalize the panel one factor tile-column at
  // a time, then push its updates into the not-yet-final columns, streaming
  // them one column sliver at a time past the resident solved tile.
  const std::size_t t = tile_side_for(s);
  const TileGrid cols{t, bf}, rows{t, m};
  for (std::size_t jt = 0; jt < cols.count(); ++jt) {
    const std::size_t jl = cols.lo(jt), jh = cols.hi(jt);
    for (std::size_t it = 0; it < rows.count(); ++it) {
      const std::size_t il = rows.lo(it), ih = rows.hi(it);
      for (std::size_t r = il; r < ih; ++r)
        for (std::size_t j = jl; j < jh; ++j) ledger.load(b.addr(r, j));
      // Solve the tile against L[jt,jt], streaming factor rows.
      for (std::size_t j = jl; j < jh; ++j) {
        for (std::size_t p = jl; p <= j; ++p) ledger.load(l.addr(j, p));
        if (compute) {
          for (std::size_t r = il; r < ih; ++r) {
            double acc = b.value(r, j);
            for (std::size_t p = jl; p < j; ++p) {
              ledger.require_resident(
                  {b.addr(r, j), b.addr(r, p), l.addr(j, p)});
              acc -= b.value(r, p) * l.value(j, p);
            }
            ledger.require_resident({b.addr(r, j), l.addr(j, j)});
            const double d = l.value(j, j);
            if (d == 0.0)
              throw std::domain_error(
                  "ooc_trsm: zero diagonal element at column " +
                  std::to_string(l.row0 + j));
            b.ref(r, j) = acc / d;
          }
        }
        for (std::size_t p = jl; p <= j; ++p) ledger.evict(l.addr(j, p), false);
      }
      // Push updates: B[:,cc] -= B[:,jl..jh) * L[cc,jl..jh)^T for cc > jh-1.
      for (std::size_t cc = jh; cc < bf; ++cc) {
        for (std::size_t p = jl; p < jh; ++p) ledger.load(l.addr(cc, p));
        for (std::size_t r = il; r < ih; ++r) ledger.load(b.addr(r, cc));
        if (compute) {
          for (std::size_t r = il; r < ih; ++r)
            for (std::size_t p = jl; p < jh; ++p) {
              ledger.require_resident(
                  {b.addr(r, cc), b.addr(r, p), l.addr(cc, p)});
              b.ref(r, cc) -= b.value(r, p) * l.value(cc, p);
            }
        }
        for (std::size_t r = il; r < ih; ++r) ledger.evict(b.addr(r, cc), true);
        for (std::size_t p = jl; p < jh; ++p) ledger.evict(l.addr(cc, p), false);
      }
      for (std::size_t r = il; r < ih; ++r)
        for (std::size_t j = jl; j < jh; ++j) ledger.evict(b.addr(r, j), true);
    }
  }
  return delta(ledger.snapshot(), start);
}

namespace {

// In-place Cholesky over resident cells [0, n) of the view.
void factor_resident(TriView& a, std::size_t lo, std::size_t hi,
                     IoLedger& ledger) {
  for (std::size_t k = lo; k < hi; ++k) {
    ledger.require_resident({a.addr(k, k)});
    const double pivot = a.value(k, k);
    if (!(pivot > 0.0)) throw NotPositiveDefinite(a.row0 + k, pivot);
    a.ref(k, k) = std::sqrt(pivot);
    for (std::size_t i = k + 1; i < hi; ++i) {
      ledger.require_resident({a.addr(i, k), a.addr(k, k)});
      a.ref(i, k) /= a.value(k, k);
      for (std::size_t j = k + 1; j <= i; ++j) {
        ledger.require_resident({a.addr(i, j), a.addr(i, k), a.addr(j, k)});
        a.ref(i, j) -= a.value(i, k) * a.value(j, k);
      }
    }
  }
}

}  // namespace

IoReport ooc_chol(const TriView& a, IoLedger& ledger) {
  const IoReport start = ledger.snapshot();
  const std::size_t n = a.n;
  const bool compute = a.has_data();
  const std::uint64_t s = ledger.capacity();
  TriView am = a;

  if (static_cast<std::uint64_t>(n) * (n + 1) / 2 <= s) {
    // Whole triangle fits: load once, factor in place, write back.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) ledger.load(am.addr(i, j));
    if (compute) factor_resident(am, 0, n, ledger);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) ledger.evict(am.addr(i, j), true);
    return delta(ledger.snapshot(), start);
  }

  const std::size_t t = tile_side_for(s);
  const TileGrid grid{t, n};
  for (std::size_t jt = 0; jt < grid.count(); ++jt) {
    const std::size_t jl = grid.lo(jt), jh = grid.hi(jt);
    for (std::size_t it = jt; it < grid.count(); ++it) {
      const std::size_t il = grid.lo(it), ih = grid.hi(it);
      const bool diag = it == jt;
      for (std::size_t i = il; i < ih; ++i)
        for (std::size_t j = jl; j < std::min(jh, i + 1); ++j)
          ledger.load(am.addr(i, j));
      // Left-looking update from the final panels on the left.
      for (std::size_t p = 0; p < jl; ++p) {
        for (std::size_t i = il; i < ih; ++i) ledger.load(am.addr(i, p));
        if (!diag)
          for (std::size_t j = jl; j < jh; ++j) ledger.load(am.addr(j, p));
        if (compute) {
          for (std::size_t i = il; i < ih; ++i)
            for (std::size_t j = jl; j < std::min(jh, i + 1); ++j) {
              ledger.require_resident(
                  {am.addr(i, j), am.addr(i, p), am.addr(j, p)});
              am.ref(i, j) -= am.value(i, p) * am.value(j, p);
            }
        }
        for (std::size_t i = il; i < ih; ++i) ledger.evict(am.addr(i, p), false);
        if (!diag)
          for (std::size_t j = jl; j < jh; ++j)
            ledger.evict(am.addr(j, p), false);
      }
      if (diag) {
        if (compute) factor_resident(am, jl, jh, ledger);
      } else {
        // Solve against the final diagonal tile, streaming its rows.
        for (std::size_t j = jl; j < jh; ++j) {
          for (std::size_t p = jl; p <= j; ++p) ledger.load(am.addr(j, p));
          if (compute) {
            for (std::size_t i = il; i < ih; ++i) {
              double acc = am.value(i, j);
              for (std::size_t p = jl; p < j; ++p) {
                ledger.require_resident(
                    {am.addr(i, j), am.addr(i, p), am.addr(j, p)});
                acc -= am.value(i, p) * am.value(j, p);
              }
              ledger.require_resident({am.addr(i, j), am.addr(j, j)});
              am.ref(i, j) = acc / am.value(j, j);
            }
          }
          for (std::size_t p = jl; p <= j; ++p)
            ledger.evict(am.addr(j, p), false);
        }
      }
      for (std::size_t i = il; i < ih; ++i)
        for (std::size_t j = jl; j < std::min(jh, i + 1); ++j)
          ledger.evict(am.addr(i, j), true);
    }
  }
  return delta(ledger.snapshot(), start);
}

}  // namespace symk
