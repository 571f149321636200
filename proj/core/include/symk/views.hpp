#pragma once

#include <cassert>
#include <cstddef>

#include "symk/io_ledger.hpp"
#include "symk/matrix.hpp"

namespace symk {

// Kernels operate on views: an index translation into a parent matrix, so
// that sub-problems (recursive calls, trailing updates) address the parent's
// elements directly and the ledger counts real traffic. A view with a null
// data pointer runs in count-only mode: the schedule replays its ledger
// transitions without touching any floats.

/// Rectangular operand window (the A side of a SYRK-like kernel, or the
/// solved panel of a TRSM). Rows/cols are local to the view; `row0`/`col0`
/// translate into the parent, whose storage is either a dense row-major
/// matrix or a packed lower triangle.
struct PanelView {
  enum class Layout { dense, packed };

  MatrixId id = matrix_a;
  double* data = nullptr;  // null in count-only mode
  Layout layout = Layout::dense;
  std::size_t row0 = 0, col0 = 0;
  std::size_t rows = 0, cols = 0;
  std::size_t stride = 0;  // parent row length (dense layout only)

  bool has_data() const { return data != nullptr; }

  std::uint64_t offset(std::size_t i, std::size_t k) const {
    const std::uint64_t r = row0 + i, c = col0 + k;
    return layout == Layout::dense ? r * stride + c
                                   : packed_offset_unchecked(r, c);
  }
  ElementAddr addr(std::size_t i, std::size_t k) const {
    return ElementAddr{id, offset(i, k)};
  }
  double value(std::size_t i, std::size_t k) const {
    return data[offset(i, k)];
  }
  double& ref(std::size_t i, std::size_t k) { return data[offset(i, k)]; }

  /// Row range [r0, r0 + nrows) of this view, same columns.
  PanelView sub_rows(std::size_t r0, std::size_t nrows) const {
    assert(r0 + nrows <= rows);
    PanelView v = *this;
    v.row0 += r0;
    v.rows = nrows;
    return v;
  }
};

/// Symmetric result window: the leading diagonal sub-triangle of a packed
/// lower-triangular parent, shifted by `row0` along the diagonal. Local
/// element (i, j), j <= i, addresses parent element (row0+i, row0+j).
struct TriView {
  MatrixId id = matrix_c;
  double* data = nullptr;  // null in count-only mode
  std::size_t row0 = 0;
  std::size_t n = 0;

  bool has_data() const { return data != nullptr; }

  std::uint64_t offset(std::size_t i, std::size_t j) const {
    return packed_offset_unchecked(row0 + i, row0 + j);
  }
  ElementAddr addr(std::size_t i, std::size_t j) const {
    return ElementAddr{id, offset(i, j)};
  }
  double value(std::size_t i, std::size_t j) const {
    return data[offset(i, j)];
  }
  double& ref(std::size_t i, std::size_t j) { return data[offset(i, j)]; }

  TriView sub(std::size_t r0, std::size_t side) const {
    assert(r0 + side <= n);
    TriView v = *this;
    v.row0 += r0;
    v.n = side;
    return v;
  }
};

inline PanelView panel_of(const Matrix& a, MatrixId id = matrix_a) {
  return PanelView{id,       const_cast<double*>(a.data()),
                   PanelView::Layout::dense,
                   0,        0,
                   a.rows(), a.cols(),
                   a.cols()};
}

/// Count-only panel with the same addressing as a dense rows x cols matrix.
inline PanelView panel_shape(std::size_t rows, std::size_t cols,
                             MatrixId id = matrix_a) {
  return PanelView{id, nullptr, PanelView::Layout::dense, 0, 0,
                   rows, cols, cols};
}

/// Rectangular window inside a packed lower triangle (all of its elements
/// must satisfy row >= col, i.e. row0 >= col0 + cols - 1).
inline PanelView packed_panel(double* data, MatrixId id, std::size_t row0,
                              std::size_t col0, std::size_t rows,
                              std::size_t cols) {
  assert(row0 + 1 >= col0 + cols);
  return PanelView{id, data, PanelView::Layout::packed, row0, col0,
                   rows, cols, 0};
}

inline TriView tri_of(PackedTriangular& c, MatrixId id = matrix_c) {
  return TriView{id, c.data(), 0, c.n()};
}
inline TriView tri_of(const PackedTriangular& c, MatrixId id = matrix_c) {
  return TriView{id, const_cast<double*>(c.data()), 0, c.n()};
}

/// Count-only symmetric result of side n.
inline TriView tri_shape(std::size_t n, MatrixId id = matrix_c) {
  return TriView{id, nullptr, 0, n};
}

}  // namespace symk
