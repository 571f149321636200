#include "symk/matrix.hpp"

#include <cmath>

namespace symk {

std::size_t packed_offset(std::size_t i, std::size_t j, std::size_t n) {
  if (i >= n)
    throw std::out_of_range("packed_offset: row " + std::to_string(i) +
                            " out of range for side " + std::to_string(n));
  if (j > i)
    throw std::out_of_range("packed_offset: column " + std::to_string(j) +
                            " above the diagonal (row " + std::to_string(i) +
                            ")");
  return i * (i + 1) / 2 + j;
}

Matrix random_dense(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Matrix m(rows, cols);
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.next_unit();
  return m;
}

PackedTriangular random_spd(std::size_t n, std::uint64_t seed) {
  Matrix g = random_dense(n, n, seed);
  PackedTriangular c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += g(i, k) * g(j, k);
      c.at(i, j) = s;
    }
    c.at(i, i) += static_cast<double>(n);
  }
  return c;
}

void reference_syrk(const Matrix& a, PackedTriangular& c) {
  if (a.rows() != c.n())
    throw std::invalid_argument("reference_syrk: A has " +
                                std::to_string(a.rows()) + " rows but C side " +
                                std::to_string(c.n()));
  const std::size_t n = a.rows(), m = a.cols();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (std::size_t k = 0; k < m; ++k) c.at(i, j) += a(i, k) * a(j, k);
}

PackedTriangular reference_cholesky(const PackedTriangular& a) {
  PackedTriangular l = a;
  const std::size_t n = l.n();
  for (std::size_t k = 0; k < n; ++k) {
    const double pivot = l.at(k, k);
    if (!(pivot > 0.0)) throw NotPositiveDefinite(k, pivot);
    l.at(k, k) = std::sqrt(pivot);
    for (std::size_t i = k + 1; i < n; ++i) {
      l.at(i, k) /= l.at(k, k);
      for (std::size_t j = k + 1; j <= i; ++j)
        l.at(i, j) -= l.at(i, k) * l.at(j, k);
    }
  }
  return l;
}

}  // namespace symk
