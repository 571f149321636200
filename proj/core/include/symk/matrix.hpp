#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace symk {

/// Thrown by Cholesky routines when a pivot is not strictly positive.
/// `column` is the (global) index of the failing column.
class NotPositiveDefinite : public std::runtime_error {
 public:
  NotPositiveDefinite(std::size_t column, double pivot)
      : std::runtime_error("matrix is not positive definite: pivot " +
                           std::to_string(pivot) + " at column " +
                           std::to_string(column)),
        column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

/// Offset of element (i, j), i >= j, in row-major packed lower-triangular
/// storage. Checked against the side length n; the map is a bijection from
/// {(i, j) : j <= i < n} onto [0, n(n+1)/2).
std::size_t packed_offset(std::size_t i, std::size_t j, std::size_t n);

/// Unchecked variant for hot paths.
constexpr std::uint64_t packed_offset_unchecked(std::uint64_t i,
                                                std::uint64_t j) {
  return i * (i + 1) / 2 + j;
}

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0)
      throw std::invalid_argument("Matrix: dimensions must be positive");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

/// Lower-triangular n x n storage holding exactly n(n+1)/2 elements.
/// Element (i, j) with i >= j lives at offset i(i+1)/2 + j.
class PackedTriangular {
 public:
  explicit PackedTriangular(std::size_t n)
      : n_(n), data_(n * (n + 1) / 2, 0.0) {
    if (n == 0)
      throw std::invalid_argument("PackedTriangular: side must be positive");
  }

  std::size_t n() const { return n_; }

  double& at(std::size_t i, std::size_t j) {
    return data_[packed_offset(i, j, n_)];
  }
  double at(std::size_t i, std::size_t j) const {
    return data_[packed_offset(i, j, n_)];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

 private:
  std::size_t n_;
  std::vector<double> data_;
};

/// Counter-based SplitMix64 generator. Value i of the stream with a given
/// seed is mix(seed + (i+1) * 0x9E3779B97F4A7C15); see README for the full
/// constant list. Deterministic across platforms and languages.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// N x M matrix of uniform [0,1) entries, filled in row-major order.
Matrix random_dense(std::size_t rows, std::size_t cols, std::uint64_t seed);

/// Lower triangle of G*G^T + n*I where G is n x n uniform [0,1).
/// The diagonal shift makes the result symmetric positive definite.
PackedTriangular random_spd(std::size_t n, std::uint64_t seed);

/// C += lower triangle of A*A^T (diagonal included), the classic three-loop
/// kernel. Used as the numerical ground truth for the out-of-core schedules.
void reference_syrk(const Matrix& a, PackedTriangular& c);

/// In-place Cholesky of the packed lower triangle: returns L with L*L^T = A.
/// Throws NotPositiveDefinite naming the failing column.
PackedTriangular reference_cholesky(const PackedTriangular& a);

}  // namespace symk
