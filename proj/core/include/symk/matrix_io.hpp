#pragma once

#include <filesystem>
#include <variant>

#include "symk/matrix.hpp"

namespace symk {

// Binary matrix file format: 8-byte magic "SYMKMAT1", u32 little-endian
// rows, u32 little-endian cols, u8 flag (0 = dense row-major, 1 = packed
// lower triangular), 7 zero pad bytes, then 64-bit little-endian IEEE-754
// floats in storage order.

void save_matrix(const std::filesystem::path& path, const Matrix& m);
void save_matrix(const std::filesystem::path& path, const PackedTriangular& m);

using AnyMatrix = std::variant<Matrix, PackedTriangular>;

/// Throws std::runtime_error on bad magic, bad flag, or truncated payload.
AnyMatrix load_matrix(const std::filesystem::path& path);

}  // namespace symk
