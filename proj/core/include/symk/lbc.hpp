#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symk/io_ledger.hpp"
#include "symk/views.hpp"

namespace symk {

/// Default LBC block size: max(1, floor(sqrt(N))).
std::size_t choose_block_size(std::size_t n);

/// One iteration of the blocked factorization and the ledger deltas of its
/// three sub-kernels.
struct LbcIteration {
  std::size_t index = 0;     // iteration i
  std::size_t row0 = 0;      // i * b
  std::size_t block = 0;     // diagonal block side (ragged at the end)
  std::size_t trailing = 0;  // rows below the diagonal block
  IoReport chol, trsm, tbs;
};

struct LbcResult {
  IoReport io;
  std::size_t block = 0;  // block size used
  std::vector<LbcIteration> iterations;
};

/// Large Block Cholesky: right-looking blocked factorization of the packed
/// view in place, delegating to ooc_chol (diagonal block), ooc_trsm (panel)
/// and tbs with subtracting accumulation (trailing update). The block size
/// defaults to floor(sqrt(N)); pass `block` to override.
LbcResult lbc(const TriView& a, IoLedger& ledger,
              std::optional<std::size_t> block = std::nullopt);

/// Frozen load envelope: b^2 N / (3 sqrt(S)) + b N^2 / (2 sqrt(S))
/// + N^3 / (3 sqrt(2) sqrt(S)) + N^3 / (6b) + 8 N^2 log2(N).
double lbc_load_envelope(std::size_t n, std::uint64_t s, std::size_t b);

}  // namespace symk
