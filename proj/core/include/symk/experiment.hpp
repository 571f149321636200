#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "symk/io_ledger.hpp"

namespace symk {

enum class Algo {
  ref_syrk,
  ooc_syrk,
  tbs,
  tbs_tiled,
  ref_chol,
  ooc_chol,
  lbc,
};

enum class RunMode { compute, count };

std::string_view algo_name(Algo a);
std::optional<Algo> parse_algo(std::string_view name);
bool is_cholesky(Algo a);
bool is_reference(Algo a);

struct ExperimentSpec {
  Algo algo = Algo::tbs;
  std::size_t n = 0;
  std::size_t m = 0;  // SYRK operand width; ignored for Cholesky algos
  std::uint64_t s = 0;
  RunMode mode = RunMode::count;
  std::uint64_t seed = 0;
  std::optional<std::size_t> tile;   // tbs-tiled only (required there)
  std::optional<std::size_t> block;  // lbc override, default floor(sqrt(N))
  std::size_t compute_cap = 4096;    // max N/M allowed to allocate
  bool verify = false;               // compute mode: check against reference
  std::string in_matrix;             // optional matrix file to load
  std::string out_matrix;            // optional file for the result
};

struct BoundReport {
  ExperimentSpec spec;
  IoReport io;
  std::size_t effective_b = 0;  // tile or block actually used; 0 = n/a
  double lower_bound = 0;
  double upper_envelope = 0;
  double ratio = 0;      // loads_A/(N^2 M/sqrt(S)) or loads/(N^3/sqrt(S))
  bool bound_ok = true;  // measured I/O never beats the proven lower bound
  bool verified = false;
  std::string error;  // non-empty when the run failed (sweep keeps going)

  bool ok() const { return error.empty() && bound_ok; }

  /// algo,N,M,S,b,mode,loads_A,loads_C,stores,peak_resident,lower_bound,ratio
  static std::string csv_header();
  std::string csv_row() const;
};

/// Runs one experiment under a fresh ledger. Deterministic for a fixed spec:
/// count mode is data-independent, compute mode is seeded. Invalid
/// algo/dimension combinations throw std::invalid_argument; capacity
/// violations surface verbatim.
BoundReport run(const ExperimentSpec& spec);

/// Runs every spec in order; per-run failures are recorded in the report
/// rather than thrown, so one bad row never loses the others.
std::vector<BoundReport> sweep(const std::vector<ExperimentSpec>& specs);

void write_csv(std::ostream& out, std::span<const BoundReport> reports);

}  // namespace symk
