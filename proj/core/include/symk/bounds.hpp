#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace symk {

/// One multiply-accumulate of the triple-loop kernels, 1-based indices.
/// SYRK domain: 1 <= j < i <= N, 1 <= k <= M. Cholesky update domain:
/// 1 <= k < j < i <= N.
struct OpTriple {
  std::uint32_t i = 0, j = 0, k = 0;
  friend bool operator==(const OpTriple&, const OpTriple&) = default;
};

enum class OpDomain { syrk, cholesky };

/// All triples of the chosen domain (m is ignored for Cholesky).
std::vector<OpTriple> enumerate_domain(OpDomain domain, std::size_t n,
                                       std::size_t m);

/// Number of distinct data elements accessed by a subcomputation:
/// D(H) = |union_k H|k| + sum_k |footprint(H|k)|, where the footprint of a
/// set of (i, j) pairs is the set of indices appearing in either position.
std::uint64_t data_accessed(std::span<const OpTriple> h);

/// Upper bound on the size of any subcomputation accessing at most x
/// elements: sqrt(2)/(3 sqrt(3)) * x^(3/2).
double hmax_bound(double x);

/// Lower bound on SYRK data accesses: N^2 M / (sqrt(2) sqrt(S)).
double syrk_lower_bound(double n, double m, double s);

/// Lower bound on Cholesky data accesses: N^3 / (3 sqrt(2) sqrt(S)).
double chol_lower_bound(double n, double s);

inline constexpr std::size_t default_oracle_limit = 20;

/// Exact optimum of max |H| s.t. D(H) <= x over the chosen domain, by
/// exhaustive subset enumeration with monotone-cost pruning. Refuses
/// domains with more than `max_triples` triples.
struct PmaxResult {
  std::uint64_t best = 0;
  std::vector<OpTriple> witness;
};
PmaxResult brute_force_pmax(OpDomain domain, std::size_t n, std::size_t m,
                            std::uint64_t x,
                            std::size_t max_triples = default_oracle_limit);

/// profile[d] = max |H| over all H with D(H) <= d, for d in
/// [0, D(full domain)]. One enumeration answers every feasible x.
std::vector<std::uint64_t> pmax_profile(
    OpDomain domain, std::size_t n, std::size_t m,
    std::size_t max_triples = default_oracle_limit);

/// The canonical triangle-shaped subcomputation B(x, m): K = floor(x/m)
/// full iterations T(m) plus one partial T(x - K m). Its cost never exceeds
/// the cost of any H with |H| = x and max_k |H|k| = m.
struct BalancedSolution {
  std::uint64_t size = 0;
  std::uint64_t cost = 0;  // D(B)
  std::vector<OpTriple> ops;
};
BalancedSolution balanced_solution(std::uint64_t x, std::uint64_t m);

/// D(B(x, m)) in closed form, without materializing the ops.
std::uint64_t balanced_cost(std::uint64_t x, std::uint64_t m);

/// Stationary point of the relaxed balanced-solution problem:
/// I* = 2/3 + sqrt(1+6x)/3, K* = (I* - 1/2)(1 - 1/I*), and the objective
/// value (1/108)(sqrt(1+6x)-1)^2 (2 sqrt(1+6x)+1) <= hmax_bound(x).
struct PprimeOptimum {
  double i_star = 0, k_star = 0, value = 0;
};
PprimeOptimum pprime_optimum(double x);

/// One certification row "X,oracle_max,hmax_bound,slack".
struct CertRow {
  std::uint64_t x = 0;
  std::uint64_t oracle_max = 0;
  double bound = 0;
  double slack = 0;  // bound - oracle_max
};
std::vector<CertRow> certification_table(
    OpDomain domain, std::size_t n, std::size_t m,
    std::size_t max_triples = default_oracle_limit);
std::string cert_csv_header();
std::string cert_csv_row(const CertRow& row);

}  // namespace symk
