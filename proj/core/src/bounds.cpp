#include "symk/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "symk/tbs.hpp"  // sigma

namespace symk {

std::vector<OpTriple> enumerate_domain(OpDomain domain, std::size_t n,
                                       std::size_t m) {
  std::vector<OpTriple> dom;
  if (domain == OpDomain::syrk) {
    for (std::uint32_t i = 2; i <= n; ++i)
      for (std::uint32_t j = 1; j < i; ++j)
        for (std::uint32_t k = 1; k <= m; ++k) dom.push_back({i, j, k});
  } else {
    for (std::uint32_t i = 3; i <= n; ++i)
      for (std::uint32_t j = 2; j < i; ++j)
        for (std::uint32_t k = 1; k < j; ++k) dom.push_back({i, j, k});
  }
  return dom;
}

std::uint64_t data_accessed(std::span<const OpTriple> h) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
  std::map<std::uint32_t, std::set<std::uint32_t>> footprints;
  for (const OpTriple& t : h) {
    pairs.insert({t.i, t.j});
    footprints[t.k].insert(t.i);
    footprints[t.k].insert(t.j);
  }
  std::uint64_t d = pairs.size();
  for (const auto& [k, fp] : footprints) d += fp.size();
  return d;
}

double hmax_bound(double x) {
  return std::sqrt(2.0) / (3.0 * std::sqrt(3.0)) * std::pow(x, 1.5);
}

double syrk_lower_bound(double n, double m, double s) {
  return n * n * m / (std::sqrt(2.0) * std::sqrt(s));
}

double chol_lower_bound(double n, double s) {
  return n * n * n / (3.0 * std::sqrt(2.0) * std::sqrt(s));
}

namespace {

// Exhaustive subset enumeration over <= max_triples triples. Masks keep the
// incremental cost O(1) per node: one bit per distinct (i,j) pair, one
// index-bit set per iteration k. A subtree is pruned as soon as the partial
// cost exceeds the cap (adding triples never decreases D).
class Enumerator {
 public:
  Enumerator(std::vector<OpTriple> dom, std::uint64_t cost_cap)
      : dom_(std::move(dom)), cap_(cost_cap) {
    std::uint32_t max_k = 0;
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> pair_ids;
    for (const OpTriple& t : dom_) {
      auto [it, fresh] =
          pair_ids.try_emplace({t.i, t.j}, static_cast<int>(pair_ids.size()));
      pair_bit_.push_back(1ULL << it->second);
      fp_bits_.push_back((1ULL << t.i) | (1ULL << t.j));
      max_k = std::max(max_k, t.k);
    }
    fp_.assign(max_k + 1, 0);
    chosen_.assign(dom_.size(), false);
    std::uint64_t full = full_cost();
    best_.assign(full + 1, 0);
    witness_at_.assign(full + 1, {});
    has_entry_.assign(full + 1, false);
  }

  void run() { recurse(0, 0); }

  // best_[d] = max |H| with D(H) == d among enumerated subsets.
  std::vector<std::uint64_t> profile_with_witness(
      std::vector<std::vector<OpTriple>>* witnesses) const {
    std::vector<std::uint64_t> prof(best_.size(), 0);
    if (witnesses) witnesses->assign(best_.size(), {});
    std::uint64_t run_best = 0;
    std::vector<OpTriple> run_wit;
    for (std::size_t d = 0; d < best_.size(); ++d) {
      if (has_entry_[d] && best_[d] > run_best) {
        run_best = best_[d];
        run_wit = witness_at_[d];
      }
      prof[d] = run_best;
      if (witnesses) (*witnesses)[d] = run_wit;
    }
    return prof;
  }

  std::uint64_t full_cost() const {
    return data_accessed(std::span<const OpTriple>(dom_));
  }

 private:
  void recurse(std::size_t idx, std::uint64_t count) {
    if (idx == dom_.size()) {
      record(count);
      return;
    }
    // include dom_[idx]
    const std::uint64_t saved_pairs = pairs_;
    const std::uint32_t k = dom_[idx].k;
    const std::uint64_t saved_fp = fp_[k];
    const std::uint64_t saved_d = d_;
    pairs_ |= pair_bit_[idx];
    fp_[k] |= fp_bits_[idx];
    d_ += static_cast<std::uint64_t>(std::popcount(pairs_) -
                                     std::popcount(saved_pairs)) +
          static_cast<std::uint64_t>(std::popcount(fp_[k]) -
                                     std::popcount(saved_fp));
    if (d_ <= cap_) {
      chosen_[idx] = true;
      recurse(idx + 1, count + 1);
      chosen_[idx] = false;
    }
    pairs_ = saved_pairs;
    fp_[k] = saved_fp;
    d_ = saved_d;
    // exclude
    recurse(idx + 1, count);
  }

  void record(std::uint64_t count) {
    if (has_entry_[d_] && best_[d_] >= count) return;
    best_[d_] = count;
    has_entry_[d_] = true;
    witness_at_[d_].clear();
    for (std::size_t i = 0; i < dom_.size(); ++i)
      if (chosen_[i]) witness_at_[d_].push_back(dom_[i]);
  }

  std::vector<OpTriple> dom_;
  std::uint64_t cap_;
  std::vector<std::uint64_t> pair_bit_, fp_bits_;
  std::uint64_t pairs_ = 0;
  std::vector<std::uint64_t> fp_;
  std::uint64_t d_ = 0;
  std::vector<bool> chosen_;
  std::vector<std::uint64_t> best_;
  std::vector<std::vector<OpTriple>> witness_at_;
  std::vector<bool> has_entry_;
};

std::vector<OpTriple> checked_domain(OpDomain domain, std::size_t n,
                                     std::size_t m, std::size_t max_triples) {
  auto dom = enumerate_domain(domain, n, m);
  if (dom.size() > max_triples)
    throw std::invalid_argument(
        "oracle domain has " + std::to_string(dom.size()) +
        " triples, above the limit of " + std::to_string(max_triples));
  if (dom.size() > 63)
    throw std::invalid_argument("oracle domain too large for bitmask search");
  return dom;
}

}  // namespace

PmaxResult brute_force_pmax(OpDomain domain, std::size_t n, std::size_t m,
                            std::uint64_t x, std::size_t max_triples) {
  Enumerator e(checked_domain(domain, n, m, max_triples), x);
  e.run();
  std::vector<std::vector<OpTriple>> witnesses;
  auto prof = e.profile_with_witness(&witnesses);
  const std::size_t at = std::min<std::uint64_t>(x, prof.size() - 1);
  return PmaxResult{prof[at], witnesses[at]};
}

std::vector<std::uint64_t> pmax_profile(OpDomain domain, std::size_t n,
                                        std::size_t m,
                                        std::size_t max_triples) {
  Enumerator e(checked_domain(domain, n, m, max_triples), UINT64_MAX);
  e.run();
  return e.profile_with_witness(nullptr);
}

std::uint64_t balanced_cost(std::uint64_t x, std::uint64_t m) {
  if (m < 1) throw std::invalid_argument("balanced_cost: require m >= 1");
  if (x == 0) return 0;
  const std::uint64_t full = x / m;
  const std::uint64_t rest = x - full * m;
  const std::uint64_t result_elems = full >= 1 ? m : rest;
  return result_elems + full * sigma(m) + sigma(rest);
}

BalancedSolution balanced_solution(std::uint64_t x, std::uint64_t m) {
  if (m < 1)
    throw std::invalid_argument("balanced_solution: require m >= 1");
  BalancedSolution b;
  b.size = x;
  b.cost = balanced_cost(x, m);
  if (x == 0) return b;
  // Canonical nested triangle sets: the first m subdiagonal pairs in
  // (row, col) order always lie inside TB([1, sigma(m)]).
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t i = 2; pairs.size() < m; ++i)
    for (std::uint32_t j = 1; j < i && pairs.size() < m; ++j)
      pairs.push_back({i, j});
  const std::uint64_t full = x / m;
  const std::uint64_t rest = x - full * m;
  for (std::uint64_t k = 1; k <= full; ++k)
    for (std::uint64_t p = 0; p < m; ++p)
      b.ops.push_back({pairs[p].first, pairs[p].second,
                       static_cast<std::uint32_t>(k)});
  for (std::uint64_t p = 0; p < rest; ++p)
    b.ops.push_back({pairs[p].first, pairs[p].second,
                     static_cast<std::uint32_t>(full + 1)});
  return b;
}

PprimeOptimum pprime_optimum(double x) {
  if (x < 0) throw std::invalid_argument("pprime_optimum: require x >= 0");
  const double root = std::sqrt(1.0 + 6.0 * x);
  PprimeOptimum opt;
  opt.i_star = 2.0 / 3.0 + root / 3.0;
  opt.k_star = (opt.i_star - 0.5) * (1.0 - 1.0 / opt.i_star);
  opt.value = (root - 1.0) * (root - 1.0) * (2.0 * root + 1.0) / 108.0;
  return opt;
}

std::vector<CertRow> certification_table(OpDomain domain, std::size_t n,
                                         std::size_t m,
                                         std::size_t max_triples) {
  auto prof = pmax_profile(domain, n, m, max_triples);
  std::vector<CertRow> rows;
  rows.reserve(prof.size());
  for (std::size_t x = 0; x < prof.size(); ++x) {
    CertRow r;
    r.x = x;
    r.oracle_max = prof[x];
    r.bound = hmax_bound(static_cast<double>(x));
    r.slack = r.bound - static_cast<double>(r.oracle_max);
    rows.push_back(r);
  }
  return rows;
}

std::string cert_csv_header() { return "X,oracle_max,hmax_bound,slack"; }

std::string cert_csv_row(const CertRow& row) {
  std::ostringstream out;
  out << row.x << ',' << row.oracle_max << ',' << row.bound << ',' << row.slack;
  return out.str();
}

}  // namespace symk
