#include "symk/tbs.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "symk/ooc.hpp"

namespace symk {

std::uint64_t sigma(std::uint64_t m) {
  if (m == 0) return 0;
  auto s = static_cast<std::uint64_t>(
      std::ceil(std::sqrt(0.25 + 2.0 * static_cast<double>(m)) + 0.5));
  while (s * (s - 1) / 2 < m) ++s;
  while (s >= 2 && (s - 1) * (s - 2) / 2 >= m) --s;
  return s;
}

std::size_t cyclic_index(std::size_t i, std::size_t j, std::size_t c,
                         std::size_t u) {
  if (u == 0) return j;
  return (i + j * (u - 1)) % c;
}

namespace {

std::vector<std::size_t> primes_upto(std::size_t limit) {
  std::vector<std::size_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::size_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    primes.push_back(p);
    for (std::size_t q = p * p; q <= limit; q += p) composite[q] = true;
  }
  return primes;
}

// Product of primes <= limit, or nullopt when it overflows 64 bits.
std::optional<std::uint64_t> try_primorial(std::size_t limit) {
  std::uint64_t q = 1;
  for (std::size_t p : primes_upto(limit)) {
    if (q > UINT64_MAX / p) return std::nullopt;
    q *= p;
  }
  return q;
}

bool coprime_with_primes(std::size_t c, const std::vector<std::size_t>& primes) {
  for (std::size_t p : primes) {
    if (p > c) break;
    if (c % p == 0) return false;
  }
  return true;
}

// Largest c <= x with no prime factor <= limit (equivalently coprime with
// the primorial of `limit`, without materializing it).
std::size_t largest_coprime_with_primes(std::size_t x,
                                        const std::vector<std::size_t>& primes) {
  for (std::size_t c = x;; --c) {
    if (coprime_with_primes(c, primes)) return c;
  }
}

// Largest k >= 1 such that k(k-1)/2 tiles of b*b plus k slivers of b
// elements fit in s. For b = 1 this is k(k+1)/2 <= s.
std::size_t block_count_for(std::uint64_t s, std::size_t b) {
  auto fits = [&](std::uint64_t k) {
    const auto bb = static_cast<unsigned __int128>(b) * b;
    const auto need = bb * k * (k - 1) / 2 +
                      static_cast<unsigned __int128>(k) * b;
    return need <= s;
  };
  std::uint64_t k =
      static_cast<std::uint64_t>(std::sqrt(2.0 * static_cast<double>(s)) /
                                 static_cast<double>(b)) +
      2;
  while (k > 1 && !fits(k)) --k;
  while (fits(k + 1)) ++k;
  return static_cast<std::size_t>(k);
}

}  // namespace

std::uint64_t primorial_q(std::size_t k) {
  if (k < 2) throw std::invalid_argument("primorial_q: require k >= 2");
  auto q = try_primorial(k - 2);
  if (!q)
    throw std::overflow_error(
        "primorial_q: product of primes <= " + std::to_string(k - 2) +
        " does not fit in 64 bits");
  return *q;
}

std::size_t largest_coprime_below(std::size_t x, std::uint64_t q) {
  if (x < 1)
    throw std::invalid_argument("largest_coprime_below: require x >= 1");
  for (std::size_t c = x;; --c) {
    if (std::gcd(static_cast<std::uint64_t>(c), q) == 1) return c;
  }
}

FamilyCheck validate_family(std::size_t c, std::size_t k) {
  if (c < 1 || k < 1)
    throw std::invalid_argument("validate_family: require c, k >= 1");
  // For each unordered argument pair (u, v), hash every block by its value
  // pair; a repeat is a collision witness.
  std::vector<std::size_t> owner(c * c);
  for (std::size_t u = 0; u + 1 < k; ++u) {
    for (std::size_t v = u + 1; v < k; ++v) {
      std::fill(owner.begin(), owner.end(), c * c);
      for (std::size_t i = 0; i < c; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
          const std::size_t key =
              cyclic_index(i, j, c, u) * c + cyclic_index(i, j, c, v);
          if (owner[key] != c * c) {
            const std::size_t prev = owner[key];
            return FamilyCheck{
                false, FamilyCollision{prev / c, prev % c, i, j, u, v}};
          }
          owner[key] = i * c + j;
        }
      }
    }
  }
  return FamilyCheck{true, std::nullopt};
}

std::string TrianglePlan::csv_header() { return "k,q,c,l,fallback,depth"; }

std::string TrianglePlan::csv_row() const {
  std::ostringstream out;
  out << k << ',' << q << ',' << c << ',' << l << ',' << (fallback ? 1 : 0)
      << ',' << depth;
  return out.str();
}

TrianglePlan build_plan_tiled(std::size_t n, std::uint64_t s,
                              std::size_t tile) {
  if (n < 1) throw std::invalid_argument("build_plan: require n >= 1");
  if (s < 3) throw std::invalid_argument("build_plan: require s >= 3");
  if (tile < 1) throw std::invalid_argument("build_plan: require tile >= 1");
  if (static_cast<std::uint64_t>(tile) * tile > s)
    throw std::invalid_argument("build_plan: tile^2 exceeds fast memory");

  TrianglePlan plan;
  plan.n = n;
  plan.tile = tile;
  plan.k = block_count_for(s, tile);
  if (plan.k < 2) {
    plan.fallback = true;
    plan.l = n;
    plan.q = try_primorial(0).value_or(0);
    return plan;
  }
  const auto primes = primes_upto(plan.k - 2);
  plan.q = try_primorial(plan.k - 2).value_or(0);
  const std::size_t x = n / (plan.k * tile);
  if (x < 1) {
    plan.c = 0;
    plan.fallback = true;
    plan.l = n;
    return plan;
  }
  plan.c = largest_coprime_with_primes(x, primes);
  plan.fallback = plan.c < plan.k - 1;
  if (plan.fallback) {
    plan.l = n;
    return plan;
  }
  plan.l = n - plan.c * plan.k * tile;
  // Depth of the recursion chain: each level recurses on c*tile rows.
  plan.depth = 1 + build_plan_tiled(plan.c * tile, s, tile).depth;
  return plan;
}

TrianglePlan build_plan(std::size_t n, std::uint64_t s) {
  return build_plan_tiled(n, s, 1);
}

std::vector<std::size_t> enumerate_block(const TrianglePlan& plan,
                                         std::size_t i, std::size_t j) {
  if (plan.fallback)
    throw std::invalid_argument("enumerate_block: fallback plan has no blocks");
  if (i >= plan.c || j >= plan.c)
    throw std::invalid_argument("enumerate_block: block index out of range");
  std::vector<std::size_t> rows(plan.k);
  for (std::size_t u = 0; u < plan.k; ++u)
    rows[u] = u * plan.c + cyclic_index(i, j, plan.c, u);
  return rows;
}

namespace {

void tbs_recurse(const PanelView& a, const TriView& c,
                 const TrianglePlan& plan, IoLedger& ledger, double sign,
                 std::uint64_t& block_loads_c) {
  if (plan.fallback) {
    ooc_syrk(a, c, ledger, sign);
    return;
  }
  const std::size_t k = plan.k, cc = plan.c, b = plan.tile;
  const std::size_t zone = cc * b;        // element rows per zone row
  const std::size_t region = zone * k;    // rows covered by triangle blocks
  const std::size_t m = a.cols;
  const bool compute = c.has_data();
  TriView cm = c;

  // Last l rows by square-tile ooc sweep.
  if (plan.l > 0) ooc_syrk(a, c, ledger, sign, region);

  // Recursive calls on the k diagonal zones (index translation only).
  const TrianglePlan child = build_plan_tiled(zone, ledger.capacity(), b);
  for (std::size_t z = 0; z < k; ++z)
    tbs_recurse(a.sub_rows(z * zone, zone), c.sub(z * zone, zone), child,
                ledger, sign, block_loads_c);

  // Triangle blocks: one b x b tile in each subdiagonal zone.
  std::vector<std::size_t> rows(k);
  for (std::size_t bi = 0; bi < cc; ++bi) {
    for (std::size_t bj = 0; bj < cc; ++bj) {
      for (std::size_t u = 0; u < k; ++u)
        rows[u] = u * cc + cyclic_index(bi, bj, cc, u);
      // Load the block's C tiles.
      for (std::size_t u = 1; u < k; ++u)
        for (std::size_t v = 0; v < u; ++v)
          for (std::size_t ii = 0; ii < b; ++ii)
            for (std::size_t jj = 0; jj < b; ++jj) {
              ledger.load(cm.addr(rows[u] * b + ii, rows[v] * b + jj));
              ++block_loads_c;
            }
      // Stream A one column sliver (k*b elements) at a time.
      for (std::size_t col = 0; col < m; ++col) {
        for (std::size_t u = 0; u < k; ++u)
          for (std::size_t ii = 0; ii < b; ++ii)
            ledger.load(a.addr(rows[u] * b + ii, col));
        if (compute) {
          for (std::size_t u = 1; u < k; ++u)
            for (std::size_t v = 0; v < u; ++v)
              for (std::size_t ii = 0; ii < b; ++ii) {
                const std::size_t ri = rows[u] * b + ii;
                for (std::size_t jj = 0; jj < b; ++jj) {
                  const std::size_t rj = rows[v] * b + jj;
                  ledger.require_resident(
                      {a.addr(ri, col), a.addr(rj, col), cm.addr(ri, rj)});
                  cm.ref(ri, rj) += sign * a.value(ri, col) * a.value(rj, col);
                }
              }
        }
        for (std::size_t u = 0; u < k; ++u)
          for (std::size_t ii = 0; ii < b; ++ii)
            ledger.evict(a.addr(rows[u] * b + ii, col), false);
      }
      for (std::size_t u = 1; u < k; ++u)
        for (std::size_t v = 0; v < u; ++v)
          for (std::size_t ii = 0; ii < b; ++ii)
            for (std::size_t jj = 0; jj < b; ++jj)
              ledger.evict(cm.addr(rows[u] * b + ii, rows[v] * b + jj), true);
    }
  }
}

}  // namespace

TbsResult tbs_tiled(const PanelView& a, const TriView& c, std::size_t tile,
                    IoLedger& ledger, double sign) {
  if (a.rows != c.n) throw std::invalid_argument("tbs: A rows != C side");
  if (a.has_data() != c.has_data())
    throw std::invalid_argument("tbs: operand views must agree on mode");
  TbsResult result;
  result.plan = build_plan_tiled(c.n, ledger.capacity(), tile);
  const IoReport start = ledger.snapshot();
  tbs_recurse(a, c, result.plan, ledger, sign, result.block_loads_c);
  result.io = delta(ledger.snapshot(), start);
  return result;
}

TbsResult tbs(const PanelView& a, const TriView& c, IoLedger& ledger,
              double sign) {
  return tbs_tiled(a, c, 1, ledger, sign);
}

double tbs_tiled_load_envelope(std::size_t n, std::size_t m, std::uint64_t s,
                               std::size_t tile) {
  const double k =
      static_cast<double>(std::max<std::size_t>(block_count_for(s, tile), 2));
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  const double lg = std::log2(static_cast<double>(std::max<std::size_t>(n, 2)));
  return nn * nn * mm / ((k - 1.0) * static_cast<double>(tile)) +
         16.0 * nn * mm * lg;
}

double tbs_load_envelope(std::size_t n, std::size_t m, std::uint64_t s) {
  return tbs_tiled_load_envelope(n, m, s, 1);
}

}  // namespace symk
