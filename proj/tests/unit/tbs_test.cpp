#include <doctest.h>

#include <array>
#include <cmath>
#include <numeric>
#include <tuple>
#include <vector>

#include "symk/ooc.hpp"
#include "symk/tbs.hpp"
#include "test_support.hpp"

using namespace symk;

TEST_CASE("sigma: smallest triangle side holding m elements") {
  CHECK(sigma(0) == 0);
  CHECK(sigma(1) == 2);
  CHECK(sigma(3) == 3);
  CHECK(sigma(6) == 4);
  // Closed form equals the definitional search everywhere up to 1e6.
  std::uint64_t s = 0;
  for (std::uint64_t m = 0; m <= 1'000'000; ++m) {
    while (s * (s - 1) / 2 < m) ++s;
    const std::uint64_t want = m == 0 ? 0 : s;
    REQUIRE(sigma(m) == want);
  }
}

TEST_CASE("cyclic_index follows the cyclic family definition") {
  CHECK(cyclic_index(2, 3, 5, 0) == 3);
  CHECK(cyclic_index(2, 3, 5, 1) == 2);
  CHECK(cyclic_index(2, 3, 5, 3) == 3);  // (2 + 3*2) mod 5
}

TEST_CASE("primorial_q multiplies the primes up to k-2") {
  CHECK(primorial_q(2) == 1);
  CHECK(primorial_q(3) == 1);
  CHECK(primorial_q(4) == 2);
  CHECK(primorial_q(5) == 6);
  CHECK(primorial_q(9) == 210);
  CHECK(primorial_q(30) == 223092870);
  CHECK_THROWS_AS(primorial_q(1), std::invalid_argument);
  CHECK_THROWS_AS(primorial_q(60), std::overflow_error);
}

TEST_CASE("largest_coprime_below walks down to a coprime") {
  CHECK(largest_coprime_below(10, 6) == 7);
  CHECK(largest_coprime_below(17, 1) == 17);
  CHECK(largest_coprime_below(30, 30) == 29);
  CHECK(largest_coprime_below(1, 210) == 1);
  CHECK_THROWS_AS(largest_coprime_below(0, 6), std::invalid_argument);
}

TEST_CASE("validate_family agrees with the coprimality criterion") {
  CHECK(validate_family(7, 5).valid);
  const auto bad = validate_family(6, 6);
  REQUIRE_FALSE(bad.valid);
  REQUIRE(bad.witness.has_value());
  const auto w = *bad.witness;
  // The witness must actually collide at both arguments.
  CHECK(w.u != w.v);
  CHECK((w.i != w.i2 || w.j != w.j2));
  CHECK(cyclic_index(w.i, w.j, 6, w.u) == cyclic_index(w.i2, w.j2, 6, w.u));
  CHECK(cyclic_index(w.i, w.j, 6, w.v) == cyclic_index(w.i2, w.j2, 6, w.v));

  for (std::size_t k = 1; k <= 8; ++k) {
    const std::vector<std::size_t> small_primes{2, 3, 5, 7};
    for (std::size_t c = 1; c <= 31; ++c) {
      bool coprime = true;
      for (std::size_t d = 2; d + 2 <= k; ++d)
        if (std::gcd(c, d) != 1) coprime = false;
      // Vacuous cases: a single block (c = 1) or fewer than two argument
      // pairs (k <= 2) are always valid.
      const bool expect_valid = c == 1 || k <= 2 || coprime;
      CAPTURE(c);
      CAPTURE(k);
      CHECK(validate_family(c, k).valid == expect_valid);
    }
  }
}

TEST_CASE("build_plan picks the largest triangular k and a coprime c") {
  CHECK(build_plan(100, 55).k == 10);
  CHECK(build_plan(100, 56).k == 10);
  CHECK(build_plan(100, 66).k == 11);

  const TrianglePlan plan = build_plan(100, 15);
  CHECK(plan.k == 5);
  CHECK(plan.q == 6);
  CHECK(plan.c == 19);
  CHECK(plan.l == 5);
  CHECK_FALSE(plan.fallback);

  // c < k-1 forces the fallback
  const TrianglePlan small = build_plan(12, 15);
  CHECK(small.fallback);
  CHECK(small.l == 12);
  CHECK(small.depth == 0);

  CHECK_THROWS_AS(build_plan(0, 15), std::invalid_argument);
  CHECK_THROWS_AS(build_plan(10, 2), std::invalid_argument);
}

TEST_CASE("plan gap and depth stay within the analysis bounds") {
  for (std::uint64_t s : {15ULL, 55ULL, 120ULL, 465ULL}) {
    for (std::size_t n : {5, 60, 95, 128, 470, 950, 2048}) {
      const TrianglePlan plan = build_plan(n, s);
      REQUIRE(plan.k * (plan.k + 1) / 2 <= s);
      if (!plan.fallback) {
        REQUIRE(n / plan.k >= plan.c);
        REQUIRE(n / plan.k - plan.c <= plan.q);  // g <= q
        REQUIRE(plan.l < plan.k * plan.q);
        const double levels =
            std::ceil(std::log(double(n)) / std::log(double(plan.k)));
        REQUIRE(static_cast<double>(plan.depth) <= levels);
      }
    }
  }
}

TEST_CASE("enumerate_block places one row per zone row") {
  const TrianglePlan plan = build_plan(95, 15);  // k=5, c=19
  const auto base = enumerate_block(plan, 0, 0);
  for (std::size_t u = 0; u < plan.k; ++u) REQUIRE(base[u] == u * plan.c);

  const auto block = enumerate_block(plan, 2, 3);
  REQUIRE(block.size() == plan.k);
  CHECK(block[0] == 3);            // f(0) = j
  CHECK(block[1] == plan.c + 2);   // contains element (i+c, j)
  for (std::size_t u = 0; u < plan.k; ++u) {
    REQUIRE(block[u] >= u * plan.c);
    REQUIRE(block[u] < (u + 1) * plan.c);
    if (u > 0) REQUIRE(block[u] > block[u - 1]);
  }
  CHECK_THROWS_AS(enumerate_block(plan, 19, 0), std::invalid_argument);
}

TEST_CASE("triangle blocks of all valid families are pairwise disjoint") {
  for (std::size_t k = 2; k <= 8; ++k) {
    for (std::size_t c = std::max<std::size_t>(2, k - 1); c <= 31; ++c) {
      if (!validate_family(c, k).valid) continue;
      TrianglePlan plan;
      plan.n = c * k;
      plan.k = k;
      plan.c = c;
      plan.tile = 1;
      std::vector<int> cover(plan.n * plan.n, 0);
      for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < c; ++j) {
          const auto rows = enumerate_block(plan, i, j);
          for (std::size_t u = 1; u < k; ++u)
            for (std::size_t v = 0; v < u; ++v) {
              int& cell = cover[rows[u] * plan.n + rows[v]];
              REQUIRE(cell == 0);  // disjointness
              cell = 1;
            }
        }
      // Coverage: every between-zone subdiagonal cell is hit.
      for (std::size_t zu = 1; zu < k; ++zu)
        for (std::size_t zv = 0; zv < zu; ++zv)
          for (std::size_t a = 0; a < c; ++a)
            for (std::size_t b = 0; b < c; ++b)
              REQUIRE(cover[(zu * c + a) * plan.n + (zv * c + b)] == 1);
    }
  }
}

TEST_CASE("the recursive partition covers the subdiagonal exactly once") {
  for (std::uint64_t s : {15ULL, 55ULL}) {
    for (std::size_t n = 1; n <= 500; n += (n < 40 ? 1 : 5)) {
      std::vector<std::uint8_t> cover(n * n, 0);
      test::walk_tbs_partition(0, n, s, [&](std::size_t i, std::size_t j) {
        REQUIRE(j < i);
        REQUIRE(i < n);
        REQUIRE(cover[i * n + j] == 0);
        cover[i * n + j] = 1;
      });
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) REQUIRE(cover[i * n + j] == 1);
    }
  }
}

TEST_CASE("tbs matches the reference and touches C exactly once") {
  for (const auto& [n, m, s] :
       {std::tuple<std::size_t, std::size_t, std::uint64_t>{2, 1, 3},
        {12, 4, 15},    // fallback region
        {95, 8, 15},    // k=5, c=19, l=0
        {100, 8, 15},   // strip of 5 rows
        {128, 16, 55},
        {64, 8, 120}}) {
    const Matrix a = random_dense(n, m, n * 31 + m);
    PackedTriangular c(n);
    IoLedger ledger(s);
    const TbsResult res = tbs(panel_of(a), tri_of(c), ledger);
    PackedTriangular want(n);
    reference_syrk(a, want);
    REQUIRE(test::rel_diff(c, want) <= 1e-9);
    REQUIRE(res.io.peak_resident <= s);
    REQUIRE(ledger.resident_count() == 0);
    REQUIRE(res.io.loads_c() == n * (n + 1) / 2);
    REQUIRE(res.block_loads_c == test::triangle_block_coverage(n, s, 1));
    REQUIRE(static_cast<double>(res.io.loads_a()) <=
            tbs_load_envelope(n, m, s));
  }
}

TEST_CASE("tbs A-traffic is exactly kM per block plus the recursion tail") {
  // N = c*k with the recursion falling back immediately: total A loads are
  // c^2 * kM for the blocks plus k single ooc sweeps over c rows.
  const std::size_t n = 95, m = 8;  // k=5, c=19, l=0
  IoLedger ledger(15);
  const TbsResult res = tbs(panel_shape(n, m), tri_shape(n), ledger);
  REQUIRE_FALSE(res.plan.fallback);
  REQUIRE(res.plan.c == 19);
  REQUIRE(res.plan.l == 0);
  const std::size_t t = tile_side_for(15);  // 3
  const std::uint64_t per_sub = 19ULL * m * ((19 + t - 1) / t);
  CHECK(res.io.loads_a() == 19ULL * 19 * 5 * m + 5 * per_sub);
  // Peak hits S exactly when S is triangular: k(k-1)/2 + k = 15.
  CHECK(res.io.peak_resident == 15);
}

TEST_CASE("tbs fallback delegates to ooc_syrk verbatim") {
  const std::size_t n = 12, m = 4;
  const std::uint64_t s = 15;
  REQUIRE(build_plan(n, s).fallback);
  IoLedger tbs_ledger(s);
  const TbsResult res = tbs(panel_shape(n, m), tri_shape(n), tbs_ledger);
  IoLedger ooc_ledger(s);
  const IoReport want = ooc_syrk(panel_shape(n, m), tri_shape(n), ooc_ledger);
  CHECK(res.io == want);
  CHECK(res.block_loads_c == 0);
}

TEST_CASE("tbs count mode equals compute mode") {
  const std::size_t n = 100, m = 8;
  const std::uint64_t s = 15;
  const Matrix a = random_dense(n, m, 77);
  PackedTriangular c(n);
  IoLedger compute_ledger(s);
  const TbsResult computed = tbs(panel_of(a), tri_of(c), compute_ledger);
  IoLedger count_ledger(s);
  const TbsResult counted = tbs(panel_shape(n, m), tri_shape(n), count_ledger);
  CHECK(computed.io == counted.io);
  CHECK(computed.block_loads_c == counted.block_loads_c);
}

TEST_CASE("tbs subtracting accumulation mirrors the additive result") {
  const std::size_t n = 40, m = 6;
  const Matrix a = random_dense(n, m, 5);
  PackedTriangular plus(n), minus(n);
  IoLedger l1(15), l2(15);
  tbs(panel_of(a), tri_of(plus), l1, 1.0);
  tbs(panel_of(a), tri_of(minus), l2, -1.0);
  for (std::size_t i = 0; i < plus.size(); ++i)
    REQUIRE(plus.data()[i] == doctest::Approx(-minus.data()[i]));
}

TEST_CASE("tbs_tiled with b=1 is identical to tbs") {
  for (const auto& [n, m, s] :
       {std::tuple<std::size_t, std::size_t, std::uint64_t>{95, 8, 15},
        {64, 8, 55},
        {100, 4, 120}}) {
    IoLedger l1(s), l2(s);
    const TbsResult scalar = tbs(panel_shape(n, m), tri_shape(n), l1);
    const TbsResult tiled = tbs_tiled(panel_shape(n, m), tri_shape(n), 1, l2);
    REQUIRE(scalar.io == tiled.io);
    REQUIRE(scalar.block_loads_c == tiled.block_loads_c);
    REQUIRE(scalar.plan.k == tiled.plan.k);
  }
}

TEST_CASE("tbs_tiled A-traffic is kbM per block plus the recursion tail") {
  // N = c*k*b with c=5, k=4, b=10 and an immediately-falling-back
  // recursion: blocks load c^2 * k*b*M, each of the k sub-sweeps loads
  // 50*M*ceil(50/t) with t = 29 for S = 900.
  const std::size_t n = 200, m = 3, b = 10;
  IoLedger ledger(900);
  const TbsResult res = tbs_tiled(panel_shape(n, m), tri_shape(n), b, ledger);
  REQUIRE_FALSE(res.plan.fallback);
  REQUIRE(res.plan.k == 4);
  REQUIRE(res.plan.c == 5);
  REQUIRE(res.plan.l == 0);
  CHECK(res.io.loads_a() == 25 * 4 * b * m + 4 * (50 * m * 2));
}

TEST_CASE("tbs_tiled with the largest tile degenerates to single-tile blocks") {
  // b = floor(sqrt(S)) leaves room for k = 2 exactly when b^2 + 2b <= S.
  CHECK(build_plan_tiled(16, 8, 2).k == 2);
  const Matrix a = random_dense(16, 4, 7);
  PackedTriangular c(16);
  IoLedger ledger(8);
  const TbsResult res = tbs_tiled(panel_of(a), tri_of(c), 2, ledger);
  PackedTriangular want(16);
  reference_syrk(a, want);
  REQUIRE(test::rel_diff(c, want) <= 1e-9);
  CHECK(res.io.peak_resident == 8);  // one 2x2 tile plus two slivers
}

TEST_CASE("tbs_tiled plan and numerics") {
  // With S=900 and b=10, k(k-1)/2 tiles of 100 elements plus k slivers of
  // 10 give k = 4.
  CHECK(build_plan_tiled(1000, 900, 10).k == 4);
  CHECK_THROWS_AS(build_plan_tiled(100, 100, 11), std::invalid_argument);

  for (const auto& [n, m, s, b] :
       {std::tuple<std::size_t, std::size_t, std::uint64_t, std::size_t>{
            60, 8, 15, 2},
        {90, 8, 55, 3},
        {120, 16, 120, 4},
        {3, 2, 900, 10},  // matrix smaller than one tile
        {240, 8, 900, 10}}) {
    const Matrix a = random_dense(n, m, n + b);
    PackedTriangular c(n);
    IoLedger ledger(s);
    const TbsResult res = tbs_tiled(panel_of(a), tri_of(c), b, ledger);
    PackedTriangular want(n);
    reference_syrk(a, want);
    REQUIRE(test::rel_diff(c, want) <= 1e-9);
    REQUIRE(res.io.peak_resident <= s);
    REQUIRE(res.io.loads_c() == n * (n + 1) / 2);
    REQUIRE(res.block_loads_c == test::triangle_block_coverage(n, s, b));
  }
}
