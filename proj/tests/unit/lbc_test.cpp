#include <doctest.h>

#include <array>
#include <cmath>
#include <tuple>

#include "symk/lbc.hpp"
#include "symk/ooc.hpp"
#include "symk/tbs.hpp"
#include "test_support.hpp"

using namespace symk;

TEST_CASE("choose_block_size is floor(sqrt(N))") {
  CHECK(choose_block_size(1) == 1);
  CHECK(choose_block_size(100) == 10);
  CHECK(choose_block_size(1000) == 31);
}

TEST_CASE("lbc on a scalar") {
  PackedTriangular a(1);
  a.at(0, 0) = 4;
  IoLedger ledger(3);
  const LbcResult res = lbc(tri_of(a, matrix_a), ledger);
  CHECK(a.at(0, 0) == 2);
  CHECK(res.block == 1);
  CHECK(res.iterations.size() == 1);
}

TEST_CASE("a single iteration degenerates to ooc_chol") {
  const std::size_t n = 24;
  const std::uint64_t s = 55;
  const PackedTriangular spd = random_spd(n, 3);

  PackedTriangular via_lbc = spd;
  IoLedger l1(s);
  const LbcResult res = lbc(tri_of(via_lbc, matrix_a), l1, n);

  PackedTriangular via_occ = spd;
  IoLedger l2(s);
  const IoReport want = ooc_chol(tri_of(via_occ, matrix_a), l2);

  CHECK(res.io == want);
  for (std::size_t i = 0; i < spd.size(); ++i)
    REQUIRE(via_lbc.data()[i] == via_occ.data()[i]);
}

TEST_CASE("lbc factors random SPD matrices for every block choice") {
  for (const auto& [n, s, b] :
       {std::tuple<std::size_t, std::uint64_t, std::size_t>{17, 15, 0},
        {64, 55, 0},
        {64, 55, 5},
        {100, 120, 25},
        {256, 120, 0}}) {
    const PackedTriangular a = random_spd(n, n + s);
    PackedTriangular work = a;
    IoLedger ledger(s);
    const LbcResult res =
        lbc(tri_of(work, matrix_a), ledger,
            b ? std::optional<std::size_t>(b) : std::nullopt);
    REQUIRE(res.io.peak_resident <= s);
    REQUIRE(test::reconstruction_rel_error(work, a) <= 1e-9);
    const PackedTriangular want = reference_cholesky(a);
    REQUIRE(test::rel_diff(work, want) <= 1e-9);
  }
}

TEST_CASE("lbc at N=256 stays inside the four-term load envelope") {
  const std::size_t n = 256;
  const std::uint64_t s = 120;
  PackedTriangular a = random_spd(n, 42);
  IoLedger ledger(s);
  const LbcResult res = lbc(tri_of(a, matrix_a), ledger);
  CHECK(res.block == 16);
  CHECK(static_cast<double>(res.io.loads) <=
        lbc_load_envelope(n, s, res.block));
  CHECK(test::reconstruction_rel_error(a, random_spd(n, 42)) <= 1e-9);
}

TEST_CASE("per-iteration deltas respect the sub-kernel envelopes") {
  // N=400 exercises the factor-resident trsm path (b=20), N=900 the tiled
  // one (b=30, 960 > S).
  for (std::size_t n : {400, 900}) {
    const std::uint64_t s = 465;
    IoLedger ledger(s);
    const LbcResult res = lbc(tri_shape(n, matrix_a), ledger);
    const double t = static_cast<double>(tile_side_for(s));
    for (const LbcIteration& it : res.iterations) {
      const double b = static_cast<double>(it.block);
      const double trail = static_cast<double>(it.trailing);
      CHECK(static_cast<double>(it.chol.loads) <=
            b * b * b / (3.0 * t) + 4.0 * b * b);
      if (it.trailing == 0) continue;
      CHECK(static_cast<double>(it.trsm.loads) <=
            b * b * trail / t + 4.0 * b * trail + 2.0 * t * (b + trail) +
                b * b);
      // TBS delta: A-traffic envelope plus the one-touch C load of the
      // trailing triangle.
      CHECK(static_cast<double>(it.tbs.loads) <=
            tbs_load_envelope(it.trailing, it.block, s) +
                trail * (trail + 1) / 2);
    }
  }
}

TEST_CASE("lbc count mode equals compute mode") {
  const std::size_t n = 120;
  const std::uint64_t s = 55;
  PackedTriangular a = random_spd(n, 9);
  IoLedger l1(s);
  const LbcResult computed = lbc(tri_of(a, matrix_a), l1);
  IoLedger l2(s);
  const LbcResult counted = lbc(tri_shape(n, matrix_a), l2);
  CHECK(computed.io == counted.io);
  REQUIRE(computed.iterations.size() == counted.iterations.size());
  for (std::size_t i = 0; i < computed.iterations.size(); ++i) {
    CHECK(computed.iterations[i].tbs == counted.iterations[i].tbs);
    CHECK(computed.iterations[i].trsm == counted.iterations[i].trsm);
    CHECK(computed.iterations[i].chol == counted.iterations[i].chol);
  }
}

TEST_CASE("lbc propagates the failing pivot with its global column") {
  PackedTriangular bad(50);
  for (std::size_t i = 0; i < 50; ++i) bad.at(i, i) = 1;
  bad.at(37, 37) = -4;
  IoLedger ledger(55);
  try {
    lbc(tri_of(bad, matrix_a), ledger);
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.column() == 37);
  }
}
