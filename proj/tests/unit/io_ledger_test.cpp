#include <doctest.h>

#include <set>
#include <vector>

#include "symk/io_ledger.hpp"
#include "symk/matrix.hpp"

using namespace symk;

TEST_CASE("load counts fresh elements and ignores resident touches") {
  IoLedger ledger(2);
  ledger.load({matrix_a, 0});
  CHECK(ledger.snapshot().loads == 1);
  ledger.load({matrix_a, 0});  // resident touch is free
  CHECK(ledger.snapshot().loads == 1);
  ledger.load({matrix_a, 1});
  CHECK(ledger.snapshot().loads == 2);
  CHECK_THROWS_AS(ledger.load({matrix_a, 2}), CapacityError);
  // The failed load must not corrupt the counters or the resident set.
  CHECK(ledger.snapshot().loads == 2);
  CHECK(ledger.resident_count() == 2);
}

TEST_CASE("evict removes residency and counts dirty write-backs") {
  IoLedger ledger(4);
  ledger.load({matrix_a, 7});
  ledger.load({matrix_c, 7});
  ledger.evict({matrix_a, 7}, false);
  CHECK(ledger.snapshot().stores == 0);
  CHECK(ledger.resident_count() == 1);
  ledger.evict({matrix_c, 7}, true);
  CHECK(ledger.snapshot().stores == 1);
  CHECK_THROWS_AS(ledger.evict({matrix_c, 7}, true), ResidencyError);
}

TEST_CASE("require_resident names the missing operand") {
  IoLedger ledger(4);
  ledger.load({matrix_a, 3});
  ledger.require_resident({ElementAddr{matrix_a, 3}});
  ledger.require_resident(std::span<const ElementAddr>{});  // empty is fine
  try {
    ledger.require_resident({ElementAddr{matrix_a, 3}, ElementAddr{matrix_c, 9}});
    FAIL("expected ResidencyError");
  } catch (const ResidencyError& e) {
    CHECK(std::string(e.what()).find("9") != std::string::npos);
  }
}

TEST_CASE("snapshot reflects the counter history") {
  IoLedger ledger(8);
  auto fresh = ledger.snapshot();
  CHECK(fresh.loads == 0);
  CHECK(fresh.stores == 0);
  CHECK(fresh.peak_resident == 0);
  ledger.load({matrix_a, 0});
  CHECK(ledger.snapshot().loads == 1);
  ledger.evict({matrix_a, 0}, true);
  const auto after = ledger.snapshot();
  CHECK(after.loads == 1);
  CHECK(after.stores == 1);
  CHECK(after.peak_resident == 1);
}

TEST_CASE("per-matrix load counters are tracked separately") {
  IoLedger ledger(8);
  ledger.load({matrix_a, 0});
  ledger.load({matrix_a, 1});
  ledger.load({matrix_c, 0});
  const auto rep = ledger.snapshot();
  CHECK(rep.loads_a() == 2);
  CHECK(rep.loads_c() == 1);
  CHECK(rep.csv_row("x", 4, 2, 8) == "x,4,2,8,2,1,0,3");
}

TEST_CASE("replaying a recorded trace reproduces its counters exactly") {
  // Drive the ledger with a random valid schedule against a model set;
  // counters must equal the model's tally at every step.
  SplitMix64 rng(2024);
  for (int round = 0; round < 20; ++round) {
    const std::uint64_t cap = 1 + rng.next() % 40;
    IoLedger ledger(cap);
    std::set<std::uint64_t> model;
    std::uint64_t model_loads = 0, model_stores = 0, model_peak = 0;
    for (int step = 0; step < 2000; ++step) {
      const std::uint64_t offset = rng.next() % 64;
      const ElementAddr addr{matrix_a, offset};
      const bool want_load = rng.next() % 2 == 0;
      if (want_load) {
        if (model.count(offset)) {
          ledger.load(addr);  // free touch
        } else if (model.size() < cap) {
          ledger.load(addr);
          model.insert(offset);
          ++model_loads;
        } else {
          CHECK_THROWS_AS(ledger.load(addr), CapacityError);
        }
      } else if (!model.empty()) {
        // Evict a pseudo-random resident element.
        auto it = model.begin();
        std::advance(it, rng.next() % model.size());
        const bool dirty = rng.next() % 2 == 0;
        ledger.evict({matrix_a, *it}, dirty);
        model.erase(it);
        if (dirty) ++model_stores;
      }
      model_peak = std::max<std::uint64_t>(model_peak, model.size());
      REQUIRE(ledger.resident_count() == model.size());
      REQUIRE(ledger.resident_count() <= cap);
    }
    const auto rep = ledger.snapshot();
    CHECK(rep.loads == model_loads);
    CHECK(rep.stores == model_stores);
    CHECK(rep.peak_resident == model_peak);
  }
}

TEST_CASE("delta subtracts counters and keeps the running peak") {
  IoLedger ledger(4);
  ledger.load({matrix_a, 0});
  const auto mid = ledger.snapshot();
  ledger.load({matrix_c, 1});
  ledger.evict({matrix_c, 1}, true);
  const auto d = delta(ledger.snapshot(), mid);
  CHECK(d.loads == 1);
  CHECK(d.stores == 1);
  CHECK(d.loads_a() == 0);
  CHECK(d.loads_c() == 1);
  CHECK(d.peak_resident == 2);
}
