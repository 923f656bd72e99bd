// Copyright 2026 The hcsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <limits>

#include "hcsim/hgreedy.hpp"

using namespace hcsim;

namespace {

struct Rig {
  HybridStore store;
  SimMetrics metrics;
  Accountant acct{store, metrics};

  Rig(std::uint64_t dram, std::uint64_t nvm, std::size_t banks = 1) : store(layout(dram, nvm, banks)) {}

  static HybridStore::Layout layout(std::uint64_t dram, std::uint64_t nvm, std::size_t banks) {
    HybridStore::Layout l;
    l.dram_capacity = dram;
    l.nvm_capacity = nvm;
    l.banks = banks;
    return l;
  }
};

PolicyConfig quiet_config(double h = 1.0) {
  PolicyConfig c;
  c.h = h;
  c.delta = 1'000'000;
  c.tau_seconds = std::numeric_limits<double>::infinity();
  return c;
}

ContentStats stats_of(Key key, std::uint64_t size, double reads, double writes) {
  ContentStats s;
  s.key = key;
  s.size = size;
  s.reads = reads;
  s.writes = writes;
  return s;
}

RequestEvent event(double t, Op op, Key key, std::uint64_t size) {
  return RequestEvent{static_cast<std::uint64_t>(std::llround(t * 1e9)), op, key, size};
}

}  // namespace

TEST_CASE("get_rank") {
  SUBCASE("unit case") {
    for (double h : {0.0, 0.5, 1.0, 2.0}) {
      const RankPair r = get_rank(1, 1, kMB, h);
      CHECK(r.dram == doctest::Approx(1.0));
      CHECK(r.nvm == doctest::Approx(1.0));
    }
  }
  SUBCASE("p=8 w=2 s=4MB h=1") {
    const RankPair r = get_rank(8, 2, 4 * kMB, 1.0);
    CHECK(r.dram == doctest::Approx(4.0));
    CHECK(r.nvm == doctest::Approx(1.0));
  }
  SUBCASE("h=0 is write-blind") {
    const RankPair r = get_rank(6, 9, 3 * kMB, 0.0);
    CHECK(r.dram == doctest::Approx(2.0));
    CHECK(r.nvm == doctest::Approx(2.0));
  }
  SUBCASE("zero counters are clamped to one") {
    const RankPair r = get_rank(0, 0, 2 * kMB, 2.0);
    CHECK(r.dram == doctest::Approx(0.5));
    CHECK(r.nvm == doctest::Approx(0.5));
  }
  SUBCASE("stats overload and size unit") {
    const RankPair r = get_rank(stats_of(1, 4000, 8, 2), 1.0, 1000.0);
    CHECK(r.dram == doctest::Approx(4.0));
    CHECK(r.nvm == doctest::Approx(1.0));
  }
}

TEST_CASE("threshold update") {
  CHECK(threshold_for(0.3, 0.5) == 0.0);
  CHECK(threshold_for(0.7, 0.5) == 0.7);
  CHECK(threshold_for(0.5, 0.5) == 0.5);
  CHECK(threshold_for(0.0, 0.5) == 0.0);
  CHECK(threshold_for(1.0, 0.5) == 1.0);
}

TEST_CASE("rank-threshold product") {
  Tier t(TierId::Dram, 100, 1, DeviceParams::dram());
  CHECK(rank_threshold_product(t) == 0.0);
  t.admit(1, 60, 3.0);
  t.set_threshold(0.0);
  CHECK(rank_threshold_product(t) == 0.0);
  t.set_threshold(0.6);
  CHECK(rank_threshold_product(t) == doctest::Approx(1.8));
}

TEST_CASE("policy config validation") {
  PolicyConfig c;
  CHECK_NOTHROW(c.validate());
  c.delta = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = PolicyConfig{};
  c.h = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = PolicyConfig{};
  c.tau_seconds = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("allocate_store") {
  SUBCASE("empty DRAM admits any positive-rank content") {
    Rig rig(20 * kMB, 20 * kMB);
    HGreedy hg(rig.store, rig.acct, quiet_config());
    hg.restore_stats(stats_of(1, 4 * kMB, 0, 0));
    CHECK(hg.allocate_store(1) == TierId::Dram);
  }
  SUBCASE("DRAM product too high, NVM passes") {
    Rig rig(20 * kMB, 20 * kMB);
    rig.store.admit(TierId::Dram, 100, 10 * kMB, 10.0);  // t_A = 0.5, r_A = 10
    rig.store.admit(TierId::Nvm, 200, 10 * kMB, 1.0);    // t_B = 0.5, r_B = 1
    HGreedy hg(rig.store, rig.acct, quiet_config(1.0));
    hg.update_thresholds();
    CHECK(rank_threshold_product(rig.store.dram()) == doctest::Approx(5.0));
    CHECK(rank_threshold_product(rig.store.nvm()) == doctest::Approx(0.5));
    hg.restore_stats(stats_of(1, 4 * kMB, 8, 2));
    CHECK(hg.rank_of(1).dram == doctest::Approx(4.0));
    CHECK(hg.rank_of(1).nvm == doctest::Approx(1.0));
    CHECK(hg.allocate_store(1) == TierId::Nvm);
    CHECK_FALSE(rig.store.cached(1));  // allocate_store does not admit
  }
  SUBCASE("both tests fail") {
    Rig rig(20 * kMB, 20 * kMB);
    rig.store.admit(TierId::Dram, 100, 10 * kMB, 10.0);
    rig.store.admit(TierId::Nvm, 200, 10 * kMB, 10.0);
    HGreedy hg(rig.store, rig.acct, quiet_config(1.0));
    hg.update_thresholds();
    hg.restore_stats(stats_of(1, 4 * kMB, 8, 2));
    CHECK(hg.allocate_store(1) == TierId::Hdd);
  }
  SUBCASE("free space is required") {
    Rig rig(5 * kMB, 5 * kMB);
    HGreedy hg(rig.store, rig.acct, quiet_config());
    hg.restore_stats(stats_of(1, 6 * kMB, 100, 0));
    CHECK(hg.allocate_store(1) == TierId::Hdd);
  }
  SUBCASE("unknown key") {
    Rig rig(5 * kMB, 5 * kMB);
    HGreedy hg(rig.store, rig.acct, quiet_config());
    CHECK(hg.allocate_store(42) == TierId::Hdd);
  }
}

TEST_CASE("run_evictions") {
  SUBCASE("DRAM resident below the DRAM product and above the NVM product moves to NVM") {
    Rig rig(20 * kMB, 20 * kMB);
    rig.store.admit(TierId::Dram, 100, 10 * kMB, 10.0);
    rig.store.admit(TierId::Dram, 1, 4 * kMB, 8.0);  // recorded rank is stale
    HGreedy hg(rig.store, rig.acct, quiet_config());
    hg.restore_stats(stats_of(100, 10 * kMB, 100, 1));
    hg.restore_stats(stats_of(1, 4 * kMB, 1, 1));  // k_A = k_B = 0.25
    const auto moves = hg.run_evictions({1});
    REQUIRE(moves.size() == 1);
    CHECK(moves[0] == Migration{1, TierId::Dram, TierId::Nvm});
    CHECK(rig.store.locate(1) == TierId::Nvm);
    CHECK(rig.metrics.migrations == 1);
    CHECK(rig.store.nvm().bytes_written() == 4 * kMB);
  }
  SUBCASE("NVM resident below both products goes to HDD") {
    Rig rig(20 * kMB, 20 * kMB);
    rig.store.admit(TierId::Dram, 100, 10 * kMB, 10.0);
    rig.store.admit(TierId::Nvm, 200, 10 * kMB, 10.0);
    rig.store.admit(TierId::Nvm, 2, 4 * kMB, 8.0);
    HGreedy hg(rig.store, rig.acct, quiet_config());
    hg.restore_stats(stats_of(2, 4 * kMB, 1, 1));
    const auto moves = hg.run_evictions({2});
    REQUIRE(moves.size() == 1);
    CHECK(moves[0] == Migration{2, TierId::Nvm, TierId::Hdd});
    CHECK_FALSE(rig.store.cached(2));
  }
  SUBCASE("no evictions while thresholds are zero") {
    Rig rig(100 * kMB, 100 * kMB);
    HGreedy hg(rig.store, rig.acct, quiet_config());
    for (Key k = 1; k <= 4; ++k) {
      hg.on_request(event(static_cast<double>(k), Op::Get, k, 10 * kMB));
    }
    REQUIRE(rig.store.dram().utilization() < 0.5);
    CHECK(hg.run_evictions({1, 2, 3, 4}).empty());
  }
  SUBCASE("recorded ranks are refreshed after the pass") {
    Rig rig(20 * kMB, 20 * kMB);
    rig.store.admit(TierId::Dram, 1, 4 * kMB, 8.0);
    HGreedy hg(rig.store, rig.acct, quiet_config());
    hg.restore_stats(stats_of(1, 4 * kMB, 2, 1));
    hg.run_evictions({1});
    CHECK(rig.store.dram().min_rank() == doctest::Approx(0.5));
  }
  SUBCASE("a displaced DRAM resident cascades instead of vanishing") {
    // DRAM is full of one weak resident; a strong NVM resident is promoted and
    // the weak one drops to NVM.
    Rig rig(10 * kMB, 40 * kMB);
    rig.store.admit(TierId::Dram, 1, 10 * kMB, 0.1);
    rig.store.admit(TierId::Nvm, 2, 10 * kMB, 0.5);
    HGreedy hg(rig.store, rig.acct, quiet_config(1.0));
    hg.restore_stats(stats_of(1, 10 * kMB, 1, 1));
    hg.restore_stats(stats_of(2, 10 * kMB, 50, 10));
    const auto moves = hg.run_evictions({2});
    CHECK(rig.store.locate(2) == TierId::Dram);
    CHECK(rig.store.locate(1) == TierId::Nvm);
    CHECK(moves.size() == 2);
    CHECK_NOTHROW(rig.store.check_invariants());
  }
}

TEST_CASE("on_request") {
  Rig rig(100 * kMB, 100 * kMB);
  HGreedy hg(rig.store, rig.acct, quiet_config());

  SUBCASE("first GET of an unknown key") {
    hg.on_request(event(1, Op::Get, 5, kMB));
    const auto s = hg.stats(5);
    REQUIRE(s.has_value());
    CHECK(s->reads == 1.0);
    CHECK(s->writes == 0.0);
    CHECK(rig.store.locate(5) == TierId::Dram);
    CHECK(rig.metrics.at(ServedBy::Miss).reads == 1);
    CHECK(rig.metrics.fills == 1);
    CHECK(rig.metrics.compulsory_misses == 1);
  }
  SUBCASE("PUT on a resident key writes in place") {
    hg.on_request(event(1, Op::Get, 5, kMB));
    const auto written = rig.store.dram().bytes_written();
    hg.on_request(event(2, Op::Put, 5, kMB));
    CHECK(hg.stats(5)->writes == 1.0);
    CHECK(rig.metrics.at(ServedBy::Dram).writes == 1);
    CHECK(rig.store.dram().bytes_written() == written + kMB);
  }
  SUBCASE("DELETE on a resident key evicts it") {
    hg.on_request(event(1, Op::Get, 5, kMB));
    hg.on_request(event(2, Op::Delete, 5, kMB));
    CHECK_FALSE(rig.store.cached(5));
    CHECK(rig.metrics.at(ServedBy::Dram).writes == 1);
    CHECK(hg.stats(5)->writes == 1.0);
    // A read after the delete is a fresh miss.
    hg.on_request(event(3, Op::Get, 5, kMB));
    CHECK(rig.metrics.at(ServedBy::Miss).reads == 2);
    CHECK(rig.metrics.compulsory_misses == 2);
  }
  SUBCASE("PUT on an unknown key lands in the chosen tier") {
    hg.on_request(event(1, Op::Put, 9, kMB));
    CHECK(rig.store.locate(9) == TierId::Dram);
    CHECK(rig.metrics.at(ServedBy::Dram).writes == 1);
    CHECK(rig.metrics.fills == 0);
  }
  SUBCASE("DELETE of an uncached key allocates nothing") {
    hg.on_request(event(1, Op::Delete, 9, kMB));
    CHECK_FALSE(rig.store.cached(9));
    CHECK(rig.metrics.at(ServedBy::Miss).writes == 1);
  }
  SUBCASE("delete weight") {
    PolicyConfig c = quiet_config();
    c.delete_weight = 0.25;
    Rig r2(100 * kMB, 100 * kMB);
    HGreedy h2(r2.store, r2.acct, c);
    h2.on_request(event(1, Op::Delete, 3, kMB));
    CHECK(h2.stats(3)->writes == 0.25);
  }
  CHECK(rig.metrics.conserved());
}

TEST_CASE("eviction passes run every delta requests") {
  Rig rig(100 * kMB, 100 * kMB);
  PolicyConfig c = quiet_config();
  c.delta = 3;
  HGreedy hg(rig.store, rig.acct, c);
  for (int i = 1; i <= 7; ++i) hg.on_request(event(i, Op::Get, static_cast<Key>(i), kMB));
  CHECK(rig.metrics.eviction_passes == 2);
  CHECK(hg.pending().size() == 1);
}

TEST_CASE("periodic reset") {
  Rig rig(100 * kMB, 100 * kMB);
  HGreedy hg(rig.store, rig.acct, quiet_config());
  hg.on_request(event(1, Op::Get, 1, kMB));
  hg.on_request(event(2, Op::Put, 2, kMB));
  REQUIRE(rig.store.cached(1));
  REQUIRE(rig.store.cached(2));

  CHECK(hg.periodic_reset(10).empty());  // both touched in [0, 10)
  CHECK(hg.stats(1)->reads == 0.0);
  CHECK(hg.stats(2)->writes == 0.0);
  CHECK(rig.store.cached(1));
  CHECK(hg.last_reset() == 10.0);

  hg.on_request(event(15, Op::Get, 1, kMB));
  const auto cold = hg.periodic_reset(20);
  REQUIRE(cold.size() == 1);
  CHECK(cold[0] == 2);
  CHECK_FALSE(rig.store.cached(2));
  CHECK(rig.store.cached(1));
  CHECK(rig.metrics.cold_evictions == 1);
  CHECK(rig.metrics.resets == 2);
}

TEST_CASE("reset fires from on_request after tau") {
  Rig rig(100 * kMB, 100 * kMB);
  PolicyConfig c = quiet_config();
  c.tau_seconds = 10.0;
  HGreedy hg(rig.store, rig.acct, c);
  hg.on_request(event(1, Op::Get, 1, kMB));
  hg.on_request(event(9, Op::Get, 2, kMB));
  CHECK(rig.metrics.resets == 0);
  hg.on_request(event(10, Op::Get, 3, kMB));
  CHECK(rig.metrics.resets == 1);
}

TEST_CASE("infinite tau never resets") {
  Rig rig(100 * kMB, 100 * kMB);
  HGreedy hg(rig.store, rig.acct, quiet_config());
  for (int i = 0; i < 1000; ++i) hg.on_request(event(i * 1e4, Op::Get, static_cast<Key>(i % 7), kMB));
  CHECK(rig.metrics.resets == 0);
  CHECK(hg.stats(0)->reads == 143.0);
}

TEST_CASE("offline profile") {
  SUBCASE("three GETs on one key") {
    Trace t{{1, Op::Get, 4, 10}, {2, Op::Get, 4, 10}, {3, Op::Get, 4, 10}};
    const auto p = build_offline_profile(t);
    REQUIRE(p.totals.size() == 1);
    CHECK(p.totals.at(4).reads == 3);
    CHECK(p.totals.at(4).writes == 0);
  }
  SUBCASE("empty trace") { CHECK(build_offline_profile({}).totals.empty()); }
  SUBCASE("mixed trace matches a separate count") {
    Trace t;
    const Op ops[] = {Op::Get, Op::Put, Op::Delete, Op::Get, Op::Get, Op::Put, Op::Get, Op::Delete, Op::Get, Op::Put};
    for (int i = 0; i < 10; ++i) t.push_back({static_cast<std::uint64_t>(i), ops[i], static_cast<Key>(i % 3), 10});
    const auto p = build_offline_profile(t);
    std::uint64_t reads[3] = {};
    std::uint64_t writes[3] = {};
    for (const auto& ev : t) (ev.op == Op::Get ? reads : writes)[ev.key]++;
    for (Key k = 0; k < 3; ++k) {
      CHECK(p.totals.at(k).reads == reads[k]);
      CHECK(p.totals.at(k).writes == writes[k]);
    }
    CHECK(p.total_reads() == 5);
    CHECK(p.total_writes() == 5);
  }
}

TEST_CASE("offline and online agree when every key is requested once") {
  Trace t;
  for (Key k = 1; k <= 400; ++k) {
    const Op op = k % 5 == 0 ? Op::Put : Op::Get;
    t.push_back({k * 1000, op, k, (k % 7 + 1) * kMB / 2});
  }
  const auto profile = build_offline_profile(t);
  Rig on_rig(20 * kMB, 60 * kMB, 4);
  Rig off_rig(20 * kMB, 60 * kMB, 4);
  PolicyConfig c = quiet_config(1.0);
  c.delta = 10;
  HGreedy online(on_rig.store, on_rig.acct, c);
  HGreedy offline(off_rig.store, off_rig.acct, c, profile);
  for (const auto& ev : t) {
    online.on_request(ev);
    offline.on_request(ev);
    for (Key k = 1; k <= ev.key; ++k) REQUIRE(on_rig.store.locate(k) == off_rig.store.locate(k));
  }
  CHECK(on_rig.metrics == off_rig.metrics);
}

TEST_CASE("a dominant key stays in DRAM under the offline ranks") {
  Trace t;
  std::uint64_t ts = 0;
  for (int i = 0; i < 2000; ++i) {
    t.push_back({++ts, Op::Get, 1, 2 * kMB});
    t.push_back({++ts, i % 4 == 0 ? Op::Put : Op::Get, static_cast<Key>(2 + i % 300), 2 * kMB});
  }
  const auto profile = build_offline_profile(t);
  Rig rig(7 * kMB, 30 * kMB, 2);
  PolicyConfig c = quiet_config(1.0);
  c.delta = 16;
  HGreedy hg(rig.store, rig.acct, c, profile);
  for (const auto& ev : t) {
    hg.on_request(ev);
    REQUIRE(rig.store.locate(1) == TierId::Dram);
  }
  CHECK(hg.name() == "hgreedy-offline");
}
