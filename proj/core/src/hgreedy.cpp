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

#include "hcsim/hgreedy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hcsim {

void PolicyConfig::validate() const {
  if (!(h >= 0.0)) throw ConfigError("policy.h must be >= 0");
  if (delta == 0) throw ConfigError("policy.delta must be >= 1");
  if (tau_seconds && !(*tau_seconds > 0.0)) throw ConfigError("policy.tau_seconds must be > 0");
  if (!(threshold_knee >= 0.0 && threshold_knee <= 1.0)) throw ConfigError("policy.threshold_knee must lie in [0,1]");
  if (!(delete_weight >= 0.0)) throw ConfigError("policy.delete_weight must be >= 0");
  if (!(rank_size_unit > 0.0)) throw ConfigError("policy.rank_size_unit must be > 0");
}

RankPair get_rank(double reads, double writes, std::uint64_t size, double h, double size_unit) {
  const double p = std::max(reads, 1.0);
  const double w = std::max(writes, 1.0);
  const double s = static_cast<double>(size) / size_unit;
  const double wh = std::pow(w, h);
  return {p * wh / s, p / (wh * s)};
}

RankPair get_rank(const ContentStats& stats, double h, double size_unit) {
  return get_rank(stats.reads, stats.writes, stats.size, h, size_unit);
}

double threshold_for(double utilization, double knee) { return utilization < knee ? 0.0 : utilization; }

double rank_threshold_product(const Tier& tier) {
  if (tier.empty() || tier.threshold() == 0.0) return 0.0;
  return tier.threshold() * tier.min_rank();
}

std::uint64_t OfflineProfile::total_reads() const {
  std::uint64_t n = 0;
  for (const auto& [key, t] : totals) n += t.reads;
  return n;
}

std::uint64_t OfflineProfile::total_writes() const {
  std::uint64_t n = 0;
  for (const auto& [key, t] : totals) n += t.writes;
  return n;
}

OfflineProfile build_offline_profile(const Trace& trace) {
  OfflineProfile profile;
  for (const auto& ev : trace) {
    auto& t = profile.totals[ev.key];
    if (ev.op == Op::Get) {
      ++t.reads;
    } else {
      ++t.writes;
    }
  }
  return profile;
}

// ---------------------------------------------------------------------------

HGreedy::HGreedy(HybridStore& store, Accountant& accountant, PolicyConfig config)
    : store_(store), acct_(accountant), config_(config) {
  config_.validate();
  tau_ = config_.tau_seconds.value_or(std::numeric_limits<double>::infinity());
  update_thresholds();
}

HGreedy::HGreedy(HybridStore& store, Accountant& accountant, PolicyConfig config, const OfflineProfile& profile)
    : HGreedy(store, accountant, config) {
  offline_ = &profile;
  tau_ = std::numeric_limits<double>::infinity();
}

HGreedy::Entry& HGreedy::entry_for(Key key, std::uint64_t size) {
  auto [it, inserted] = entries_.try_emplace(key);
  if (inserted) it->second.size = size;
  return it->second;
}

void HGreedy::mark_pending(Key key, Entry& e) {
  if (e.pending) return;
  e.pending = true;
  pending_.push_back(key);
}

RankPair HGreedy::rank_of(Key key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return {};
  const Entry& e = it->second;
  if (offline_ != nullptr) {
    auto t = offline_->totals.find(key);
    const double reads = t == offline_->totals.end() ? 0.0 : static_cast<double>(t->second.reads);
    const double writes = t == offline_->totals.end() ? 0.0 : static_cast<double>(t->second.writes);
    return get_rank(reads, writes, e.size, config_.h, config_.rank_size_unit);
  }
  return get_rank(e.reads, e.writes, e.size, config_.h, config_.rank_size_unit);
}

std::optional<ContentStats> HGreedy::stats(Key key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  const Entry& e = it->second;
  return ContentStats{key, e.size, e.reads, e.writes, e.last_access, store_.locate(key)};
}

void HGreedy::restore_stats(const ContentStats& stats) {
  Entry& e = entry_for(stats.key, stats.size);
  e.size = stats.size;
  e.reads = stats.reads;
  e.writes = stats.writes;
  e.last_access = stats.last_access;
}

void HGreedy::update_thresholds() {
  for (TierId id : {TierId::Dram, TierId::Nvm}) {
    Tier& t = store_.tier(id);
    t.set_threshold(threshold_for(t.utilization(), config_.threshold_knee));
  }
}

void HGreedy::on_request(const RequestEvent& ev) {
  const double now = ev.seconds();
  Entry& e = entry_for(ev.key, ev.size);
  switch (ev.op) {
    case Op::Get:
      e.reads += 1.0;
      e.deleted = false;
      break;
    case Op::Put:
      e.writes += 1.0;
      e.deleted = false;
      break;
    case Op::Delete:
      e.writes += config_.delete_weight;
      break;
  }
  e.last_access = now;
  mark_pending(ev.key, e);

  const TierId loc = store_.locate(ev.key);
  if (loc != TierId::Hdd) {
    acct_.serve(ev, loc);
    if (ev.op == Op::Delete) {
      store_.evict(ev.key);
      e.deleted = true;
    }
  } else {
    switch (ev.op) {
      case Op::Get: {
        acct_.serve(ev, TierId::Hdd);
        const TierId target = allocate_store(ev.key);
        if (target != TierId::Hdd) {
          store_.admit(target, ev.key, e.size, rank_for(target, rank_of(ev.key)));
          acct_.fill(target, e.size);
        }
        break;
      }
      case Op::Put: {
        const TierId target = allocate_store(ev.key);
        if (target != TierId::Hdd) store_.admit(target, ev.key, e.size, rank_for(target, rank_of(ev.key)));
        acct_.serve(ev, target);
        break;
      }
      case Op::Delete:
        acct_.serve(ev, TierId::Hdd);
        e.deleted = true;
        break;
    }
  }

  update_thresholds();
  if (++since_pass_ >= config_.delta) run_pending_evictions();
  if (now - last_reset_ >= tau_) periodic_reset(now);
}

TierId HGreedy::allocate_store(Key key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return TierId::Hdd;
  const std::uint64_t size = it->second.size;
  const RankPair r = rank_of(key);
  const Tier& dram = store_.dram();
  if (dram.enabled() && r.dram > rank_threshold_product(dram) && dram.free() >= size) return TierId::Dram;
  const Tier& nvm = store_.nvm();
  if (nvm.enabled() && r.nvm > rank_threshold_product(nvm) && nvm.free() >= size) return TierId::Nvm;
  return TierId::Hdd;
}

std::optional<std::vector<Key>> HGreedy::plan_room(TierId id, double rank, std::uint64_t size, Key exclude) const {
  const Tier& tier = store_.tier(id);
  if (!tier.enabled() || size > tier.capacity()) return std::nullopt;
  std::vector<Key> victims;
  if (tier.free() >= size) return victims;
  const std::uint64_t need = size - tier.free();
  std::uint64_t freed = 0;
  for (const auto& [resident_rank, key] : tier.by_rank()) {
    if (!(resident_rank < rank)) break;
    if (key == exclude) continue;
    victims.push_back(key);
    freed += tier.find(key)->size;
    if (freed >= need) return victims;
  }
  return std::nullopt;
}

void HGreedy::move(Key key, TierId from, TierId to, std::vector<Migration>& moves) {
  // Only used for demotion to HDD; cache-to-cache moves go through try_place.
  const std::uint64_t size = store_.evict(key);
  acct_.migrate(from, to, size);
  moves.push_back({key, from, to});
}

bool HGreedy::try_place(Key key, TierId from, TierId to, std::vector<Migration>& moves) {
  const auto res = store_.residency(key);
  const std::uint64_t size = res ? res->size : entries_.at(key).size;
  const double rank = rank_for(to, rank_of(key));
  const auto victims = plan_room(to, rank, size, key);
  if (!victims) return false;
  if (from != TierId::Hdd) store_.evict(key);
  for (Key v : *victims) displace(v, moves);
  store_.admit(to, key, size, rank);
  acct_.migrate(from, to, size);
  moves.push_back({key, from, to});
  return true;
}

void HGreedy::displace(Key victim, std::vector<Migration>& moves) {
  const TierId loc = store_.locate(victim);
  if (loc == TierId::Dram) {
    const RankPair r = rank_of(victim);
    if (r.nvm > rank_threshold_product(store_.nvm()) && try_place(victim, TierId::Dram, TierId::Nvm, moves)) return;
    move(victim, TierId::Dram, TierId::Hdd, moves);
  } else if (loc == TierId::Nvm) {
    move(victim, TierId::Nvm, TierId::Hdd, moves);
  }
}

void HGreedy::refresh_rank(Key key) {
  const TierId loc = store_.locate(key);
  if (loc == TierId::Hdd) return;
  store_.tier(loc).set_rank(key, rank_for(loc, rank_of(key)));
}

std::vector<Migration> HGreedy::run_pending_evictions() {
  std::vector<Key> keys;
  keys.swap(pending_);
  for (Key k : keys) entries_.at(k).pending = false;
  since_pass_ = 0;
  return run_evictions(keys);
}

std::vector<Migration> HGreedy::run_evictions(const std::vector<Key>& keys) {
  std::vector<Migration> moves;
  for (Key key : keys) {
    auto it = entries_.find(key);
    if (it == entries_.end()) continue;
    update_thresholds();
    const RankPair r = rank_of(key);
    const double dram_bar = rank_threshold_product(store_.dram());
    const double nvm_bar = rank_threshold_product(store_.nvm());

    switch (store_.locate(key)) {
      case TierId::Dram:
        if (r.dram < dram_bar) {
          if (r.nvm > nvm_bar) {
            if (!try_place(key, TierId::Dram, TierId::Nvm, moves)) move(key, TierId::Dram, TierId::Hdd, moves);
          } else if (r.nvm < nvm_bar) {
            move(key, TierId::Dram, TierId::Hdd, moves);
          }
        }
        break;
      case TierId::Nvm:
        if (r.dram > dram_bar && store_.dram().enabled() && try_place(key, TierId::Nvm, TierId::Dram, moves)) break;
        if (r.nvm < nvm_bar) move(key, TierId::Nvm, TierId::Hdd, moves);
        break;
      case TierId::Hdd:
        if (it->second.deleted) break;
        if (store_.dram().enabled() && r.dram > dram_bar && try_place(key, TierId::Hdd, TierId::Dram, moves)) break;
        if (store_.nvm().enabled() && r.nvm > nvm_bar) try_place(key, TierId::Hdd, TierId::Nvm, moves);
        break;
    }
  }
  for (Key key : keys) refresh_rank(key);
  update_thresholds();
  ++acct_.metrics().eviction_passes;
  return moves;
}

std::vector<Key> HGreedy::periodic_reset(double now) {
  std::vector<Key> cold;
  for (TierId id : {TierId::Dram, TierId::Nvm}) {
    for (const auto& [key, slot] : store_.tier(id).residents()) {
      auto it = entries_.find(key);
      if (it == entries_.end() || it->second.last_access < last_reset_) cold.push_back(key);
    }
  }
  std::sort(cold.begin(), cold.end());
  std::vector<Migration> moves;
  for (Key key : cold) move(key, store_.locate(key), TierId::Hdd, moves);
  acct_.metrics().cold_evictions += cold.size();

  for (auto& [key, e] : entries_) {
    e.reads = 0.0;
    e.writes = 0.0;
  }
  for (TierId id : {TierId::Dram, TierId::Nvm}) {
    std::vector<Key> keys;
    keys.reserve(store_.tier(id).resident_count());
    for (const auto& [key, slot] : store_.tier(id).residents()) keys.push_back(key);
    for (Key key : keys) refresh_rank(key);
  }
  last_reset_ = now;
  update_thresholds();
  ++acct_.metrics().resets;
  return cold;
}

}  // namespace hcsim
