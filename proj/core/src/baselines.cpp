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

#include "hcsim/baselines.hpp"

namespace hcsim {

LruHierarchy::LruHierarchy(HybridStore& store, Accountant& accountant) : store_(store), acct_(accountant) {}

std::vector<Key> LruHierarchy::recency(TierId tier) const {
  const Order& o = tier == TierId::Dram ? dram_order_ : nvm_order_;
  return {o.begin(), o.end()};
}

void LruHierarchy::touch(TierId tier, Key key) {
  Order& o = order(tier);
  o.splice(o.begin(), o, where_.at(key));
}

void LruHierarchy::unlink(TierId tier, Key key) {
  auto it = where_.find(key);
  order(tier).erase(it->second);
  where_.erase(it);
}

bool LruHierarchy::insert(TierId id, Key key, std::uint64_t size, TierId from) {
  Tier& tier = store_.tier(id);
  if (!tier.enabled() || size > tier.capacity()) return false;
  while (tier.free() < size) {
    const Key victim = order(id).back();
    unlink(id, victim);
    const std::uint64_t vsize = store_.evict(victim);
    if (id == TierId::Dram) {
      if (!insert(TierId::Nvm, victim, vsize, TierId::Dram)) acct_.migrate(TierId::Dram, TierId::Hdd, vsize);
    } else {
      acct_.migrate(TierId::Nvm, TierId::Hdd, vsize);
    }
  }
  store_.admit(id, key, size);
  Order& o = order(id);
  o.push_front(key);
  where_[key] = o.begin();
  if (from == TierId::Hdd) {
    acct_.fill(id, size);
  } else if (from != id) {
    acct_.migrate(from, id, size);
  }
  return true;
}

TierId LruHierarchy::place(Key key, std::uint64_t size, TierId from) {
  if (insert(TierId::Dram, key, size, from)) return TierId::Dram;
  if (insert(TierId::Nvm, key, size, from)) return TierId::Nvm;
  return TierId::Hdd;
}

void LruHierarchy::on_request(const RequestEvent& ev) {
  const TierId loc = store_.locate(ev.key);

  if (loc != TierId::Hdd) {
    acct_.serve(ev, loc);
    if (ev.op == Op::Delete) {
      unlink(loc, ev.key);
      store_.evict(ev.key);
      return;
    }
    if (loc == TierId::Dram) {
      touch(TierId::Dram, ev.key);
      return;
    }
    const std::uint64_t size = store_.residency(ev.key)->size;
    if (size > store_.dram().capacity()) {
      touch(TierId::Nvm, ev.key);
      return;
    }
    unlink(TierId::Nvm, ev.key);
    store_.evict(ev.key);
    insert(TierId::Dram, ev.key, size, TierId::Nvm);
    return;
  }

  switch (ev.op) {
    case Op::Get:
      acct_.serve(ev, TierId::Hdd);
      place(ev.key, ev.size, TierId::Hdd);
      break;
    case Op::Put: {
      // The write itself populates the cache; charge it once, where it lands.
      TierId where = TierId::Hdd;
      if (insert(TierId::Dram, ev.key, ev.size, TierId::Dram)) {
        where = TierId::Dram;
      } else if (insert(TierId::Nvm, ev.key, ev.size, TierId::Nvm)) {
        where = TierId::Nvm;
      }
      acct_.serve(ev, where);
      break;
    }
    case Op::Delete:
      acct_.serve(ev, TierId::Hdd);
      break;
  }
}

// ---------------------------------------------------------------------------

DensityGreedy::DensityGreedy(HybridStore& store, Accountant& accountant, TierId tier, double size_unit)
    : store_(store), acct_(accountant), tier_(tier), size_unit_(size_unit) {
  if (tier == TierId::Hdd) throw ConfigError("density-greedy needs a DRAM or NVM tier");
}

double DensityGreedy::density(Key key) const {
  const auto res = store_.residency(key);
  auto it = accesses_.find(key);
  if (!res || it == accesses_.end()) return 0.0;
  return it->second / (static_cast<double>(res->size) / size_unit_);
}

std::optional<std::vector<Key>> DensityGreedy::plan_victims(double d, std::uint64_t size) const {
  const Tier& tier = store_.tier(tier_);
  if (!tier.enabled() || size > tier.capacity()) return std::nullopt;
  std::vector<Key> victims;
  if (tier.free() >= size) return victims;
  const std::uint64_t need = size - tier.free();
  std::uint64_t freed = 0;
  for (const auto& [resident_density, key] : tier.by_rank()) {
    if (!(resident_density < d)) break;
    victims.push_back(key);
    freed += tier.find(key)->size;
    if (freed >= need) return victims;
  }
  return std::nullopt;
}

void DensityGreedy::on_request(const RequestEvent& ev) {
  double& count = accesses_[ev.key];
  count += 1.0;
  const double d = count / (static_cast<double>(ev.size) / size_unit_);
  const TierId loc = store_.locate(ev.key);

  if (loc != TierId::Hdd) {
    acct_.serve(ev, loc);
    if (ev.op == Op::Delete) {
      store_.evict(ev.key);
    } else {
      store_.tier(loc).set_rank(ev.key, count / (static_cast<double>(store_.residency(ev.key)->size) / size_unit_));
    }
    return;
  }

  TierId where = TierId::Hdd;
  if (ev.op != Op::Delete) {
    if (const auto victims = plan_victims(d, ev.size)) {
      for (Key v : *victims) acct_.migrate(tier_, TierId::Hdd, store_.evict(v));
      store_.admit(tier_, ev.key, ev.size, d);
      where = tier_;
    }
  }
  if (ev.op == Op::Get) {
    acct_.serve(ev, TierId::Hdd);
    if (where != TierId::Hdd) acct_.fill(where, ev.size);
  } else {
    acct_.serve(ev, where);
  }
}

}  // namespace hcsim
