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

#pragma once

#include <cstdint>
#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hcsim/policy.hpp"

namespace hcsim {

/// Exclusive LRU over the DRAM -> NVM -> HDD hierarchy. Misses and NVM hits
/// land at the DRAM MRU position; DRAM's LRU victim drops to NVM's MRU
/// position and NVM's LRU victim drops to HDD.
class LruHierarchy final : public Policy {
 public:
  LruHierarchy(HybridStore& store, Accountant& accountant);

  std::string_view name() const override { return "lru"; }
  void on_request(const RequestEvent& ev) override;

  /// Keys of one tier, most recently used first.
  std::vector<Key> recency(TierId tier) const;

 private:
  using Order = std::list<Key>;

  Order& order(TierId t) { return t == TierId::Dram ? dram_order_ : nvm_order_; }
  void touch(TierId tier, Key key);
  void unlink(TierId tier, Key key);
  /// Insert at MRU of `tier`, cascading victims downwards. Returns false if
  /// the object can never fit in that tier.
  bool insert(TierId tier, Key key, std::uint64_t size, TierId from);
  /// Put an object in the hierarchy starting at DRAM. Returns its tier.
  TierId place(Key key, std::uint64_t size, TierId from);

  HybridStore& store_;
  Accountant& acct_;
  Order dram_order_;
  Order nvm_order_;
  std::unordered_map<Key, Order::iterator> where_;
};

/// Single-memory greedy: keep the contents with the highest access density
/// p/s (accesses per MB); on pressure evict argmin p/s, and admit a newcomer
/// only if every victim is strictly less dense.
class DensityGreedy final : public Policy {
 public:
  DensityGreedy(HybridStore& store, Accountant& accountant, TierId tier, double size_unit = 1e6);

  std::string_view name() const override { return "density-greedy"; }
  void on_request(const RequestEvent& ev) override;

  double density(Key key) const;
  /// Residents to evict so `size` bytes fit for a newcomer of density `d`.
  std::optional<std::vector<Key>> plan_victims(double d, std::uint64_t size) const;
  TierId tier() const { return tier_; }

 private:
  HybridStore& store_;
  Accountant& acct_;
  TierId tier_;
  double size_unit_;
  std::unordered_map<Key, double> accesses_;
};

}  // namespace hcsim
