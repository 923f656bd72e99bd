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

#include "hcsim/store_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hcsim {

std::string_view tier_name(TierId id) {
  switch (id) {
    case TierId::Dram: return "dram";
    case TierId::Nvm: return "nvm";
    case TierId::Hdd: return "hdd";
  }
  return "?";
}

DeviceParams DeviceParams::dram() {
  DeviceParams p;
  p.read_latency = p.write_latency = 75e-9;
  p.read_bandwidth = p.write_bandwidth = 75e9;
  p.read_energy = p.write_energy = 51.2e-9;
  p.standby_power_per_gb = 1.0;
  p.endurance_dwpd = kUnlimited;
  return p;
}

DeviceParams DeviceParams::nvm() {
  DeviceParams p;
  p.read_latency = p.write_latency = 10e-6;
  p.read_bandwidth = 2.2e9;
  p.write_bandwidth = 2.1e9;
  p.read_energy = 102.4e-9;
  p.write_energy = 512e-9;
  p.standby_power_per_gb = 0.1;
  p.endurance_dwpd = 30.0;
  return p;
}

DeviceParams DeviceParams::hdd() {
  // 6 W active at 150 MB/s is 40 nJ/B, i.e. 2.56 uJ per 64 B unit.
  DeviceParams p;
  p.read_latency = p.write_latency = 5e-3;
  p.read_bandwidth = p.write_bandwidth = 150e6;
  p.read_energy = p.write_energy = 2.56e-6;
  p.standby_power_per_gb = 0.0;
  p.fixed_standby_power = 10.0;
  p.endurance_dwpd = kUnlimited;
  return p;
}

void DeviceParams::validate(std::string_view label) const {
  const std::string l(label);
  if (!(read_latency >= 0.0 && write_latency >= 0.0)) throw ConfigError(l + ": latencies must be >= 0");
  if (!(read_bandwidth > 0.0 && write_bandwidth > 0.0)) throw ConfigError(l + ": bandwidths must be > 0");
  if (!(read_energy >= 0.0 && write_energy >= 0.0)) throw ConfigError(l + ": energies must be >= 0");
  if (access_unit == 0) throw ConfigError(l + ": access_unit must be > 0");
  if (!(standby_power_per_gb >= 0.0 && fixed_standby_power >= 0.0)) throw ConfigError(l + ": standby power must be >= 0");
  if (!(endurance_dwpd > 0.0)) throw ConfigError(l + ": endurance_dwpd must be > 0");
}

double service_time(const DeviceParams& params, Access access, std::uint64_t size) {
  const auto bytes = static_cast<double>(size);
  return access == Access::Read ? params.read_latency + bytes / params.read_bandwidth
                                : params.write_latency + bytes / params.write_bandwidth;
}

double access_energy(const DeviceParams& params, Access access, std::uint64_t size) {
  const std::uint64_t units = (size + params.access_unit - 1) / params.access_unit;
  return static_cast<double>(units) * (access == Access::Read ? params.read_energy : params.write_energy);
}

// ---------------------------------------------------------------------------

Tier::Tier(TierId id, std::uint64_t capacity, std::size_t banks, DeviceParams params)
    : id_(id), capacity_(capacity), params_(params) {
  if (banks == 0) throw ConfigError("a tier needs at least one bank");
  bank_used_.assign(banks, 0);
  bank_members_.resize(banks);
}

double Tier::utilization() const {
  if (capacity_ == 0 || capacity_ == kUnboundedCapacity) return 0.0;
  return static_cast<double>(used_) / static_cast<double>(capacity_);
}

double Tier::min_rank() const { return by_rank_.empty() ? kUnlimited : by_rank_.begin()->first; }

std::uint64_t Tier::max_resident_size() const { return sizes_.empty() ? 0 : *sizes_.rbegin(); }

const Tier::Slot* Tier::find(Key key) const {
  auto it = slots_.find(key);
  return it == slots_.end() ? nullptr : &it->second;
}

std::uint32_t Tier::least_used_bank() const {
  const auto it = std::min_element(bank_used_.begin(), bank_used_.end());
  return static_cast<std::uint32_t>(it - bank_used_.begin());
}

std::uint32_t Tier::admit(Key key, std::uint64_t size, double rank) {
  if (slots_.contains(key)) throw InvariantViolation("key " + std::to_string(key) + " already resident in " + std::string(tier_name(id_)));
  if (size > free()) {
    throw InsufficientSpace("tier " + std::string(tier_name(id_)) + " has " + std::to_string(free()) +
                            " bytes free, object needs " + std::to_string(size));
  }
  const std::uint32_t bank = least_used_bank();
  slots_.emplace(key, Slot{bank, size, rank});
  by_rank_.emplace(rank, key);
  sizes_.insert(size);
  bank_used_[bank] += size;
  bank_members_[bank].emplace(size, key);
  used_ += size;
  return bank;
}

std::uint64_t Tier::evict(Key key) {
  auto it = slots_.find(key);
  if (it == slots_.end()) throw UnknownKey("key " + std::to_string(key) + " not resident in " + std::string(tier_name(id_)));
  const Slot slot = it->second;
  slots_.erase(it);
  by_rank_.erase({slot.rank, key});
  sizes_.erase(sizes_.find(slot.size));
  bank_used_[slot.bank] -= slot.size;
  bank_members_[slot.bank].erase({slot.size, key});
  used_ -= slot.size;
  rebalance();
  return slot.size;
}

void Tier::rebalance() {
  if (bank_used_.size() < 2 || slots_.empty()) return;
  const std::uint64_t limit = max_resident_size();
  for (;;) {
    const auto [lo_it, hi_it] = std::minmax_element(bank_used_.begin(), bank_used_.end());
    const std::uint64_t spread = *hi_it - *lo_it;
    if (spread <= limit) return;
    const auto hi = static_cast<std::uint32_t>(hi_it - bank_used_.begin());
    const auto lo = static_cast<std::uint32_t>(lo_it - bank_used_.begin());
    // Any object in the fullest bank is <= limit < spread, so moving it
    // strictly reduces the sum of squared occupancies. Prefer one near spread/2.
    auto& members = bank_members_[hi];
    auto pick = members.lower_bound({spread / 2, 0});
    if (pick == members.end()) pick = std::prev(members.end());
    const auto [size, key] = *pick;
    members.erase(pick);
    bank_members_[lo].emplace(size, key);
    bank_used_[hi] -= size;
    bank_used_[lo] += size;
    slots_.at(key).bank = lo;
    ++rebalance_moves_;
  }
}

void Tier::set_rank(Key key, double rank) {
  auto it = slots_.find(key);
  if (it == slots_.end()) throw UnknownKey("key " + std::to_string(key) + " not resident in " + std::string(tier_name(id_)));
  if (it->second.rank == rank) return;
  by_rank_.erase({it->second.rank, key});
  it->second.rank = rank;
  by_rank_.emplace(rank, key);
}

Charge Tier::charge(Access access, std::uint64_t size) {
  if (access == Access::Write) {
    bytes_written_ += size;
  } else {
    bytes_read_ += size;
  }
  return {service_time(params_, access, size), access_energy(params_, access, size)};
}

double Tier::dwpd(double elapsed_seconds) const {
  if (capacity_ == 0 || capacity_ == kUnboundedCapacity || !(elapsed_seconds > 0.0)) return 0.0;
  const double drive_writes = static_cast<double>(bytes_written_) / static_cast<double>(capacity_);
  return drive_writes / (elapsed_seconds / kSecondsPerDay);
}

void Tier::check_invariants() const {
  const std::string name(tier_name(id_));
  if (used_ > capacity_) throw InvariantViolation(name + ": used exceeds capacity");
  std::uint64_t from_slots = 0;
  std::vector<std::uint64_t> per_bank(bank_used_.size(), 0);
  for (const auto& [key, slot] : slots_) {
    from_slots += slot.size;
    if (slot.bank >= per_bank.size()) throw InvariantViolation(name + ": bank index out of range");
    per_bank[slot.bank] += slot.size;
  }
  if (from_slots != used_) throw InvariantViolation(name + ": used != sum of resident sizes");
  if (per_bank != bank_used_) throw InvariantViolation(name + ": bank occupancy mismatch");
  if (by_rank_.size() != slots_.size() || sizes_.size() != slots_.size()) {
    throw InvariantViolation(name + ": index size mismatch");
  }
  if (!slots_.empty()) {
    const auto [lo, hi] = std::minmax_element(bank_used_.begin(), bank_used_.end());
    if (*hi - *lo > max_resident_size()) throw InvariantViolation(name + ": banks out of balance");
  }
}

// ---------------------------------------------------------------------------

HybridStore::HybridStore(const Layout& layout) {
  layout.dram.validate("dram");
  layout.nvm.validate("nvm");
  layout.hdd.validate("hdd");
  tiers_.emplace_back(TierId::Dram, layout.dram_capacity, layout.banks, layout.dram);
  tiers_.emplace_back(TierId::Nvm, layout.nvm_capacity, layout.banks, layout.nvm);
  tiers_.emplace_back(TierId::Hdd, kUnboundedCapacity, 1, layout.hdd);
}

TierId HybridStore::locate(Key key) const {
  auto it = index_.find(key);
  return it == index_.end() ? TierId::Hdd : it->second;
}

std::optional<Residency> HybridStore::residency(Key key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  const auto* slot = tier(it->second).find(key);
  return Residency{it->second, slot->bank, slot->size};
}

std::uint32_t HybridStore::admit(TierId id, Key key, std::uint64_t size, double rank) {
  if (id == TierId::Hdd) throw InvariantViolation("HDD is not a caching tier");
  if (index_.contains(key)) throw InvariantViolation("key " + std::to_string(key) + " is already cached");
  const std::uint32_t bank = tier(id).admit(key, size, rank);
  index_.emplace(key, id);
  return bank;
}

std::uint64_t HybridStore::evict(Key key) {
  auto it = index_.find(key);
  if (it == index_.end()) throw UnknownKey("key " + std::to_string(key) + " is not cached");
  const std::uint64_t size = tier(it->second).evict(key);
  index_.erase(it);
  return size;
}

void HybridStore::check_invariants() const {
  dram().check_invariants();
  nvm().check_invariants();
  if (dram().resident_count() + nvm().resident_count() != index_.size()) {
    throw InvariantViolation("residency index size mismatch");
  }
  for (const auto& [key, id] : index_) {
    if (!tier(id).contains(key)) throw InvariantViolation("index points at wrong tier");
    const TierId other = id == TierId::Dram ? TierId::Nvm : TierId::Dram;
    if (tier(other).contains(key)) throw InvariantViolation("key cached in two tiers");
  }
}

}  // namespace hcsim
