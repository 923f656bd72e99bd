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
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hcsim/workload.hpp"

namespace hcsim {

enum class TierId : std::uint8_t { Dram = 0, Nvm = 1, Hdd = 2 };
enum class Access : std::uint8_t { Read, Write };

std::string_view tier_name(TierId id);

inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();
inline constexpr std::uint64_t kUnboundedCapacity = std::numeric_limits<std::uint64_t>::max();

/// Timing, energy and wear characteristics of one memory device.
/// Energies are charged per access unit (64 B by default).
struct DeviceParams {
  double read_latency = 0.0;     // s
  double write_latency = 0.0;    // s
  double read_bandwidth = 1.0;   // B/s
  double write_bandwidth = 1.0;  // B/s
  double read_energy = 0.0;      // J per access unit
  double write_energy = 0.0;     // J per access unit
  std::uint64_t access_unit = 64;
  double standby_power_per_gb = 0.0;  // W/GB of provisioned capacity
  double fixed_standby_power = 0.0;   // W, independent of capacity
  double endurance_dwpd = kUnlimited;

  static DeviceParams dram();
  static DeviceParams nvm();
  static DeviceParams hdd();

  void validate(std::string_view label) const;
};

/// latency + size / bandwidth for the access direction.
double service_time(const DeviceParams& params, Access access, std::uint64_t size);
/// ceil(size / access_unit) * per-unit energy for the access direction.
double access_energy(const DeviceParams& params, Access access, std::uint64_t size);

struct Charge {
  double seconds = 0.0;
  double joules = 0.0;
};

class InsufficientSpace : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownKey : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// One memory tier: byte capacity split over banks, each resident tagged with
/// the policy rank it was last scored with.
///
/// min_rank() is the smallest recorded rank over residents, +inf when empty.
/// Placement always picks the least-occupied bank; after an eviction, objects
/// are shifted from the fullest to the emptiest bank until the spread is no
/// larger than the biggest resident object.
class Tier {
 public:
  struct Slot {
    std::uint32_t bank = 0;
    std::uint64_t size = 0;
    double rank = 0.0;
  };

  Tier(TierId id, std::uint64_t capacity, std::size_t banks, DeviceParams params);

  TierId id() const { return id_; }
  std::uint64_t capacity() const { return capacity_; }
  std::uint64_t used() const { return used_; }
  std::uint64_t free() const { return capacity_ - used_; }
  double utilization() const;
  bool enabled() const { return capacity_ > 0; }
  bool empty() const { return slots_.empty(); }
  std::size_t resident_count() const { return slots_.size(); }
  std::span<const std::uint64_t> banks() const { return bank_used_; }
  const DeviceParams& params() const { return params_; }

  double threshold() const { return threshold_; }
  void set_threshold(double t) { threshold_ = t; }
  double min_rank() const;
  std::uint64_t max_resident_size() const;

  bool contains(Key key) const { return slots_.contains(key); }
  const Slot* find(Key key) const;
  const std::unordered_map<Key, Slot>& residents() const { return slots_; }
  /// Residents in ascending recorded rank (ties by key).
  const std::set<std::pair<double, Key>>& by_rank() const { return by_rank_; }

  /// Places the object and returns its bank. Throws InsufficientSpace.
  std::uint32_t admit(Key key, std::uint64_t size, double rank = 0.0);
  /// Removes the object and returns its size. Throws UnknownKey.
  std::uint64_t evict(Key key);
  void set_rank(Key key, double rank);

  /// Time/energy for one access; writes add to bytes_written.
  Charge charge(Access access, std::uint64_t size);
  std::uint64_t bytes_written() const { return bytes_written_; }
  std::uint64_t bytes_read() const { return bytes_read_; }
  std::uint64_t rebalance_moves() const { return rebalance_moves_; }

  /// (bytes_written / capacity) per elapsed day. 0 for a zero-capacity tier.
  double dwpd(double elapsed_seconds) const;

  /// Throws InvariantViolation when bookkeeping is inconsistent.
  void check_invariants() const;

 private:
  std::uint32_t least_used_bank() const;
  void rebalance();

  TierId id_;
  std::uint64_t capacity_;
  DeviceParams params_;
  std::uint64_t used_ = 0;
  double threshold_ = 0.0;
  std::vector<std::uint64_t> bank_used_;
  // Per bank: (size, key) so a mover of a given size can be found quickly.
  std::vector<std::set<std::pair<std::uint64_t, Key>>> bank_members_;
  std::unordered_map<Key, Slot> slots_;
  std::set<std::pair<double, Key>> by_rank_;
  std::multiset<std::uint64_t> sizes_;
  std::uint64_t bytes_written_ = 0;
  std::uint64_t bytes_read_ = 0;
  std::uint64_t rebalance_moves_ = 0;
};

struct Residency {
  TierId tier;
  std::uint32_t bank;
  std::uint64_t size;
};

/// DRAM + NVM caching tiers backed by an unbounded HDD. A key lives in at
/// most one of DRAM/NVM; anything else is on HDD.
class HybridStore {
 public:
  struct Layout {
    std::uint64_t dram_capacity = 0;
    std::uint64_t nvm_capacity = 0;
    std::size_t banks = 16;
    DeviceParams dram = DeviceParams::dram();
    DeviceParams nvm = DeviceParams::nvm();
    DeviceParams hdd = DeviceParams::hdd();
  };

  explicit HybridStore(const Layout& layout);

  Tier& tier(TierId id) { return tiers_[static_cast<std::size_t>(id)]; }
  const Tier& tier(TierId id) const { return tiers_[static_cast<std::size_t>(id)]; }
  Tier& dram() { return tier(TierId::Dram); }
  Tier& nvm() { return tier(TierId::Nvm); }
  Tier& hdd() { return tier(TierId::Hdd); }
  const Tier& dram() const { return tier(TierId::Dram); }
  const Tier& nvm() const { return tier(TierId::Nvm); }
  const Tier& hdd() const { return tier(TierId::Hdd); }

  /// DRAM or NVM when cached, HDD otherwise.
  TierId locate(Key key) const;
  std::optional<Residency> residency(Key key) const;
  bool cached(Key key) const { return index_.contains(key); }
  std::size_t cached_count() const { return index_.size(); }

  /// Admit into DRAM or NVM. Throws InsufficientSpace, or InvariantViolation if
  /// the key is already cached.
  std::uint32_t admit(TierId tier, Key key, std::uint64_t size, double rank = 0.0);
  /// Remove from whichever cache tier holds the key. Throws UnknownKey.
  std::uint64_t evict(Key key);

  void check_invariants() const;

 private:
  std::vector<Tier> tiers_;
  std::unordered_map<Key, TierId> index_;
};

}  // namespace hcsim
