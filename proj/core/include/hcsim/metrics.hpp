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

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "hcsim/store_model.hpp"
#include "hcsim/workload.hpp"

namespace hcsim {

/// Where a request was served from. Misses go to tertiary storage.
enum class ServedBy : std::uint8_t { Dram = 0, Nvm = 1, Miss = 2 };
inline constexpr std::size_t kServedSlots = 3;

std::string_view served_name(ServedBy s);
ServedBy served_by(TierId id);

struct ServedCounters {
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  std::uint64_t read_bytes = 0;
  std::uint64_t write_bytes = 0;

  friend bool operator==(const ServedCounters&, const ServedCounters&) = default;
};

/// Raw counters accumulated over one run. Derived quantities are computed by
/// derive_metrics() so a run can be re-priced without re-simulating.
struct SimMetrics {
  std::array<ServedCounters, kServedSlots> served{};
  std::uint64_t gets = 0;
  std::uint64_t puts = 0;
  std::uint64_t deletes = 0;
  /// Misses on a key not accessed since it was created or last deleted.
  std::uint64_t compulsory_misses = 0;

  double latency_sum = 0.0;     // s, request service time only
  double dynamic_energy = 0.0;  // J, requests + fills + migrations
  double elapsed = 0.0;         // s, timestamp of the last event

  // Per TierId (dram, nvm, hdd), including fills and migrations.
  std::array<std::uint64_t, 3> bytes_written{};

  std::uint64_t fills = 0;       // objects written into a cache tier after a miss
  std::uint64_t migrations = 0;  // moves between DRAM, NVM and HDD
  std::uint64_t migration_bytes = 0;
  std::uint64_t cold_evictions = 0;
  std::uint64_t resets = 0;
  std::uint64_t eviction_passes = 0;

  const ServedCounters& at(ServedBy s) const { return served[static_cast<std::size_t>(s)]; }
  ServedCounters& at(ServedBy s) { return served[static_cast<std::size_t>(s)]; }
  std::uint64_t requests() const { return gets + puts + deletes; }
  std::uint64_t writes() const { return puts + deletes; }

  /// Every request accounted to exactly one of DRAM/NVM/MISS.
  bool conserved() const;

  friend bool operator==(const SimMetrics&, const SimMetrics&) = default;
};

struct CostModel {
  double cost_per_gb_dram = 8.0;
  double cost_per_gb_nvm = 1.0;
  double lifetime_dram_years = 5.0;
  double lifetime_nvm_years = 5.0;
  /// Shorten the NVM lifetime when measured DWPD exceeds the rated endurance.
  bool wear_adjusted_lifetime = false;

  void validate() const;
};

/// [Cost_dram(dram) + Cost_nvm(nvm) * L_nvm/L_dram] / Cost_dram(dram + nvm).
/// Lower means the hybrid build is cheaper than all-DRAM of equal size.
double compute_cbr(double dram_gb, double nvm_gb, const CostModel& cost);
double compute_cbr(double dram_gb, double nvm_gb, const CostModel& cost, double lifetime_nvm_years);

struct AvgSizes {
  std::array<std::optional<double>, kServedSlots> read{};
  std::array<std::optional<double>, kServedSlots> write{};
  /// Reads and writes together.
  std::array<std::optional<double>, kServedSlots> any{};
};

AvgSizes avg_sizes(const SimMetrics& metrics);

struct CacheCapacity {
  double dram = 0.0;
  double nvm = 0.0;
};

/// Sum of sizes of the distinct keys in the trace.
std::uint64_t unique_content_bytes(const Trace& trace);
/// Tier capacity over unique content bytes. Throws ConfigError on zero content.
CacheCapacity cache_capacity(std::uint64_t dram_capacity, std::uint64_t nvm_capacity, std::uint64_t unique_bytes);

struct TierProvision {
  std::uint64_t dram_capacity = 0;
  std::uint64_t nvm_capacity = 0;
  DeviceParams dram = DeviceParams::dram();
  DeviceParams nvm = DeviceParams::nvm();
  DeviceParams hdd = DeviceParams::hdd();
};

struct DerivedMetrics {
  double avg_latency = 0.0;  // s per request
  double avg_power = 0.0;    // W
  double dynamic_power = 0.0;
  double standby_power = 0.0;
  double nvm_dwpd = 0.0;
  double dram_dwpd = 0.0;
  double nvm_lifetime_years = 0.0;
  double cbr = 0.0;
  double cbr_reciprocal = 0.0;
  double miss_rate = 0.0;
  double read_miss_fraction = 0.0;
  double write_miss_fraction = 0.0;
  std::array<double, kServedSlots> read_fraction{};
  std::array<double, kServedSlots> write_fraction{};
  AvgSizes sizes;
};

DerivedMetrics derive_metrics(const SimMetrics& m, const TierProvision& tiers, const CostModel& cost);

}  // namespace hcsim
