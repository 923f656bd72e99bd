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
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hcsim/baselines.hpp"
#include "hcsim/hgreedy.hpp"
#include "hcsim/metrics.hpp"
#include "hcsim/store_model.hpp"
#include "hcsim/workload.hpp"

namespace hcsim {

enum class PolicyKind : std::uint8_t { HGreedy, HGreedyOffline, Lru, DensityGreedy, DramOnly, NvmOnly };

std::string_view policy_name(PolicyKind kind);
/// Accepts hgreedy | hgreedy-offline | lru | density-greedy | dram-only | nvm-only.
PolicyKind parse_policy(std::string_view name);

/// A tier size given either in bytes or as a fraction of the trace's unique
/// content bytes ("cache capacity").
struct CapacitySpec {
  std::optional<std::uint64_t> bytes;
  std::optional<double> ratio;

  static CapacitySpec of_bytes(std::uint64_t b) { return {b, std::nullopt}; }
  static CapacitySpec of_ratio(double r) { return {std::nullopt, r}; }
  std::uint64_t resolve(std::uint64_t unique_bytes) const;
};

struct SimConfig {
  /// When set, the trace is read from this file; otherwise it is generated
  /// from `trace`.
  std::optional<std::filesystem::path> trace_file;
  TraceConfig trace;

  CapacitySpec dram = CapacitySpec::of_ratio(0.256);
  CapacitySpec nvm = CapacitySpec::of_ratio(4.0);
  std::size_t banks = 16;
  DeviceParams dram_params = DeviceParams::dram();
  DeviceParams nvm_params = DeviceParams::nvm();
  DeviceParams hdd_params = DeviceParams::hdd();

  PolicyKind policy = PolicyKind::HGreedy;
  PolicyConfig policy_config;
  CostModel costs;

  /// Verify store bookkeeping after every event (slow).
  bool check_invariants = false;

  void validate() const;
};

struct RunResult {
  PolicyKind policy = PolicyKind::HGreedy;
  SimMetrics metrics;
  TierProvision provision;
  std::uint64_t unique_bytes = 0;
  std::uint64_t unique_keys = 0;
  CacheCapacity capacity;
  double tau_seconds = 0.0;
  DerivedMetrics derived;
};

/// Resolved tier sizes for a policy: dram-only/nvm-only fold both capacities
/// into one tier.
TierProvision provision_for(const SimConfig& config, std::uint64_t unique_bytes);

/// Loads or generates the trace described by the config.
Trace load_trace(const SimConfig& config);

/// Processes every event in order; throws InvariantViolation if conservation
/// (or, with check_invariants, store bookkeeping) breaks.
RunResult run(const SimConfig& config, const Trace& trace);
RunResult run(const SimConfig& config);

/// Construct the policy object for a run. The store, accountant and profile
/// must outlive it.
std::unique_ptr<Policy> make_policy(PolicyKind kind, HybridStore& store, Accountant& acct, const PolicyConfig& config,
                                    const OfflineProfile* profile);

}  // namespace hcsim
