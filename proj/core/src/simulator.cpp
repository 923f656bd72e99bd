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

#include "hcsim/simulator.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

namespace hcsim {

std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::HGreedy: return "hgreedy";
    case PolicyKind::HGreedyOffline: return "hgreedy-offline";
    case PolicyKind::Lru: return "lru";
    case PolicyKind::DensityGreedy: return "density-greedy";
    case PolicyKind::DramOnly: return "dram-only";
    case PolicyKind::NvmOnly: return "nvm-only";
  }
  return "?";
}

PolicyKind parse_policy(std::string_view name) {
  for (auto kind : {PolicyKind::HGreedy, PolicyKind::HGreedyOffline, PolicyKind::Lru, PolicyKind::DensityGreedy,
                    PolicyKind::DramOnly, PolicyKind::NvmOnly}) {
    if (policy_name(kind) == name) return kind;
  }
  throw ConfigError("unknown policy '" + std::string(name) + "'");
}

std::uint64_t CapacitySpec::resolve(std::uint64_t unique_bytes) const {
  if (bytes) return *bytes;
  if (ratio) return static_cast<std::uint64_t>(std::llround(*ratio * static_cast<double>(unique_bytes)));
  return 0;
}

void SimConfig::validate() const {
  if (!trace_file) trace.validate();
  for (const auto* spec : {&dram, &nvm}) {
    if (spec->bytes.has_value() == spec->ratio.has_value()) {
      throw ConfigError("tier capacity needs exactly one of 'capacity' or 'cache_capacity'");
    }
    if (spec->ratio && !(*spec->ratio >= 0.0)) throw ConfigError("cache_capacity must be >= 0");
  }
  if (banks == 0) throw ConfigError("banks must be >= 1");
  dram_params.validate("dram");
  nvm_params.validate("nvm");
  hdd_params.validate("hdd");
  policy_config.validate();
  costs.validate();
}

TierProvision provision_for(const SimConfig& config, std::uint64_t unique_bytes) {
  TierProvision p;
  p.dram_capacity = config.dram.resolve(unique_bytes);
  p.nvm_capacity = config.nvm.resolve(unique_bytes);
  p.dram = config.dram_params;
  p.nvm = config.nvm_params;
  p.hdd = config.hdd_params;
  if (config.policy == PolicyKind::DramOnly) {
    p.dram_capacity += p.nvm_capacity;
    p.nvm_capacity = 0;
  } else if (config.policy == PolicyKind::NvmOnly) {
    p.nvm_capacity += p.dram_capacity;
    p.dram_capacity = 0;
  }
  return p;
}

Trace load_trace(const SimConfig& config) {
  if (config.trace_file) return read_trace(*config.trace_file);
  return generate_trace(build_catalogue(config.trace), config.trace);
}

std::unique_ptr<Policy> make_policy(PolicyKind kind, HybridStore& store, Accountant& acct, const PolicyConfig& config,
                                    const OfflineProfile* profile) {
  switch (kind) {
    case PolicyKind::HGreedy:
    case PolicyKind::DramOnly:
    case PolicyKind::NvmOnly:
      return std::make_unique<HGreedy>(store, acct, config);
    case PolicyKind::HGreedyOffline:
      if (profile == nullptr) throw ConfigError("hgreedy-offline needs an offline profile");
      return std::make_unique<HGreedy>(store, acct, config, *profile);
    case PolicyKind::Lru:
      return std::make_unique<LruHierarchy>(store, acct);
    case PolicyKind::DensityGreedy:
      return std::make_unique<DensityGreedy>(store, acct, store.dram().enabled() ? TierId::Dram : TierId::Nvm,
                                             config.rank_size_unit);
  }
  throw ConfigError("unsupported policy");
}

namespace {

double default_tau(const SimConfig& config, const Trace& trace) {
  constexpr double kRequestsPerWindow = 1e6;
  double rate = config.trace.total_rate;
  if (config.trace_file) {
    if (trace.empty() || trace.back().timestamp_ns == 0) return std::numeric_limits<double>::infinity();
    rate = static_cast<double>(trace.size()) / trace.back().seconds();
  }
  return kRequestsPerWindow / rate;
}

}  // namespace

RunResult run(const SimConfig& config, const Trace& trace) {
  config.validate();

  RunResult result;
  result.policy = config.policy;
  {
    std::unordered_set<Key> keys;
    for (const auto& ev : trace) keys.insert(ev.key);
    result.unique_keys = keys.size();
  }
  result.unique_bytes = unique_content_bytes(trace);
  result.provision = provision_for(config, result.unique_bytes);

  HybridStore::Layout layout;
  layout.dram_capacity = result.provision.dram_capacity;
  layout.nvm_capacity = result.provision.nvm_capacity;
  layout.banks = config.banks;
  layout.dram = config.dram_params;
  layout.nvm = config.nvm_params;
  layout.hdd = config.hdd_params;
  HybridStore store(layout);

  PolicyConfig pc = config.policy_config;
  if (!pc.tau_seconds) pc.tau_seconds = default_tau(config, trace);
  result.tau_seconds = config.policy == PolicyKind::HGreedyOffline ? std::numeric_limits<double>::infinity()
                                                                    : *pc.tau_seconds;

  std::optional<OfflineProfile> profile;
  if (config.policy == PolicyKind::HGreedyOffline) profile = build_offline_profile(trace);

  SimMetrics& m = result.metrics;
  Accountant acct(store, m);
  auto policy = make_policy(config.policy, store, acct, pc, profile ? &*profile : nullptr);

  for (const auto& ev : trace) {
    policy->on_request(ev);
    if (config.check_invariants) {
      store.check_invariants();
      if (!m.conserved()) throw InvariantViolation("request conservation broken");
    }
  }
  policy->finish();
  m.elapsed = trace.empty() ? 0.0 : trace.back().seconds();

  if (!m.conserved() || m.requests() != trace.size()) {
    throw InvariantViolation("request conservation broken: " + std::to_string(m.requests()) + " accounted of " +
                             std::to_string(trace.size()));
  }
  store.check_invariants();

  if (result.unique_bytes > 0) {
    result.capacity = cache_capacity(result.provision.dram_capacity, result.provision.nvm_capacity, result.unique_bytes);
  }
  result.derived = derive_metrics(m, result.provision, config.costs);
  return result;
}

RunResult run(const SimConfig& config) {
  config.validate();
  return run(config, load_trace(config));
}

}  // namespace hcsim
