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

#include "hcsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace hcsim {

std::string_view served_name(ServedBy s) {
  switch (s) {
    case ServedBy::Dram: return "dram";
    case ServedBy::Nvm: return "nvm";
    case ServedBy::Miss: return "miss";
  }
  return "?";
}

ServedBy served_by(TierId id) {
  switch (id) {
    case TierId::Dram: return ServedBy::Dram;
    case TierId::Nvm: return ServedBy::Nvm;
    case TierId::Hdd: return ServedBy::Miss;
  }
  return ServedBy::Miss;
}

bool SimMetrics::conserved() const {
  std::uint64_t reads = 0;
  std::uint64_t writes = 0;
  for (const auto& c : served) {
    reads += c.reads;
    writes += c.writes;
  }
  return reads == gets && writes == puts + deletes;
}

void CostModel::validate() const {
  if (!(cost_per_gb_dram > 0.0 && cost_per_gb_nvm > 0.0)) throw ConfigError("costs per GB must be > 0");
  if (!(lifetime_dram_years > 0.0 && lifetime_nvm_years >= 0.0)) throw ConfigError("lifetimes must be positive");
}

double compute_cbr(double dram_gb, double nvm_gb, const CostModel& cost, double lifetime_nvm_years) {
  const double denominator = cost.cost_per_gb_dram * (dram_gb + nvm_gb);
  if (!(denominator > 0.0)) throw ConfigError("cost-benefit ratio undefined for zero total capacity");
  const double lifetime_ratio = lifetime_nvm_years / cost.lifetime_dram_years;
  return (cost.cost_per_gb_dram * dram_gb + cost.cost_per_gb_nvm * nvm_gb * lifetime_ratio) / denominator;
}

double compute_cbr(double dram_gb, double nvm_gb, const CostModel& cost) {
  return compute_cbr(dram_gb, nvm_gb, cost, cost.lifetime_nvm_years);
}

AvgSizes avg_sizes(const SimMetrics& metrics) {
  AvgSizes out;
  for (std::size_t i = 0; i < kServedSlots; ++i) {
    const auto& c = metrics.served[i];
    if (c.reads > 0) out.read[i] = static_cast<double>(c.read_bytes) / static_cast<double>(c.reads);
    if (c.writes > 0) out.write[i] = static_cast<double>(c.write_bytes) / static_cast<double>(c.writes);
    if (c.reads + c.writes > 0) {
      out.any[i] = static_cast<double>(c.read_bytes + c.write_bytes) / static_cast<double>(c.reads + c.writes);
    }
  }
  return out;
}

std::uint64_t unique_content_bytes(const Trace& trace) {
  std::unordered_map<Key, std::uint64_t> sizes;
  sizes.reserve(trace.size() / 4 + 1);
  for (const auto& ev : trace) sizes.emplace(ev.key, ev.size);
  std::uint64_t total = 0;
  for (const auto& [key, size] : sizes) total += size;
  return total;
}

CacheCapacity cache_capacity(std::uint64_t dram_capacity, std::uint64_t nvm_capacity, std::uint64_t unique_bytes) {
  if (unique_bytes == 0) throw ConfigError("cache capacity is undefined for an empty trace");
  const auto total = static_cast<double>(unique_bytes);
  return {static_cast<double>(dram_capacity) / total, static_cast<double>(nvm_capacity) / total};
}

DerivedMetrics derive_metrics(const SimMetrics& m, const TierProvision& tiers, const CostModel& cost) {
  DerivedMetrics d;
  const auto requests = static_cast<double>(m.requests());
  if (m.requests() > 0) d.avg_latency = m.latency_sum / requests;

  d.dynamic_power = m.elapsed > 0.0 ? m.dynamic_energy / m.elapsed : 0.0;
  d.standby_power = tiers.dram.standby_power_per_gb * to_gb(tiers.dram_capacity) + tiers.dram.fixed_standby_power +
                    tiers.nvm.standby_power_per_gb * to_gb(tiers.nvm_capacity) + tiers.nvm.fixed_standby_power +
                    tiers.hdd.fixed_standby_power;
  d.avg_power = d.dynamic_power + d.standby_power;

  auto dwpd = [&](std::uint64_t written, std::uint64_t capacity) {
    if (capacity == 0 || !(m.elapsed > 0.0)) return 0.0;
    return (static_cast<double>(written) / static_cast<double>(capacity)) / (m.elapsed / kSecondsPerDay);
  };
  d.dram_dwpd = dwpd(m.bytes_written[0], tiers.dram_capacity);
  d.nvm_dwpd = dwpd(m.bytes_written[1], tiers.nvm_capacity);

  d.nvm_lifetime_years = cost.lifetime_nvm_years;
  if (cost.wear_adjusted_lifetime && d.nvm_dwpd > tiers.nvm.endurance_dwpd) {
    d.nvm_lifetime_years *= tiers.nvm.endurance_dwpd / d.nvm_dwpd;
  }
  const double dram_gb = to_gb(tiers.dram_capacity);
  const double nvm_gb = to_gb(tiers.nvm_capacity);
  if (dram_gb + nvm_gb > 0.0) {
    d.cbr = compute_cbr(dram_gb, nvm_gb, cost, d.nvm_lifetime_years);
    d.cbr_reciprocal = d.cbr > 0.0 ? 1.0 / d.cbr : 0.0;
  }

  const auto gets = static_cast<double>(m.gets);
  const auto writes = static_cast<double>(m.writes());
  for (std::size_t i = 0; i < kServedSlots; ++i) {
    if (m.gets > 0) d.read_fraction[i] = static_cast<double>(m.served[i].reads) / gets;
    if (m.writes() > 0) d.write_fraction[i] = static_cast<double>(m.served[i].writes) / writes;
  }
  const auto& miss = m.at(ServedBy::Miss);
  d.read_miss_fraction = d.read_fraction[2];
  d.write_miss_fraction = d.write_fraction[2];
  if (m.requests() > 0) d.miss_rate = static_cast<double>(miss.reads + miss.writes) / requests;
  d.sizes = avg_sizes(m);
  return d;
}

}  // namespace hcsim
