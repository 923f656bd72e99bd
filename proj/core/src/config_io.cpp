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

#include "hcsim/config_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace hcsim {

using json = nlohmann::ordered_json;

namespace {

void check_keys(const json& obj, std::string_view where, const std::vector<std::string_view>& allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

double get_double(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t get_u64(const json& obj, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
}

std::uint64_t get_size(const json& obj, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (v.is_string()) return parse_size(v.get<std::string>());
  if (v.is_number() && v.get<double>() >= 0.0) return static_cast<std::uint64_t>(std::llround(v.get<double>()));
  throw ConfigError(std::string("'") + key + "' must be a size");
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename T>
json optional_number(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

const std::vector<std::string_view> kDeviceKeys = {
    "read_latency",         "write_latency",       "read_bandwidth", "write_bandwidth", "read_energy",
    "write_energy",         "access_unit",         "standby_power_per_gb", "fixed_standby_power", "endurance_dwpd"};

DeviceParams device_from(const json& j, const DeviceParams& d) {
  DeviceParams p = d;
  p.read_latency = get_double(j, "read_latency", d.read_latency);
  p.write_latency = get_double(j, "write_latency", d.write_latency);
  p.read_bandwidth = get_double(j, "read_bandwidth", d.read_bandwidth);
  p.write_bandwidth = get_double(j, "write_bandwidth", d.write_bandwidth);
  p.read_energy = get_double(j, "read_energy", d.read_energy);
  p.write_energy = get_double(j, "write_energy", d.write_energy);
  p.access_unit = get_u64(j, "access_unit", d.access_unit);
  p.standby_power_per_gb = get_double(j, "standby_power_per_gb", d.standby_power_per_gb);
  p.fixed_standby_power = get_double(j, "fixed_standby_power", d.fixed_standby_power);
  p.endurance_dwpd = get_double(j, "endurance_dwpd", d.endurance_dwpd);
  return p;
}

json device_json(const DeviceParams& p) {
  json j;
  j["read_latency"] = p.read_latency;
  j["write_latency"] = p.write_latency;
  j["read_bandwidth"] = p.read_bandwidth;
  j["write_bandwidth"] = p.write_bandwidth;
  j["read_energy"] = p.read_energy;
  j["write_energy"] = p.write_energy;
  j["access_unit"] = p.access_unit;
  j["standby_power_per_gb"] = p.standby_power_per_gb;
  j["fixed_standby_power"] = p.fixed_standby_power;
  j["endurance_dwpd"] = number_or_null(p.endurance_dwpd);
  return j;
}

CapacitySpec capacity_from(const json& j, std::string_view where) {
  const bool has_bytes = j.contains("capacity");
  const bool has_ratio = j.contains("cache_capacity");
  if (has_bytes == has_ratio) throw ConfigError(std::string(where) + " needs exactly one of capacity or cache_capacity");
  if (has_bytes) return CapacitySpec::of_bytes(get_size(j, "capacity", 0));
  return CapacitySpec::of_ratio(get_double(j, "cache_capacity", 0.0));
}

json config_json(const SimConfig& c) {
  json trace;
  if (c.trace_file) {
    trace["file"] = c.trace_file->string();
  } else {
    trace["catalogue_size"] = c.trace.catalogue_size;
    trace["mean_size"] = c.trace.mean_size;
    trace["size_stddev"] = c.trace.size_stddev;
    trace["zipf_alpha"] = c.trace.zipf_alpha;
    trace["read_fraction"] = c.trace.read_fraction;
    trace["delete_fraction"] = c.trace.delete_fraction;
    trace["total_requests"] = c.trace.total_requests;
    trace["total_rate"] = c.trace.total_rate;
    trace["seed"] = c.trace.seed;
    trace["min_size"] = c.trace.min_size;
  }

  auto tier = [](const CapacitySpec& spec, const DeviceParams& p) {
    json t;
    if (spec.bytes) t["capacity"] = *spec.bytes;
    if (spec.ratio) t["cache_capacity"] = *spec.ratio;
    const json device = device_json(p);
    for (const auto& [k, v] : device.items()) t[k] = v;
    return t;
  };
  json tiers;
  tiers["banks"] = c.banks;
  tiers["dram"] = tier(c.dram, c.dram_params);
  tiers["nvm"] = tier(c.nvm, c.nvm_params);
  tiers["hdd"] = device_json(c.hdd_params);

  json policy;
  policy["name"] = std::string(policy_name(c.policy));
  policy["h"] = c.policy_config.h;
  policy["delta"] = c.policy_config.delta;
  if (c.policy_config.tau_seconds) policy["tau_seconds"] = number_or_null(*c.policy_config.tau_seconds);
  policy["threshold_knee"] = c.policy_config.threshold_knee;
  policy["delete_weight"] = c.policy_config.delete_weight;
  policy["rank_size_unit"] = c.policy_config.rank_size_unit;

  json costs;
  costs["cost_per_gb_dram"] = c.costs.cost_per_gb_dram;
  costs["cost_per_gb_nvm"] = c.costs.cost_per_gb_nvm;
  costs["lifetime_dram_years"] = c.costs.lifetime_dram_years;
  costs["lifetime_nvm_years"] = c.costs.lifetime_nvm_years;
  costs["wear_adjusted_lifetime"] = c.costs.wear_adjusted_lifetime;

  json j;
  j["trace"] = trace;
  j["tiers"] = tiers;
  j["policy"] = policy;
  j["costs"] = costs;
  j["check_invariants"] = c.check_invariants;
  return j;
}

json served_json(const ServedCounters& s) {
  return json{{"reads", s.reads}, {"writes", s.writes}, {"read_bytes", s.read_bytes}, {"write_bytes", s.write_bytes}};
}

json per_slot(const std::array<double, kServedSlots>& v) {
  return json{{"dram", v[0]}, {"nvm", v[1]}, {"miss", v[2]}};
}

json per_slot(const std::array<std::optional<double>, kServedSlots>& v) {
  return json{{"dram", optional_number(v[0])}, {"nvm", optional_number(v[1])}, {"miss", optional_number(v[2])}};
}

std::string format_number(const json& v) {
  if (v.is_null()) return "";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

}  // namespace

SimConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "config", {"trace", "tiers", "policy", "costs", "seed", "check_invariants"});

  SimConfig c;
  try {
    if (root.contains("trace")) {
      const auto& t = root.at("trace");
      check_keys(t, "trace", {"file", "catalogue_size", "mean_size", "size_stddev", "zipf_alpha", "read_fraction",
                              "delete_fraction", "total_requests", "total_rate", "seed", "min_size"});
      if (t.contains("file")) c.trace_file = t.at("file").get<std::string>();
      c.trace.catalogue_size = get_u64(t, "catalogue_size", c.trace.catalogue_size);
      c.trace.mean_size = get_size(t, "mean_size", c.trace.mean_size);
      // Standard deviation defaults to the mean.
      c.trace.size_stddev = t.contains("size_stddev") ? static_cast<double>(get_size(t, "size_stddev", 0))
                                                      : static_cast<double>(c.trace.mean_size);
      c.trace.zipf_alpha = get_double(t, "zipf_alpha", c.trace.zipf_alpha);
      c.trace.read_fraction = get_double(t, "read_fraction", c.trace.read_fraction);
      c.trace.delete_fraction = get_double(t, "delete_fraction", c.trace.delete_fraction);
      c.trace.total_requests = get_u64(t, "total_requests", c.trace.total_requests);
      c.trace.total_rate = get_double(t, "total_rate", c.trace.total_rate);
      c.trace.seed = get_u64(t, "seed", c.trace.seed);
      c.trace.min_size = get_size(t, "min_size", c.trace.min_size);
    }
    if (root.contains("seed")) c.trace.seed = get_u64(root, "seed", c.trace.seed);

    if (root.contains("tiers")) {
      const auto& t = root.at("tiers");
      check_keys(t, "tiers", {"banks", "dram", "nvm", "hdd"});
      c.banks = get_u64(t, "banks", c.banks);
      std::vector<std::string_view> tier_keys(kDeviceKeys);
      tier_keys.insert(tier_keys.end(), {"capacity", "cache_capacity"});
      for (const char* name : {"dram", "nvm"}) {
        if (!t.contains(name)) continue;
        const auto& tj = t.at(name);
        check_keys(tj, std::string("tiers.") + name, tier_keys);
        const bool is_dram = std::string_view(name) == "dram";
        (is_dram ? c.dram : c.nvm) = capacity_from(tj, std::string("tiers.") + name);
        auto& params = is_dram ? c.dram_params : c.nvm_params;
        params = device_from(tj, params);
      }
      if (t.contains("hdd")) {
        check_keys(t.at("hdd"), "tiers.hdd", kDeviceKeys);
        c.hdd_params = device_from(t.at("hdd"), c.hdd_params);
      }
    }

    if (root.contains("policy")) {
      const auto& p = root.at("policy");
      check_keys(p, "policy", {"name", "h", "delta", "tau_seconds", "threshold_knee", "delete_weight", "rank_size_unit"});
      if (p.contains("name")) c.policy = parse_policy(p.at("name").get<std::string>());
      c.policy_config.h = get_double(p, "h", c.policy_config.h);
      c.policy_config.delta = get_u64(p, "delta", c.policy_config.delta);
      if (p.contains("tau_seconds")) c.policy_config.tau_seconds = get_double(p, "tau_seconds", 0.0);
      c.policy_config.threshold_knee = get_double(p, "threshold_knee", c.policy_config.threshold_knee);
      c.policy_config.delete_weight = get_double(p, "delete_weight", c.policy_config.delete_weight);
      c.policy_config.rank_size_unit = get_double(p, "rank_size_unit", c.policy_config.rank_size_unit);
    }

    if (root.contains("costs")) {
      const auto& k = root.at("costs");
      check_keys(k, "costs", {"cost_per_gb_dram", "cost_per_gb_nvm", "lifetime_dram_years", "lifetime_nvm_years",
                              "wear_adjusted_lifetime"});
      c.costs.cost_per_gb_dram = get_double(k, "cost_per_gb_dram", c.costs.cost_per_gb_dram);
      c.costs.cost_per_gb_nvm = get_double(k, "cost_per_gb_nvm", c.costs.cost_per_gb_nvm);
      c.costs.lifetime_dram_years = get_double(k, "lifetime_dram_years", c.costs.lifetime_dram_years);
      c.costs.lifetime_nvm_years = get_double(k, "lifetime_nvm_years", c.costs.lifetime_nvm_years);
      if (k.contains("wear_adjusted_lifetime")) c.costs.wear_adjusted_lifetime = k.at("wear_adjusted_lifetime").get<bool>();
    }
    if (root.contains("check_invariants")) c.check_invariants = root.at("check_invariants").get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  }
  c.validate();
  return c;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const SimConfig& config) { return config_json(config).dump(2); }

std::string device_params_to_json(const DeviceParams& params) { return device_json(params).dump(2); }

DeviceParams parse_device_params(std::string_view json_text, const DeviceParams& defaults) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("device parameters are not valid JSON: ") + e.what());
  }
  check_keys(j, "device", kDeviceKeys);
  DeviceParams p = device_from(j, defaults);
  p.validate("device");
  return p;
}

std::string report_json(const SimConfig& config, const RunResult& r, std::string_view label) {
  const auto& m = r.metrics;
  const auto& d = r.derived;
  json j;
  j["version"] = std::string(kReportVersion);
  j["label"] = std::string(label);
  j["policy"] = std::string(policy_name(r.policy));
  j["config"] = config_json(config);

  j["trace"] = json{{"requests", m.requests()},  {"gets", m.gets},
                    {"puts", m.puts},            {"deletes", m.deletes},
                    {"unique_keys", r.unique_keys}, {"unique_bytes", r.unique_bytes},
                    {"elapsed_s", m.elapsed}};
  j["capacity"] = json{{"dram_bytes", r.provision.dram_capacity},
                       {"nvm_bytes", r.provision.nvm_capacity},
                       {"dram_cache_capacity", r.capacity.dram},
                       {"nvm_cache_capacity", r.capacity.nvm}};
  j["served"] = json{{"dram", served_json(m.at(ServedBy::Dram))},
                     {"nvm", served_json(m.at(ServedBy::Nvm))},
                     {"miss", served_json(m.at(ServedBy::Miss))}};
  j["fractions"] = json{{"read", per_slot(d.read_fraction)}, {"write", per_slot(d.write_fraction)}};
  j["avg_size"] = json{{"read", per_slot(d.sizes.read)}, {"write", per_slot(d.sizes.write)}, {"any", per_slot(d.sizes.any)}};
  j["latency"] = json{{"sum_s", m.latency_sum}, {"avg_s", d.avg_latency}};
  j["energy"] = json{{"dynamic_j", m.dynamic_energy}};
  j["power"] = json{{"avg_w", d.avg_power}, {"dynamic_w", d.dynamic_power}, {"standby_w", d.standby_power}};
  j["wear"] = json{{"bytes_written", json{{"dram", m.bytes_written[0]}, {"nvm", m.bytes_written[1]}, {"hdd", m.bytes_written[2]}}},
                   {"dram_dwpd", d.dram_dwpd},
                   {"nvm_dwpd", d.nvm_dwpd},
                   {"nvm_endurance_dwpd", number_or_null(r.provision.nvm.endurance_dwpd)},
                   {"nvm_lifetime_years", d.nvm_lifetime_years}};
  j["cost"] = json{{"cbr", d.cbr},
                   {"cbr_reciprocal", d.cbr_reciprocal},
                   {"note", "cbr = hybrid cost / all-DRAM cost of equal capacity (lower is cheaper); "
                            "cbr_reciprocal reads higher-is-better"}};
  j["miss_rate"] = d.miss_rate;
  j["activity"] = json{{"compulsory_misses", m.compulsory_misses},
                       {"fills", m.fills},
                       {"migrations", m.migrations},
                       {"migration_bytes", m.migration_bytes},
                       {"cold_evictions", m.cold_evictions},
                       {"resets", m.resets},
                       {"eviction_passes", m.eviction_passes},
                       {"tau_seconds", number_or_null(r.tau_seconds)}};
  j["invariants"] = json{{"conserved", m.conserved()}};
  return j.dump(2) + "\n";
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> kColumns = {
      "label",          "policy",         "alpha",           "mean_size",      "h",
      "seed",           "requests",       "dram_cc",         "nvm_cc",         "read_dram",
      "read_nvm",       "read_miss",      "write_dram",      "write_nvm",      "write_miss",
      "avg_read_size_dram", "avg_read_size_nvm", "avg_write_size_dram", "avg_write_size_nvm",
      "avg_size_dram",  "avg_size_nvm",   "avg_latency_s",   "dynamic_energy_j", "avg_power_w",
      "nvm_dwpd",       "cbr",            "cbr_reciprocal",  "miss_rate"};
  return kColumns;
}

std::string csv_header() {
  std::string out;
  for (const auto& c : csv_columns()) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

std::string csv_row_from_report(std::string_view report_json_text) {
  json j;
  try {
    j = json::parse(report_json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!j.contains("version") || j.at("version") != std::string(kReportVersion)) {
    throw ConfigError("not an hcsim report");
  }
  auto at = [&](std::initializer_list<const char*> path) -> json {
    const json* node = &j;
    for (const char* p : path) {
      if (!node->contains(p)) return json(nullptr);
      node = &node->at(p);
    }
    return *node;
  };
  const std::vector<json> values = {
      at({"label"}),
      at({"policy"}),
      at({"config", "trace", "zipf_alpha"}),
      at({"config", "trace", "mean_size"}),
      at({"config", "policy", "h"}),
      at({"config", "trace", "seed"}),
      at({"trace", "requests"}),
      at({"capacity", "dram_cache_capacity"}),
      at({"capacity", "nvm_cache_capacity"}),
      at({"fractions", "read", "dram"}),
      at({"fractions", "read", "nvm"}),
      at({"fractions", "read", "miss"}),
      at({"fractions", "write", "dram"}),
      at({"fractions", "write", "nvm"}),
      at({"fractions", "write", "miss"}),
      at({"avg_size", "read", "dram"}),
      at({"avg_size", "read", "nvm"}),
      at({"avg_size", "write", "dram"}),
      at({"avg_size", "write", "nvm"}),
      at({"avg_size", "any", "dram"}),
      at({"avg_size", "any", "nvm"}),
      at({"latency", "avg_s"}),
      at({"energy", "dynamic_j"}),
      at({"power", "avg_w"}),
      at({"wear", "nvm_dwpd"}),
      at({"cost", "cbr"}),
      at({"cost", "cbr_reciprocal"}),
      at({"miss_rate"}),
  };
  std::string row;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) row += ',';
    row += format_number(values[i]);
  }
  return row;
}

}  // namespace hcsim
