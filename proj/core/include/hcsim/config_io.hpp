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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hcsim/simulator.hpp"

namespace hcsim {

inline constexpr std::string_view kReportVersion = "hcsim-report v1";

/// Parses a simulation config (sections `trace`, `tiers`, `policy`, `costs`).
/// Unknown keys are rejected. Throws ConfigError.
SimConfig parse_config(std::string_view json_text);
SimConfig load_config(const std::filesystem::path& path);
/// Canonical JSON for a config. Generator fields are omitted when the trace
/// comes from a file.
std::string config_to_json(const SimConfig& config);

/// Device parameters as a JSON object (infinite endurance is null).
std::string device_params_to_json(const DeviceParams& params);
DeviceParams parse_device_params(std::string_view json_text, const DeviceParams& defaults);

/// Full report: counters, derived metrics, config echo and format version.
std::string report_json(const SimConfig& config, const RunResult& result, std::string_view label = {});

/// Stable CSV schema for sweep aggregation (see docs/report-format.md).
const std::vector<std::string>& csv_columns();
std::string csv_header();
/// One CSV row (no trailing newline) extracted from a report.
std::string csv_row_from_report(std::string_view report_json_text);

}  // namespace hcsim
