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

#include "hcsim/units.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

namespace hcsim {

std::uint64_t parse_size(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.')) ++pos;
  if (pos == 0) throw ConfigError("invalid size '" + std::string(text) + "'");

  double value = 0.0;
  const auto number = text.substr(0, pos);
  const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
  if (ec != std::errc{} || ptr != number.data() + number.size()) {
    throw ConfigError("invalid size '" + std::string(text) + "'");
  }

  std::string suffix;
  for (char c : text.substr(pos)) {
    if (!std::isspace(static_cast<unsigned char>(c))) suffix.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }

  static const std::array<std::pair<std::string_view, std::uint64_t>, 12> kSuffixes{{
      {"", 1},       {"B", 1},       {"KB", kKB},   {"MB", kMB},   {"GB", kGB},   {"TB", kTB},
      {"KIB", kKiB}, {"MIB", kMiB},  {"GIB", kGiB}, {"K", kKB},    {"M", kMB},    {"G", kGB},
  }};
  for (const auto& [name, scale] : kSuffixes) {
    if (suffix == name) {
      const double bytes = value * static_cast<double>(scale);
      if (!std::isfinite(bytes) || bytes < 0.0 || bytes > 1.8e19) throw ConfigError("size out of range '" + std::string(text) + "'");
      return static_cast<std::uint64_t>(std::llround(bytes));
    }
  }
  throw ConfigError("unknown size suffix in '" + std::string(text) + "'");
}

std::string size_label(std::uint64_t bytes) {
  if (bytes != 0 && bytes % kGB == 0) return std::to_string(bytes / kGB) + "GB";
  if (bytes != 0 && bytes % kMB == 0) return std::to_string(bytes / kMB) + "MB";
  if (bytes != 0 && bytes % kKB == 0) return std::to_string(bytes / kKB) + "KB";
  return std::to_string(bytes) + "B";
}

}  // namespace hcsim
