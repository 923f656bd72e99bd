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
#include <stdexcept>
#include <string>
#include <string_view>

namespace hcsim {

// Decimal units throughout; bandwidths and capacities in the device tables
// are quoted in powers of ten.
inline constexpr std::uint64_t kKB = 1000ULL;
inline constexpr std::uint64_t kMB = 1000ULL * kKB;
inline constexpr std::uint64_t kGB = 1000ULL * kMB;
inline constexpr std::uint64_t kTB = 1000ULL * kGB;
inline constexpr std::uint64_t kKiB = 1024ULL;
inline constexpr std::uint64_t kMiB = 1024ULL * kKiB;
inline constexpr std::uint64_t kGiB = 1024ULL * kMiB;

inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr double kNanosPerSecond = 1e9;

/// Raised for any malformed user-supplied configuration value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "1MB", "4KiB", "2.5GB", "123" (bytes). Throws ConfigError.
std::uint64_t parse_size(std::string_view text);

/// Short label used in file names: 1000000 -> "1MB", 4096 -> "4096B".
std::string size_label(std::uint64_t bytes);

inline double to_gb(std::uint64_t bytes) { return static_cast<double>(bytes) / static_cast<double>(kGB); }
inline double to_mb(std::uint64_t bytes) { return static_cast<double>(bytes) / static_cast<double>(kMB); }

}  // namespace hcsim
