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
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hcsim/units.hpp"

namespace hcsim {

using Key = std::uint64_t;

enum class Op : std::uint8_t { Get, Put, Delete };

inline bool is_write(Op op) { return op != Op::Get; }
std::string_view op_token(Op op);

/// Parameters of an Independent Reference Model workload.
///
/// Every object z in [1, catalogue_size] is requested by two independent
/// Poisson processes: reads with rate proportional to z^-alpha, and writes
/// with the same Zipf weights applied through a seeded permutation of keys.
struct TraceConfig {
  std::uint64_t catalogue_size = 20'000;
  std::uint64_t mean_size = kMB;
  double size_stddev = static_cast<double>(kMB);
  double zipf_alpha = 0.8;
  double read_fraction = 0.8;
  /// Share of write traffic issued as DELETE instead of PUT.
  double delete_fraction = 0.05;
  std::uint64_t total_requests = 500'000;
  /// Aggregate request rate (requests per simulated second).
  double total_rate = 290.0;
  std::uint64_t seed = 1;
  std::uint64_t min_size = 4 * kKiB;

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
};

struct ContentDescriptor {
  Key key = 0;  // popularity rank z, 1-based
  std::uint64_t size = 0;
  double read_rate = 0.0;
  double write_rate = 0.0;
};

using Catalogue = std::vector<ContentDescriptor>;

struct RequestEvent {
  std::uint64_t timestamp_ns = 0;
  Op op = Op::Get;
  Key key = 0;
  std::uint64_t size = 0;

  double seconds() const { return static_cast<double>(timestamp_ns) / kNanosPerSecond; }
  friend bool operator==(const RequestEvent&, const RequestEvent&) = default;
};

using Trace = std::vector<RequestEvent>;

/// Unnormalised Zipf weight z^-alpha.
double zipf_weight(std::uint64_t z, double alpha);

/// Deterministic in config.seed. Sizes follow Normal(mean, stddev^2),
/// resampled until >= min_size.
Catalogue build_catalogue(const TraceConfig& config);

/// Superposition of the per-content Poisson processes: exponential
/// inter-arrivals at total_rate, content chosen proportionally to its rate.
Trace generate_trace(const Catalogue& catalogue, const TraceConfig& config);

/// Thrown by the trace/catalogue readers; message carries the line number.
class TraceFormatError : public std::runtime_error {
 public:
  TraceFormatError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline constexpr std::string_view kTraceHeader = "#hctrace v1";
inline constexpr std::string_view kCatalogueHeader = "#hccat v1";

void write_trace(const Trace& trace, std::ostream& out);
void write_trace(const Trace& trace, const std::filesystem::path& path);
Trace read_trace(std::istream& in);
Trace read_trace(const std::filesystem::path& path);

void write_catalogue(const Catalogue& catalogue, std::ostream& out);
void write_catalogue(const Catalogue& catalogue, const std::filesystem::path& path);
Catalogue read_catalogue(std::istream& in);
Catalogue read_catalogue(const std::filesystem::path& path);

}  // namespace hcsim
