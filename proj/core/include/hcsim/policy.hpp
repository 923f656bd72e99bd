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
#include <string_view>
#include <unordered_set>

#include "hcsim/metrics.hpp"
#include "hcsim/store_model.hpp"
#include "hcsim/workload.hpp"

namespace hcsim {

/// Charges requests, fills and migrations to the tiers of a store and
/// accumulates the results into SimMetrics.
class Accountant {
 public:
  Accountant(HybridStore& store, SimMetrics& metrics) : store_(store), metrics_(metrics) {}

  /// Counts the request against `where` (HDD means a miss) and charges its
  /// service time. DELETE pays the write latency but transfers no data.
  /// A miss is compulsory when the key has not been accessed since it was
  /// created or last deleted.
  void serve(const RequestEvent& ev, TierId where);
  /// Object written into a cache tier off the request path after a miss.
  void fill(TierId to, std::uint64_t size);
  /// Read from `from`, write to `to`. HDD on either side is allowed.
  void migrate(TierId from, TierId to, std::uint64_t size);

  SimMetrics& metrics() { return metrics_; }

 private:
  void add_energy(double joules) { metrics_.dynamic_energy += joules; }

  HybridStore& store_;
  SimMetrics& metrics_;
  std::unordered_set<Key> live_;
};

/// A caching policy drives placement in a HybridStore, one request at a time.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  virtual void on_request(const RequestEvent& ev) = 0;
  /// Called once after the last event.
  virtual void finish() {}
};

}  // namespace hcsim
