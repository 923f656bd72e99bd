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
#include <iosfwd>
#include <string>
#include <vector>

#include "hcsim/simulator.hpp"

namespace hcsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by main() and the tests. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "trace_a0.8_m1MB"; the trace and catalogue files append .hctrace/.hccat.
std::string trace_basename(double alpha, std::uint64_t mean_size);

/// Seed for a sweep cell: base XOR FNV-1a of the trace parameters. Cells that
/// differ only in h or policy share a trace.
std::uint64_t cell_seed(std::uint64_t base_seed, double alpha, std::uint64_t mean_size);

struct CapacityPair {
  double dram = 0.0;
  double nvm = 0.0;
};

/// Cache-capacity pair the experiment grid pairs with a mean object size:
/// 1MB -> (0.256, 4), 5MB -> (0.05, 0.8), 10MB -> (0.012, 0.2). Other sizes
/// fall back to the first pair.
CapacityPair preset_capacity(std::uint64_t mean_size);

struct GridCell {
  double alpha = 0.0;
  std::uint64_t mean_size = 0;
  double h = 0.0;
  PolicyKind policy = PolicyKind::HGreedy;
  std::string label;
};

/// Cells in output order: alpha, then mean size, then h, then policy.
std::vector<GridCell> expand_grid(const std::vector<double>& alphas, const std::vector<std::uint64_t>& mean_sizes,
                                  const std::vector<double>& hs, const std::vector<PolicyKind>& policies);

}  // namespace hcsim::cli
