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
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hcsim/policy.hpp"

namespace hcsim {

/// Online counters for one content, reset every tau.
struct ContentStats {
  Key key = 0;
  std::uint64_t size = 0;
  double reads = 0.0;   // p_k
  double writes = 0.0;  // w_k
  double last_access = -std::numeric_limits<double>::infinity();
  TierId location = TierId::Hdd;
};

struct PolicyConfig {
  /// Write exponent h: 0 ignores writes, larger values push write-hot
  /// content towards DRAM and away from NVM.
  double h = 1.0;
  /// Requests between eviction passes.
  std::uint64_t delta = 1000;
  /// Simulated seconds between counter resets. Unset means "derive from the
  /// trace rate" (time of 10^6 requests); +inf disables resets.
  std::optional<double> tau_seconds;
  /// Utilization below which a tier's threshold is 0.
  double threshold_knee = 0.5;
  /// Contribution of one DELETE to w_k (PUT counts 1).
  double delete_weight = 1.0;
  /// Sizes are expressed in this unit when ranking.
  double rank_size_unit = 1e6;

  void validate() const;
};

/// DRAM and NVM desirability of one content.
struct RankPair {
  double dram = 0.0;  // k_A
  double nvm = 0.0;   // k_B
};

/// k_A = p * w^h / s and k_B = p / (w^h * s), with p and w clamped to >= 1
/// and s in `size_unit` bytes.
RankPair get_rank(double reads, double writes, std::uint64_t size, double h, double size_unit = 1e6);
RankPair get_rank(const ContentStats& stats, double h, double size_unit = 1e6);

/// 0 below the knee, the utilization itself otherwise.
double threshold_for(double utilization, double knee);

/// t * r for a tier, or 0 when the tier is empty or its threshold is 0.
double rank_threshold_product(const Tier& tier);

/// Whole-trace read/write totals per key.
struct OfflineProfile {
  struct Totals {
    std::uint64_t reads = 0;
    std::uint64_t writes = 0;
  };
  std::unordered_map<Key, Totals> totals;

  std::uint64_t total_reads() const;
  std::uint64_t total_writes() const;
};

OfflineProfile build_offline_profile(const Trace& trace);

struct Migration {
  Key key = 0;
  TierId from = TierId::Hdd;
  TierId to = TierId::Hdd;
  friend bool operator==(const Migration&, const Migration&) = default;
};

/// Hierarchical rank-threshold caching over DRAM, NVM and HDD.
///
/// Each request updates the content's counters and, when the content is not
/// cached, AllocateStore picks DRAM, NVM or HDD from the rank-threshold
/// products. Every `delta` requests the contents touched since the previous
/// pass are re-scored and migrated; afterwards each tier's recorded ranks are
/// refreshed, so min_rank() is the exact minimum again. Every tau seconds all
/// counters are zeroed and contents untouched for the whole window are
/// dropped.
///
/// With an OfflineProfile the ranks come from whole-trace totals instead of
/// online counters and resets are disabled.
class HGreedy final : public Policy {
 public:
  HGreedy(HybridStore& store, Accountant& accountant, PolicyConfig config);
  HGreedy(HybridStore& store, Accountant& accountant, PolicyConfig config, const OfflineProfile& profile);

  std::string_view name() const override { return offline_ ? "hgreedy-offline" : "hgreedy"; }
  void on_request(const RequestEvent& ev) override;

  /// Tier choice for a content that is not cached. Pure: nothing is admitted.
  TierId allocate_store(Key key) const;
  /// One eviction pass over `keys` (in order). Returns the moves performed.
  std::vector<Migration> run_evictions(const std::vector<Key>& keys);
  /// Pass over the keys touched since the last pass.
  std::vector<Migration> run_pending_evictions();
  /// Zero all counters and drop contents untouched since the previous reset.
  /// Returns the dropped keys.
  std::vector<Key> periodic_reset(double now);
  void update_thresholds();

  RankPair rank_of(Key key) const;
  std::optional<ContentStats> stats(Key key) const;
  /// Overwrite the counters of one content (checkpoint restore, tests).
  void restore_stats(const ContentStats& stats);
  const std::vector<Key>& pending() const { return pending_; }
  const PolicyConfig& config() const { return config_; }
  double last_reset() const { return last_reset_; }

 private:
  struct Entry {
    std::uint64_t size = 0;
    double reads = 0.0;
    double writes = 0.0;
    double last_access = -std::numeric_limits<double>::infinity();
    bool pending = false;
    bool deleted = false;
  };

  Entry& entry_for(Key key, std::uint64_t size);
  void mark_pending(Key key, Entry& e);
  double rank_for(TierId tier, const RankPair& r) const { return tier == TierId::Dram ? r.dram : r.nvm; }

  /// Residents of `tier` to displace so `size` bytes fit, taking only those
  /// ranked strictly below `rank`. nullopt when that is not enough.
  std::optional<std::vector<Key>> plan_room(TierId tier, double rank, std::uint64_t size, Key exclude) const;
  /// Push a displaced resident one level down (DRAM -> NVM -> HDD).
  void displace(Key victim, std::vector<Migration>& moves);
  void move(Key key, TierId from, TierId to, std::vector<Migration>& moves);
  bool try_place(Key key, TierId from, TierId to, std::vector<Migration>& moves);
  void refresh_rank(Key key);

  HybridStore& store_;
  Accountant& acct_;
  PolicyConfig config_;
  const OfflineProfile* offline_ = nullptr;
  std::unordered_map<Key, Entry> entries_;
  std::vector<Key> pending_;
  std::uint64_t since_pass_ = 0;
  double last_reset_ = 0.0;
  double tau_ = std::numeric_limits<double>::infinity();
};

}  // namespace hcsim
