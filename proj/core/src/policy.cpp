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

#include "hcsim/policy.hpp"

#include <algorithm>

namespace hcsim {

void Accountant::serve(const RequestEvent& ev, TierId where) {
  auto& counters = metrics_.at(served_by(where));
  Tier& tier = store_.tier(where);
  Charge charge;
  switch (ev.op) {
    case Op::Get:
      ++metrics_.gets;
      ++counters.reads;
      counters.read_bytes += ev.size;
      charge = tier.charge(Access::Read, ev.size);
      break;
    case Op::Put:
      ++metrics_.puts;
      ++counters.writes;
      counters.write_bytes += ev.size;
      charge = tier.charge(Access::Write, ev.size);
      metrics_.bytes_written[static_cast<std::size_t>(where)] += ev.size;
      break;
    case Op::Delete:
      ++metrics_.deletes;
      ++counters.writes;
      counters.write_bytes += ev.size;
      charge = tier.charge(Access::Write, 0);
      break;
  }
  if (where == TierId::Hdd && !live_.contains(ev.key)) ++metrics_.compulsory_misses;
  if (ev.op == Op::Delete) {
    live_.erase(ev.key);
  } else {
    live_.insert(ev.key);
  }
  metrics_.latency_sum += charge.seconds;
  add_energy(charge.joules);
  metrics_.elapsed = std::max(metrics_.elapsed, ev.seconds());
}

void Accountant::fill(TierId to, std::uint64_t size) {
  add_energy(store_.tier(to).charge(Access::Write, size).joules);
  metrics_.bytes_written[static_cast<std::size_t>(to)] += size;
  ++metrics_.fills;
}

void Accountant::migrate(TierId from, TierId to, std::uint64_t size) {
  add_energy(store_.tier(from).charge(Access::Read, size).joules);
  add_energy(store_.tier(to).charge(Access::Write, size).joules);
  metrics_.bytes_written[static_cast<std::size_t>(to)] += size;
  ++metrics_.migrations;
  metrics_.migration_bytes += size;
}

}  // namespace hcsim
