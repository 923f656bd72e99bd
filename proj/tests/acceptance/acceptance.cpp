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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "property/properties.hpp"
#include "cli.hpp"
#include "hcsim/simulator.hpp"

namespace fs = std::filesystem;
using namespace hcsim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void verdict(int id, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// --- Trend grid (criteria 1-4) ----------------------------------------------

constexpr std::uint64_t kBaseSeed = 42;
constexpr std::uint64_t kGridRequests = 500'000;
const double kAlphas[] = {0.7, 0.8, 0.9};
const std::uint64_t kMeans[] = {kMB, 5 * kMB, 10 * kMB};

struct Cell {
  double alpha = 0.0;
  std::uint64_t mean = 0;
  // [h index][online=0, offline=1]
  DerivedMetrics d[3][2];
};

std::vector<Cell> run_grid(double& elapsed) {
  const auto t0 = Clock::now();
  std::vector<Cell> cells;
  for (std::uint64_t mean : kMeans) {
    for (double alpha : kAlphas) {
      SimConfig c;
      c.trace.zipf_alpha = alpha;
      c.trace.mean_size = mean;
      c.trace.size_stddev = static_cast<double>(mean);
      c.trace.total_requests = kGridRequests;
      c.trace.seed = cli::cell_seed(kBaseSeed, alpha, mean);
      const auto cap = cli::preset_capacity(mean);
      c.dram = CapacitySpec::of_ratio(cap.dram);
      c.nvm = CapacitySpec::of_ratio(cap.nvm);
      const Trace trace = load_trace(c);
      Cell cell{alpha, mean, {}};
      for (int hi = 0; hi < 3; ++hi) {
        c.policy_config.h = static_cast<double>(hi);
        for (int off = 0; off < 2; ++off) {
          if (off == 1 && hi != 2) continue;
          c.policy = off ? PolicyKind::HGreedyOffline : PolicyKind::HGreedy;
          cell.d[hi][off] = run(c, trace).derived;
        }
      }
      cells.push_back(cell);
    }
  }
  elapsed = seconds_since(t0);
  return cells;
}

constexpr std::size_t kDram = 0;
constexpr std::size_t kNvm = 1;
constexpr std::size_t kMiss = 2;

void criteria_grid() {
  double elapsed = 0.0;
  const auto cells = run_grid(elapsed);

  int c1 = 0;
  int c2 = 0;
  std::string c2_misses;
  for (const auto& cell : cells) {
    const auto& h0 = cell.d[0][0];
    const auto& h2 = cell.d[2][0];
    if (h2.write_fraction[kNvm] <= h0.write_fraction[kNvm] && h2.read_fraction[kNvm] >= h0.read_fraction[kNvm]) ++c1;
    const auto& sz = cell.d[1][0].sizes.any;
    if (sz[kNvm] && sz[kDram] && *sz[kNvm] > *sz[kDram]) {
      ++c2;
    } else {
      c2_misses += fmt("; alpha %.1f mean %lluMB: DRAM %.2f MB vs NVM %.2f MB", cell.alpha,
                       static_cast<unsigned long long>(cell.mean / kMB), sz[kDram].value_or(0.0) / 1e6,
                       sz[kNvm].value_or(0.0) / 1e6);
    }
  }
  verdict(1, c1 >= 8 && elapsed < 300.0,
          fmt("NVM writes fall and NVM reads rise from h=0 to h=2 in %d/9 configs (need 8); grid took %.1f s", c1,
              elapsed));
  verdict(2, c2 == 9, fmt("avg size served by NVM exceeds DRAM at h=1 in %d/9 configs", c2) + c2_misses);

  int c3 = 0;
  for (std::size_t m = 0; m < 3; ++m) {
    bool nondecreasing = true;
    for (std::size_t a = 1; a < 3; ++a) {
      const double prev = cells[m * 3 + a - 1].d[1][0].read_fraction[kDram];
      const double cur = cells[m * 3 + a].d[1][0].read_fraction[kDram];
      nondecreasing = nondecreasing && cur >= prev;
    }
    if (nondecreasing) ++c3;
  }
  verdict(3, c3 >= 2, fmt("DRAM read-hit fraction nondecreasing over alpha 0.7..0.9 for %d/3 mean sizes (need 2)", c3));

  double on_miss = 0.0, off_miss = 0.0, on_nvm_w = 0.0, off_nvm_w = 0.0;
  for (const auto& cell : cells) {
    on_miss += cell.d[2][0].read_fraction[kMiss] / 9.0;
    off_miss += cell.d[2][1].read_fraction[kMiss] / 9.0;
    on_nvm_w += cell.d[2][0].write_fraction[kNvm] / 9.0;
    off_nvm_w += cell.d[2][1].write_fraction[kNvm] / 9.0;
  }
  verdict(4, off_miss <= on_miss + 0.01 && off_nvm_w <= on_nvm_w,
          fmt("h=2 read misses offline %.2f%% vs online %.2f%% (+1pp allowed); NVM writes offline %.2f%% vs online "
              "%.2f%%",
              off_miss * 100, on_miss * 100, off_nvm_w * 100, on_nvm_w * 100));
}

// --- Criterion 5 ------------------------------------------------------------

void criterion_cbr() {
  CostModel cost;
  cost.cost_per_gb_dram = 8.0;
  cost.cost_per_gb_nvm = 1.0;
  cost.lifetime_dram_years = 5.0;
  cost.lifetime_nvm_years = 5.0;
  const double got = compute_cbr(256.0, 4096.0, cost);
  const double want = 6144.0 / 34816.0;
  const double rel = std::abs(got - want) / want;
  verdict(5, rel <= 1e-12, fmt("cbr(256 GB, 4096 GB, 8:1) = %.15f, expected %.15f, rel err %.2e", got, want, rel));
}

// --- Criterion 6 ------------------------------------------------------------

struct Item {
  std::uint64_t size = 0;
  std::uint64_t value = 0;
};

std::uint64_t knapsack_optimum(const std::vector<Item>& items, std::uint64_t capacity) {
  std::uint64_t best = 0;
  const std::uint32_t n = static_cast<std::uint32_t>(items.size());
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::uint64_t size = 0;
    std::uint64_t value = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        size += items[i].size;
        value += items[i].value;
      }
    }
    if (size <= capacity) best = std::max(best, value);
  }
  return best;
}

// Feeds p_i GETs per item (shuffled, two rounds) through the density-greedy
// policy and sums p over the final residents.
std::uint64_t greedy_value(const std::vector<Item>& items, std::uint64_t capacity, std::mt19937_64& rng) {
  HybridStore::Layout layout;
  layout.dram_capacity = capacity;
  layout.nvm_capacity = 0;
  layout.banks = 1;
  HybridStore store(layout);
  SimMetrics m;
  Accountant acct(store, m);
  DensityGreedy policy(store, acct, TierId::Dram, 1.0);

  std::vector<Key> order;
  for (std::size_t i = 0; i < items.size(); ++i) order.insert(order.end(), items[i].value, i + 1);
  std::uint64_t now = 0;
  for (int round = 0; round < 2; ++round) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Key k : order) policy.on_request({now++, Op::Get, k, items[k - 1].size});
  }
  std::uint64_t value = 0;
  for (const auto& [key, slot] : store.dram().residents()) value += items[key - 1].value;
  return value;
}

void criterion_knapsack() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(6);
  double worst = 1.0;
  for (int inst = 0; inst < 20; ++inst) {
    const std::size_t n = 4 + rng() % 9;
    std::vector<Item> items(n);
    std::uint64_t total = 0;
    for (auto& it : items) {
      it.size = 1 + rng() % 100;
      it.value = 1 + rng() % 50;
      total += it.size;
    }
    const std::uint64_t capacity = total * (30 + rng() % 31) / 100;
    const std::uint64_t opt = knapsack_optimum(items, capacity);
    const std::uint64_t got = greedy_value(items, capacity, rng);
    if (opt > 0) worst = std::min(worst, static_cast<double>(got) / static_cast<double>(opt));
  }
  const double elapsed = seconds_since(t0);
  verdict(6, worst >= 0.85 && elapsed < 1.0,
          fmt("worst greedy/optimum value ratio over 20 instances %.3f (need >= 0.85); %.3f s", worst, elapsed));
}

// --- Criterion 7 ------------------------------------------------------------

void criterion_properties() {
  const props::Outcome runs[] = {props::rank_monotonicity(101, 10000), props::h_zero_collapse(102, 10000),
                                 props::simulation_invariants(103, 1200),
                                 props::allocation_and_migration(104, 1500), props::bank_balance(105, 2000)};
  std::uint64_t cases = 0;
  std::string failure;
  for (const auto& r : runs) {
    cases += r.cases;
    if (!r.ok() && failure.empty()) failure = r.failure;
  }
  verdict(7, failure.empty() && cases >= 10000,
          fmt("%llu generated cases%s%s", static_cast<unsigned long long>(cases), failure.empty() ? "" : "; ",
              failure.c_str()));
}

// --- Criterion 8 ------------------------------------------------------------

void criterion_workload() {
  TraceConfig tc;
  tc.total_requests = 1'000'000;
  tc.zipf_alpha = 0.8;
  tc.mean_size = kMB;
  tc.size_stddev = kMB / 4.0;
  tc.seed = 8;
  const Catalogue cat = build_catalogue(tc);
  const Trace trace = generate_trace(cat, tc);

  // Key k carries read popularity rank k.
  std::vector<double> counts(1001, 0.0);
  std::uint64_t reads = 0;
  for (const auto& ev : trace) {
    if (ev.op != Op::Get) continue;
    ++reads;
    if (ev.key <= 1000) counts[ev.key] += 1.0;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (std::size_t r = 1; r <= 1000; ++r) {
    if (counts[r] <= 0.0) continue;
    const double x = std::log(static_cast<double>(r));
    const double y = std::log(counts[r]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double read_fraction = static_cast<double>(reads) / static_cast<double>(trace.size());
  double size_sum = 0.0;
  for (const auto& d : cat) size_sum += static_cast<double>(d.size);
  const double mean = size_sum / static_cast<double>(cat.size());
  const double mean_err = std::abs(mean - static_cast<double>(kMB)) / static_cast<double>(kMB);

  const bool ok = std::abs(slope + tc.zipf_alpha) <= 0.05 && std::abs(read_fraction - 0.8) <= 0.01 && mean_err <= 0.01;
  verdict(8, ok,
          fmt("%zu events: Zipf slope %.4f (alpha %.1f), read fraction %.4f, size mean error %.3f%% (sd = mean/4)",
              trace.size(), slope, tc.zipf_alpha, read_fraction, mean_err * 100));
}

// --- Criterion 9 ------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Every file under `dir`, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = slurp(e.path());
  }
  return files;
}

std::map<std::string, std::string> run_commands(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d = dir.string();
  const std::vector<std::vector<std::string>> commands = {
      {"gen-trace", "--out", d, "--requests", "20000", "--catalogue", "2000"},
      {"simulate", "--trace", d + "/trace_a0.8_m1MB.hctrace", "--out", d + "/sim.json"},
      {"simulate", "--requests", "20000", "--catalogue", "2000", "--policy", "hgreedy-offline", "--h", "2", "--out",
       d + "/offline.json"},
      {"sweep", "--alphas", "0.7,0.9", "--mean-sizes", "1MB,5MB", "--hs", "0,2", "--policy", "hgreedy,lru",
       "--requests", "10000", "--catalogue", "1000", "--jobs", "2", "--out", d + "/sweep"},
      {"compare", "--requests", "20000", "--catalogue", "2000", "--out", d + "/compare.csv"},
      {"report", d + "/sweep/reports", "--out", d + "/report.csv"},
  };
  for (const auto& args : commands) {
    std::ostringstream out;
    std::ostringstream err;
    if (cli::run(args, out, err) != cli::kExitOk) return {{"error", args.front() + ": " + err.str()}};
    std::ofstream(dir / ("stdout_" + args.front() + ".txt"), std::ios::app) << out.str();
  }
  return snapshot(dir);
}

void criterion_determinism() {
  const fs::path root = fs::temp_directory_path() / "hcsim_acceptance_determinism";
  const auto a = run_commands(root);
  const auto b = run_commands(root);
  std::size_t differing = 0;
  for (const auto& [name, content] : a) {
    const auto it = b.find(name);
    if (it == b.end() || it->second != content) ++differing;
  }
  const bool ok = !a.contains("error") && a.size() == b.size() && differing == 0 && a.size() > 10;
  verdict(9, ok, fmt("%zu output files compared across two runs of six commands, %zu differ", a.size(), differing));
  fs::remove_all(root);
}

// --- Criterion 10 -----------------------------------------------------------

void criterion_performance() {
  SimConfig c;
  c.trace.total_requests = 1'000'000;
  c.trace.seed = 10;
  const auto t0 = Clock::now();
  const RunResult r = run(c);
  const double elapsed = seconds_since(t0);
  verdict(10, elapsed < 60.0 && r.metrics.requests() == 1'000'000,
          fmt("1e6-request hgreedy simulation (trace generation included) took %.1f s (limit 60 s)", elapsed));
}

}  // namespace

int main() {
  criteria_grid();
  criterion_cbr();
  criterion_knapsack();
  criterion_properties();
  criterion_workload();
  criterion_determinism();
  criterion_performance();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
