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

#include "cli.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "hcsim/config_io.hpp"

namespace hcsim::cli {

namespace fs = std::filesystem;

namespace {

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> log = [] {
    auto l = std::make_shared<spdlog::logger>("hcsim", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("[%l] %v");
    spdlog::level::level_enum level = spdlog::level::warn;
    if (const char* env = std::getenv("HCSIM_LOG")) level = spdlog::level::from_str(env);
    l->set_level(level);
    return l;
  }();
  return log;
}

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Options that adjust a SimConfig; shared by simulate, sweep and compare.
struct ConfigOptions {
  std::string config;
  std::string trace;
  std::optional<double> alpha;
  std::optional<std::string> mean_size;
  std::optional<std::string> size_stddev;
  std::optional<std::uint64_t> requests;
  std::optional<std::uint64_t> catalogue;
  std::optional<double> rate;
  std::optional<double> read_fraction;
  std::optional<std::uint64_t> seed;
  std::optional<double> dram_cc;
  std::optional<double> nvm_cc;
  std::optional<std::string> dram_capacity;
  std::optional<std::string> nvm_capacity;
  std::optional<double> h;
  std::optional<std::uint64_t> delta;
  std::optional<double> tau;
  bool check_invariants = false;

  void add_trace_options(CLI::App* app) {
    app->add_option("--alpha", alpha, "Zipf exponent");
    app->add_option("--mean-size", mean_size, "Mean object size, e.g. 1MB");
    app->add_option("--size-stddev", size_stddev, "Object size standard deviation (default: mean size)");
    app->add_option("--requests", requests, "Number of requests to generate");
    app->add_option("--catalogue", catalogue, "Number of distinct objects");
    app->add_option("--rate", rate, "Aggregate request rate per simulated second");
    app->add_option("--read-fraction", read_fraction, "Share of GET requests");
    app->add_option("--seed", seed, "Trace seed");
  }

  void add_sim_options(CLI::App* app, bool with_h) {
    app->add_option("--config", config, "JSON config file");
    app->add_option("--trace", trace, "Replay this trace file instead of generating one");
    add_trace_options(app);
    app->add_option("--dram-cc", dram_cc, "DRAM cache capacity (fraction of unique bytes)");
    app->add_option("--nvm-cc", nvm_cc, "NVM cache capacity (fraction of unique bytes)");
    app->add_option("--dram-capacity", dram_capacity, "DRAM capacity in bytes, e.g. 8GB")->excludes("--dram-cc");
    app->add_option("--nvm-capacity", nvm_capacity, "NVM capacity in bytes, e.g. 64GB")->excludes("--nvm-cc");
    if (with_h) app->add_option("--h", h, "Write-awareness exponent");
    app->add_option("--delta", delta, "Requests between eviction passes");
    app->add_option("--tau", tau, "Counter reset period in simulated seconds");
    app->add_flag("--check-invariants", check_invariants, "Verify store bookkeeping after every request");
  }

  bool capacity_given() const {
    return !config.empty() || dram_cc || nvm_cc || dram_capacity || nvm_capacity;
  }

  SimConfig build() const {
    SimConfig c = config.empty() ? SimConfig{} : load_config(config);
    if (!trace.empty()) c.trace_file = fs::path(trace);
    if (alpha) c.trace.zipf_alpha = *alpha;
    if (mean_size) {
      c.trace.mean_size = parse_size(*mean_size);
      c.trace.size_stddev = static_cast<double>(c.trace.mean_size);
    }
    if (size_stddev) c.trace.size_stddev = static_cast<double>(parse_size(*size_stddev));
    if (requests) c.trace.total_requests = *requests;
    if (catalogue) c.trace.catalogue_size = *catalogue;
    if (rate) c.trace.total_rate = *rate;
    if (read_fraction) c.trace.read_fraction = *read_fraction;
    if (seed) c.trace.seed = *seed;
    if (dram_cc) c.dram = CapacitySpec::of_ratio(*dram_cc);
    if (nvm_cc) c.nvm = CapacitySpec::of_ratio(*nvm_cc);
    if (dram_capacity) c.dram = CapacitySpec::of_bytes(parse_size(*dram_capacity));
    if (nvm_capacity) c.nvm = CapacitySpec::of_bytes(parse_size(*nvm_capacity));
    if (h) c.policy_config.h = *h;
    if (delta) c.policy_config.delta = *delta;
    if (tau) c.policy_config.tau_seconds = *tau;
    if (check_invariants) c.check_invariants = true;
    return c;
  }
};

std::string default_label(const SimConfig& c) {
  std::string label = std::string(policy_name(c.policy)) + "_h" + format_g(c.policy_config.h);
  if (!c.trace_file) label = trace_basename(c.trace.zipf_alpha, c.trace.mean_size).substr(6) + "_" + label;
  return label;
}

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads. Exceptions stay
/// inside fn.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

// ---------------------------------------------------------------------------

struct GenTraceArgs {
  ConfigOptions opts;
  std::string out = ".";
  std::string name;
  std::string config;
};

int cmd_gen_trace(const GenTraceArgs& a, std::ostream& out) {
  ConfigOptions opts = a.opts;
  opts.config = a.config;
  const SimConfig c = opts.build();
  c.trace.validate();
  const Catalogue catalogue = build_catalogue(c.trace);
  const Trace trace = generate_trace(catalogue, c.trace);

  const std::string base = a.name.empty() ? trace_basename(c.trace.zipf_alpha, c.trace.mean_size) : a.name;
  const fs::path dir(a.out);
  fs::create_directories(dir);
  const fs::path trace_path = dir / (base + ".hctrace");
  const fs::path cat_path = dir / (base + ".hccat");
  write_trace(trace, trace_path);
  write_catalogue(catalogue, cat_path);

  std::unordered_set<Key> keys;
  std::uint64_t gets = 0;
  for (const auto& ev : trace) {
    keys.insert(ev.key);
    gets += ev.op == Op::Get ? 1 : 0;
  }
  const double read_fraction = trace.empty() ? 0.0 : static_cast<double>(gets) / static_cast<double>(trace.size());
  char line[256];
  std::snprintf(line, sizeof(line), "events=%zu unique_keys=%zu read_fraction=%.4f\n", trace.size(), keys.size(),
                read_fraction);
  out << "trace: " << trace_path.string() << "\n"
      << "catalogue: " << cat_path.string() << "\n"
      << line;
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  ConfigOptions opts;
  std::string policy;
  std::string out;
  std::string label;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  SimConfig c = a.opts.build();
  if (!a.policy.empty()) c.policy = parse_policy(a.policy);
  c.validate();
  const Trace trace = load_trace(c);
  logger()->info("simulating {} on {} requests", policy_name(c.policy), trace.size());
  const RunResult result = run(c, trace);
  const std::string report = report_json(c, result, a.label.empty() ? default_label(c) : a.label);
  if (a.out.empty() || a.out == "-") {
    out << report;
  } else {
    write_file(a.out, report);
    out << "report: " << a.out << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  ConfigOptions opts;
  std::vector<double> alphas{0.7, 0.8, 0.9};
  std::vector<std::string> mean_sizes{"1MB", "5MB", "10MB"};
  std::vector<double> hs{0.0, 1.0, 2.0};
  std::vector<std::string> policies{"hgreedy"};
  std::string out = "sweep";
  std::size_t jobs = 1;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.opts.trace.empty()) throw ConfigError("sweep generates its own traces; --trace is not accepted");
  if (a.alphas.empty() || a.mean_sizes.empty() || a.hs.empty() || a.policies.empty()) {
    throw ConfigError("sweep grid lists must be nonempty");
  }
  SimConfig base = a.opts.build();
  if (base.trace_file) throw ConfigError("sweep generates its own traces; remove trace.file from the config");
  const std::uint64_t base_seed = base.trace.seed;

  std::vector<std::uint64_t> sizes;
  for (const auto& s : a.mean_sizes) sizes.push_back(parse_size(s));
  std::vector<PolicyKind> policies;
  for (const auto& p : a.policies) policies.push_back(parse_policy(p));
  const auto cells = expand_grid(a.alphas, sizes, a.hs, policies);

  // One trace per (alpha, mean size); every h and policy replays it.
  struct Group {
    double alpha;
    std::uint64_t mean_size;
    SimConfig config;
    Trace trace;
  };
  std::vector<Group> groups;
  std::vector<std::size_t> group_of(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& cell = cells[i];
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Group& g) { return g.alpha == cell.alpha && g.mean_size == cell.mean_size; });
    if (it == groups.end()) {
      SimConfig c = base;
      c.trace.zipf_alpha = cell.alpha;
      c.trace.mean_size = cell.mean_size;
      if (!a.opts.size_stddev) c.trace.size_stddev = static_cast<double>(cell.mean_size);
      c.trace.seed = cell_seed(base_seed, cell.alpha, cell.mean_size);
      if (!a.opts.capacity_given()) {
        const CapacityPair pair = preset_capacity(cell.mean_size);
        c.dram = CapacitySpec::of_ratio(pair.dram);
        c.nvm = CapacitySpec::of_ratio(pair.nvm);
      }
      c.validate();
      groups.push_back({cell.alpha, cell.mean_size, c, {}});
      it = groups.end() - 1;
    }
    group_of[i] = static_cast<std::size_t>(it - groups.begin());
  }

  parallel_for(groups.size(), a.jobs, [&](std::size_t g) {
    groups[g].trace = generate_trace(build_catalogue(groups[g].config.trace), groups[g].config.trace);
  });

  const fs::path dir(a.out);
  fs::create_directories(dir / "reports");
  std::vector<std::string> rows(cells.size());
  std::vector<std::string> errors(cells.size());
  std::vector<int> codes(cells.size(), kExitOk);

  parallel_for(cells.size(), a.jobs, [&](std::size_t i) {
    const auto& cell = cells[i];
    const Group& group = groups[group_of[i]];
    SimConfig c = group.config;
    c.policy = cell.policy;
    c.policy_config.h = cell.h;
    try {
      const RunResult result = run(c, group.trace);
      const std::string report = report_json(c, result, cell.label);
      write_file(dir / "reports" / (cell.label + ".json"), report);
      rows[i] = csv_row_from_report(report);
      logger()->info("cell {} done", cell.label);
    } catch (const InvariantViolation& e) {
      errors[i] = e.what();
      codes[i] = kExitInvariant;
    } catch (const std::exception& e) {
      errors[i] = e.what();
      codes[i] = kExitUsage;
    }
  });

  std::string csv = csv_header() + "\n";
  std::string failures;
  int exit_code = kExitOk;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (codes[i] == kExitOk) {
      csv += rows[i] + "\n";
    } else {
      failures += cells[i].label + ": " + errors[i] + "\n";
      exit_code = std::max(exit_code, kExitInvariant);
    }
  }
  write_file(dir / "sweep.csv", csv);
  const fs::path failure_path = dir / "failures.txt";
  if (!failures.empty()) {
    write_file(failure_path, failures);
    err << "hcsim: " << std::count(failures.begin(), failures.end(), '\n') << " cell(s) failed, see "
        << failure_path.string() << "\n";
  } else if (fs::exists(failure_path)) {
    fs::remove(failure_path);
  }
  out << "cells: " << cells.size() << "\n"
      << "csv: " << (dir / "sweep.csv").string() << "\n";
  return exit_code;
}

// ---------------------------------------------------------------------------

struct CompareArgs {
  ConfigOptions opts;
  std::string out;
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  SimConfig base = a.opts.build();
  base.validate();
  const Trace trace = load_trace(base);

  struct Row {
    std::string name;
    RunResult result;
  };
  std::vector<Row> rows;
  for (PolicyKind kind : {PolicyKind::HGreedy, PolicyKind::DramOnly, PolicyKind::NvmOnly}) {
    SimConfig c = base;
    c.policy = kind;
    rows.push_back({kind == PolicyKind::HGreedy ? "hybrid" : std::string(policy_name(kind)), run(c, trace)});
  }

  std::string csv =
      "configuration,dram_gb,nvm_gb,requests,avg_access_time_s,avg_power_w,cbr,cbr_reciprocal,miss_rate,"
      "warm_miss_rate\n";
  char line[512];
  std::snprintf(line, sizeof(line), "%-10s %10s %10s %9s %14s %11s %8s %10s %10s\n", "config", "dram_GB", "nvm_GB",
                "requests", "avg_access_us", "power_W", "cbr", "miss_rate", "warm_miss");
  out << line;
  for (const auto& row : rows) {
    const auto& m = row.result.metrics;
    const auto& d = row.result.derived;
    const auto& miss = m.at(ServedBy::Miss);
    const std::uint64_t misses = miss.reads + miss.writes;
    const double warm = m.requests() == 0 ? 0.0
                                          : static_cast<double>(misses - std::min(misses, m.compulsory_misses)) /
                                                static_cast<double>(m.requests());
    const double dram_gb = to_gb(row.result.provision.dram_capacity);
    const double nvm_gb = to_gb(row.result.provision.nvm_capacity);
    std::snprintf(line, sizeof(line), "%-10s %10.3f %10.3f %9llu %14.3f %11.3f %8.4f %10.5f %10.5f\n",
                  row.name.c_str(), dram_gb, nvm_gb, static_cast<unsigned long long>(m.requests()),
                  d.avg_latency * 1e6, d.avg_power, d.cbr, d.miss_rate, warm);
    out << line;
    std::snprintf(line, sizeof(line), "%s,%.10g,%.10g,%llu,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", row.name.c_str(),
                  dram_gb, nvm_gb, static_cast<unsigned long long>(m.requests()), d.avg_latency, d.avg_power, d.cbr,
                  d.cbr_reciprocal, d.miss_rate, warm);
    csv += line;
  }
  if (!a.out.empty()) write_file(a.out, csv);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string out;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  std::vector<fs::path> files;
  for (const auto& in : a.inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  std::string csv = csv_header() + "\n";
  for (const auto& f : files) csv += csv_row_from_report(read_file(f)) + "\n";
  if (a.out.empty() || a.out == "-") {
    out << csv;
  } else {
    write_file(a.out, csv);
  }
  return kExitOk;
}

}  // namespace

std::string trace_basename(double alpha, std::uint64_t mean_size) {
  return "trace_a" + format_g(alpha) + "_m" + size_label(mean_size);
}

std::uint64_t cell_seed(std::uint64_t base_seed, double alpha, std::uint64_t mean_size) {
  const std::string key = "alpha=" + format_g(alpha) + ";mean_size=" + std::to_string(mean_size);
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char ch : key) {
    hash ^= ch;
    hash *= 1099511628211ULL;
  }
  return base_seed ^ hash;
}

CapacityPair preset_capacity(std::uint64_t mean_size) {
  if (mean_size == 5 * kMB) return {0.05, 0.8};
  if (mean_size == 10 * kMB) return {0.012, 0.2};
  return {0.256, 4.0};
}

std::vector<GridCell> expand_grid(const std::vector<double>& alphas, const std::vector<std::uint64_t>& mean_sizes,
                                  const std::vector<double>& hs, const std::vector<PolicyKind>& policies) {
  std::vector<GridCell> cells;
  for (double alpha : alphas) {
    for (std::uint64_t mean : mean_sizes) {
      for (double h : hs) {
        for (PolicyKind p : policies) {
          GridCell cell{alpha, mean, h, p, {}};
          cell.label = "a" + format_g(alpha) + "_m" + size_label(mean) + "_h" + format_g(h) + "_" +
                       std::string(policy_name(p));
          cells.push_back(cell);
        }
      }
    }
  }
  return cells;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid DRAM/NVM cache simulator", "hcsim"};
  // -h is not a help alias: --h is the write-awareness exponent.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", "hcsim 0.1.0");

  GenTraceArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-trace", "Generate a synthetic trace and its catalogue");
  gen.opts.add_trace_options(gen_cmd);
  gen_cmd->add_option("--config", gen.config, "JSON config whose trace section seeds the defaults");
  gen_cmd->add_option("--out", gen.out, "Output directory");
  gen_cmd->add_option("--name", gen.name, "Base file name (default trace_a<alpha>_m<size>)");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run one simulation and write a JSON report");
  sim.opts.add_sim_options(sim_cmd, true);
  sim_cmd->add_option("--policy", sim.policy, "hgreedy|hgreedy-offline|lru|density-greedy|dram-only|nvm-only");
  sim_cmd->add_option("--out", sim.out, "Report path (default: stdout)");
  sim_cmd->add_option("--label", sim.label, "Label stored in the report");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run an alpha x mean-size x h grid");
  sweep.opts.add_sim_options(sweep_cmd, false);
  sweep_cmd->add_option("--alphas", sweep.alphas, "Zipf exponents")->delimiter(',');
  sweep_cmd->add_option("--mean-sizes", sweep.mean_sizes, "Mean object sizes")->delimiter(',');
  sweep_cmd->add_option("--hs", sweep.hs, "Values of h")->delimiter(',');
  sweep_cmd->add_option("--policy", sweep.policies, "Policies to run in every cell")->delimiter(',');
  sweep_cmd->add_option("--out", sweep.out, "Output directory");
  sweep_cmd->add_option("--jobs", sweep.jobs, "Parallel simulations")->check(CLI::PositiveNumber);

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare hybrid, DRAM-only and NVM-only on one trace");
  cmp.opts.add_sim_options(cmp_cmd, true);
  cmp_cmd->add_option("--out", cmp.out, "Also write the table as CSV");

  ReportArgs rep;
  auto* rep_cmd = app.add_subcommand("report", "Convert JSON reports (or directories of them) to CSV");
  rep_cmd->add_option("inputs", rep.inputs, "Report files or directories")->required();
  rep_cmd->add_option("--out", rep.out, "CSV path (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "hcsim: " << e.what() << "\n";
    const auto parsed = app.get_subcommands();
    err << (parsed.empty() ? app.help() : parsed.front()->help());
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen_trace(gen, out);
    if (sim_cmd->parsed()) return cmd_simulate(sim, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep, out, err);
    if (cmp_cmd->parsed()) return cmd_compare(cmp, out);
    if (rep_cmd->parsed()) return cmd_report(rep, out);
  } catch (const InvariantViolation& e) {
    err << "hcsim: invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const TraceFormatError& e) {
    err << "hcsim: trace error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "hcsim: config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "hcsim: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "hcsim: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hcsim::cli
