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

#include "hcsim/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace hcsim {

namespace {

// Independent RNG streams derived from one user seed.
enum class Stream : std::uint64_t { Sizes = 1, WritePermutation = 2, Arrivals = 3 };

std::mt19937_64 make_rng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

std::string_view op_token(Op op) {
  switch (op) {
    case Op::Get: return "GET";
    case Op::Put: return "PUT";
    case Op::Delete: return "DEL";
  }
  return "?";
}

void TraceConfig::validate() const {
  if (catalogue_size == 0) throw ConfigError("catalogue_size must be >= 1");
  if (mean_size == 0) throw ConfigError("mean_size must be > 0");
  if (!(size_stddev >= 0.0)) throw ConfigError("size_stddev must be >= 0");
  if (!(zipf_alpha > 0.0)) throw ConfigError("zipf_alpha must be > 0");
  if (!(read_fraction >= 0.0 && read_fraction <= 1.0)) throw ConfigError("read_fraction must lie in [0,1]");
  if (!(delete_fraction >= 0.0 && delete_fraction <= 1.0)) throw ConfigError("delete_fraction must lie in [0,1]");
  if (!(total_rate > 0.0)) throw ConfigError("total_rate must be > 0");
  if (min_size == 0) throw ConfigError("min_size must be >= 1");
}

double zipf_weight(std::uint64_t z, double alpha) { return std::pow(static_cast<double>(z), -alpha); }

Catalogue build_catalogue(const TraceConfig& config) {
  config.validate();
  const std::uint64_t n = config.catalogue_size;

  std::vector<double> weights(n);
  for (std::uint64_t z = 1; z <= n; ++z) weights[z - 1] = zipf_weight(z, config.zipf_alpha);
  const double norm = std::accumulate(weights.begin(), weights.end(), 0.0);

  // write_rank[i] is the Zipf index whose weight key i+1 receives for writes.
  std::vector<std::uint64_t> write_rank(n);
  std::iota(write_rank.begin(), write_rank.end(), std::uint64_t{0});
  auto perm_rng = make_rng(config.seed, Stream::WritePermutation);
  std::shuffle(write_rank.begin(), write_rank.end(), perm_rng);

  auto size_rng = make_rng(config.seed, Stream::Sizes);
  std::normal_distribution<double> size_dist(static_cast<double>(config.mean_size), config.size_stddev);
  const double floor = static_cast<double>(config.min_size);

  const double read_total = config.read_fraction * config.total_rate;
  const double write_total = (1.0 - config.read_fraction) * config.total_rate;

  Catalogue catalogue(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    double s = size_dist(size_rng);
    while (s < floor) s = size_dist(size_rng);
    auto& d = catalogue[i];
    d.key = i + 1;
    d.size = std::max<std::uint64_t>(config.min_size, static_cast<std::uint64_t>(std::llround(s)));
    d.read_rate = read_total * weights[i] / norm;
    d.write_rate = write_total * weights[write_rank[i]] / norm;
  }
  return catalogue;
}

Trace generate_trace(const Catalogue& catalogue, const TraceConfig& config) {
  config.validate();
  Trace trace;
  if (config.total_requests == 0 || catalogue.empty()) return trace;
  trace.reserve(config.total_requests);

  std::vector<double> read_w(catalogue.size());
  std::vector<double> write_w(catalogue.size());
  for (std::size_t i = 0; i < catalogue.size(); ++i) {
    read_w[i] = catalogue[i].read_rate;
    write_w[i] = catalogue[i].write_rate;
  }
  const double read_sum = std::accumulate(read_w.begin(), read_w.end(), 0.0);
  const double write_sum = std::accumulate(write_w.begin(), write_w.end(), 0.0);
  const double total = read_sum + write_sum;
  if (!(total > 0.0)) return trace;
  const double p_read = read_sum / total;

  std::discrete_distribution<std::size_t> pick_read(read_w.begin(), read_w.end());
  std::discrete_distribution<std::size_t> pick_write(write_w.begin(), write_w.end());
  std::exponential_distribution<double> gap(config.total_rate);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto rng = make_rng(config.seed, Stream::Arrivals);

  double now = 0.0;
  for (std::uint64_t n = 0; n < config.total_requests; ++n) {
    now += gap(rng);
    RequestEvent ev;
    ev.timestamp_ns = static_cast<std::uint64_t>(std::llround(now * kNanosPerSecond));
    std::size_t index = 0;
    if (unit(rng) < p_read) {
      ev.op = Op::Get;
      index = pick_read(rng);
    } else {
      ev.op = unit(rng) < config.delete_fraction ? Op::Delete : Op::Put;
      index = pick_write(rng);
    }
    ev.key = catalogue[index].key;
    ev.size = catalogue[index].size;
    trace.push_back(ev);
  }
  return trace;
}

TraceFormatError::TraceFormatError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

void write_trace(const Trace& trace, std::ostream& out) {
  out << kTraceHeader << '\n';
  std::string line;
  for (const auto& ev : trace) {
    line.clear();
    line += std::to_string(ev.timestamp_ns);
    line += ' ';
    line += op_token(ev.op);
    line += ' ';
    line += std::to_string(ev.key);
    line += ' ';
    line += std::to_string(ev.size);
    line += '\n';
    out << line;
  }
}

void write_trace(const Trace& trace, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_trace(trace, out);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

Trace read_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') {
      if (line.rfind("#hctrace", 0) == 0 && line != kTraceHeader) {
        throw TraceFormatError(line_no, "unsupported trace header '" + line + "'");
      }
      continue;
    }
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 4) throw TraceFormatError(line_no, "expected 4 fields, got " + std::to_string(tokens.size()));
    RequestEvent ev;
    if (!parse_number(tokens[0], ev.timestamp_ns)) throw TraceFormatError(line_no, "bad timestamp '" + std::string(tokens[0]) + "'");
    if (tokens[1] == "GET") {
      ev.op = Op::Get;
    } else if (tokens[1] == "PUT") {
      ev.op = Op::Put;
    } else if (tokens[1] == "DEL") {
      ev.op = Op::Delete;
    } else {
      throw TraceFormatError(line_no, "unknown op '" + std::string(tokens[1]) + "'");
    }
    if (!parse_number(tokens[2], ev.key)) throw TraceFormatError(line_no, "bad key '" + std::string(tokens[2]) + "'");
    if (!parse_number(tokens[3], ev.size)) throw TraceFormatError(line_no, "bad size '" + std::string(tokens[3]) + "'");
    if (!trace.empty() && ev.timestamp_ns < trace.back().timestamp_ns) {
      throw TraceFormatError(line_no, "timestamp goes backwards");
    }
    trace.push_back(ev);
  }
  return trace;
}

Trace read_trace(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_trace(in);
}

void write_catalogue(const Catalogue& catalogue, std::ostream& out) {
  out << kCatalogueHeader << '\n';
  char buf[128];
  for (const auto& d : catalogue) {
    std::snprintf(buf, sizeof(buf), "%llu %llu %.17g %.17g\n", static_cast<unsigned long long>(d.key),
                  static_cast<unsigned long long>(d.size), d.read_rate, d.write_rate);
    out << buf;
  }
}

void write_catalogue(const Catalogue& catalogue, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_catalogue(catalogue, out);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

Catalogue read_catalogue(std::istream& in) {
  Catalogue catalogue;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 4) throw TraceFormatError(line_no, "expected 4 fields, got " + std::to_string(tokens.size()));
    ContentDescriptor d;
    if (!parse_number(tokens[0], d.key) || !parse_number(tokens[1], d.size)) {
      throw TraceFormatError(line_no, "bad key or size");
    }
    if (!parse_number(tokens[2], d.read_rate) || !parse_number(tokens[3], d.write_rate)) {
      throw TraceFormatError(line_no, "bad rate");
    }
    catalogue.push_back(d);
  }
  return catalogue;
}

Catalogue read_catalogue(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_catalogue(in);
}

}  // namespace hcsim
