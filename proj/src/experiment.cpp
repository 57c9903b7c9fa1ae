// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The rczf-mimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "rczf/experiment.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

namespace rczf {

void SweepConfig::validate() const {
  try {
    scenario.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  if (su_sinr_grid_db.empty()) throw Error(ErrorCode::kConfig, "grid is empty");
  for (std::size_t i = 0; i < su_sinr_grid_db.size(); ++i) {
    if (!std::isfinite(su_sinr_grid_db[i])) {
      throw Error(ErrorCode::kConfig, "grid contains a non-finite value");
    }
    if (i > 0 && !(su_sinr_grid_db[i] > su_sinr_grid_db[i - 1])) {
      throw Error(ErrorCode::kConfig, "grid must be strictly increasing");
    }
  }
  if (trials < 1) throw Error(ErrorCode::kConfig, "trials must be at least 1");
  if (precoders.empty()) throw Error(ErrorCode::kConfig, "no precoders requested");
  if (detectors.empty()) throw Error(ErrorCode::kConfig, "no detectors requested");
  for (const auto p : precoders) {
    if (p != PrecoderScheme::kZf) continue;
    for (std::size_t k = 0; k < scenario.users.size(); ++k) {
      const auto& u = scenario.users[k];
      if (u.layers != u.antennas) {
        throw Error(ErrorCode::kConfig,
                    "precoder zf needs p_k = q_k but user " + std::to_string(k) +
                        " has " + std::to_string(u.antennas) + "x" +
                        std::to_string(u.layers) + "; use ezf");
      }
    }
  }
  for (const auto& d : detectors) {
    if (d.kind == DetectorKind::kReferenceIc) {
      throw Error(ErrorCode::kConfig, "reference-ic is not a sweep detector");
    }
  }
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

class LineError {
 public:
  LineError(std::size_t line, std::string key) : line_(line), key_(std::move(key)) {}

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line_) + ", key '" + key_ +
                                       "': " + message);
  }

  template <typename T>
  T number(const std::string& text) const {
    T value{};
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
      fail("malformed number '" + text + "'");
    }
    return value;
  }

 private:
  std::size_t line_;
  std::string key_;
};

std::vector<UserDims> parse_users(const std::string& value, const LineError& err) {
  static const std::regex group(R"(^(\d+)\s*[xX]\s*(\d+)\s*(?:\*\s*(\d+))?$)");
  std::vector<UserDims> users;
  for (const auto& item : split_list(value)) {
    std::smatch m;
    if (!std::regex_match(item, m, group)) err.fail("expected `QxP *N`, got '" + item + "'");
    const auto q = err.number<long long>(m[1].str());
    const auto p = err.number<long long>(m[2].str());
    const auto count = m[3].matched ? err.number<long long>(m[3].str()) : 1;
    if (count < 1) err.fail("user group count must be positive");
    for (long long i = 0; i < count; ++i) users.push_back({q, p});
  }
  if (users.empty()) err.fail("no users");
  return users;
}

std::vector<double> parse_grid(const std::string& value, const LineError& err) {
  std::vector<std::string> parts;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(trim(item));
  if (parts.size() == 1) return {err.number<double>(parts[0])};
  if (parts.size() != 3) err.fail("expected start:stop:step");
  const double start = err.number<double>(parts[0]);
  const double stop = err.number<double>(parts[1]);
  const double step = err.number<double>(parts[2]);
  if (!(step > 0)) err.fail("step must be positive");
  if (!(stop >= start)) err.fail("stop must not be below start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> grid;
  for (std::size_t i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

}  // namespace

SweepConfig parse_config(std::string_view text) {
  SweepConfig config;
  config.scenario.bs_antennas = 64;
  config.scenario.total_power = 1.0;
  std::map<std::string, std::size_t> seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": expected `key = value`");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const LineError err(line_no, key);
    if (const auto it = seen.find(key); it != seen.end()) {
      err.fail("duplicate key (first set on line " + std::to_string(it->second) + ")");
    }
    seen.emplace(key, line_no);
    if (value.empty()) err.fail("missing value");

    if (key == "t") {
      config.scenario.bs_antennas = err.number<long long>(value);
    } else if (key == "users") {
      config.scenario.users = parse_users(value, err);
    } else if (key == "power") {
      config.scenario.total_power = err.number<double>(value);
    } else if (key == "grid") {
      config.su_sinr_grid_db = parse_grid(value, err);
    } else if (key == "precoders") {
      for (const auto& name : split_list(value)) {
        try {
          config.precoders.push_back(parse_precoder_scheme(name));
        } catch (const Error& e) {
          err.fail(e.what());
        }
      }
    } else if (key == "detectors") {
      for (const auto& name : split_list(value)) {
        try {
          config.detectors.push_back(parse_detector_scheme(name));
        } catch (const Error& e) {
          err.fail(e.what());
        }
      }
    } else if (key == "trials") {
      const auto trials = err.number<long long>(value);
      if (trials < 1) err.fail("trials must be at least 1");
      config.trials = static_cast<std::size_t>(trials);
    } else if (key == "seed") {
      config.base_seed = err.number<std::uint64_t>(value);
    } else if (key == "output") {
      config.output_path = value;
    } else {
      err.fail("unknown key");
    }
  }

  for (const char* required : {"users", "grid", "precoders", "detectors"}) {
    if (!seen.contains(required)) {
      throw Error(ErrorCode::kParse, std::string("missing required key '") + required + "'");
    }
  }
  config.validate();
  return config;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t index) {
  return derive_seed(base_seed, index);
}

namespace {

struct TrialSample {
  double mu_se = 0.0;
  double su_se = 0.0;
  double ratio = 0.0;
  double interference = 0.0;
};

struct SchemePair {
  PrecoderScheme precoder;
  DetectorScheme detector;
};

std::vector<TrialSample> run_trial(const SweepConfig& config, const std::vector<SchemePair>& pairs,
                                   std::size_t trial) {
  Scenario scenario = config.scenario;
  scenario.seed = trial_seed(config.base_seed, trial);
  const ChannelSet channels = generate_channels(scenario);
  std::vector<TrialSample> out;
  out.reserve(pairs.size() * config.su_sinr_grid_db.size());
  for (const auto& pair : pairs) {
    for (const double db : config.su_sinr_grid_db) {
      const NoiseModel noise = calibrate_noise(channels, db);
      const LinkReport report = su_mu_report(channels, pair.precoder, pair.detector, noise);
      TrialSample s;
      s.mu_se = report.mu_se;
      s.su_se = report.su_se_total;
      s.ratio = report.ratio;
      for (const double p : report.interference_power) s.interference += p;
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config, unsigned threads) {
  config.validate();
  std::vector<SchemePair> pairs;
  for (const auto p : config.precoders) {
    for (const auto& d : config.detectors) pairs.push_back({p, d});
  }

  std::vector<std::vector<TrialSample>> samples(config.trials);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.trials));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t trial = next.fetch_add(1);
      if (trial >= config.trials) return;
      try {
        samples[trial] = run_trial(config, pairs, trial);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(config.trials);
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  // Accumulate in trial order so the sums do not depend on scheduling.
  std::vector<SweepRow> rows;
  const std::size_t grid_size = config.su_sinr_grid_db.size();
  const double n = static_cast<double>(config.trials);
  for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
    for (std::size_t gi = 0; gi < grid_size; ++gi) {
      SweepRow row;
      row.precoder = to_string(pairs[pi].precoder);
      row.detector = pairs[pi].detector.name();
      row.su_sinr_db = config.su_sinr_grid_db[gi];
      row.trials = config.trials;
      row.base_seed = config.base_seed;
      for (std::size_t t = 0; t < config.trials; ++t) {
        const TrialSample& s = samples[t][pi * grid_size + gi];
        row.mu_se_mean += s.mu_se;
        row.su_se_mean += s.su_se;
        row.ratio_mean += s.ratio;
        row.interference_power_mean += s.interference;
      }
      row.mu_se_mean /= n;
      row.su_se_mean /= n;
      row.ratio_mean /= n;
      row.interference_power_mean /= n;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string format_csv(const std::vector<SweepRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%.9g,%.9g,%.9g,%.9g,%.9g,%zu,%llu\n",
                  r.precoder.c_str(), r.detector.c_str(), r.su_sinr_db, r.mu_se_mean,
                  r.su_se_mean, r.ratio_mean, r.interference_power_mean, r.trials,
                  static_cast<unsigned long long>(r.base_seed));
    out += buf;
  }
  return out;
}

}  // namespace rczf
