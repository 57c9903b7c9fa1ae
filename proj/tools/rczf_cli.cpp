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


// rczf: sweep runner, property checks and channel fixtures.
//
//   rczf run <config> [--threads N]
//   rczf check [--scenarios N] [--first-seed S]
//   rczf dump-channels <config> <path> [--trial I]
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "rczf/checks.hpp"
#include "rczf/experiment.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

int run_command(const std::string& config_path, unsigned threads) {
  const rczf::SweepConfig config = rczf::load_config(config_path);
  const std::string csv = rczf::format_csv(rczf::run_sweep(config, threads));
  if (config.output_path.empty()) {
    std::cout << csv;
    return 0;
  }
  std::ofstream out(config.output_path, std::ios::binary);
  if (!out) {
    throw rczf::Error(rczf::ErrorCode::kIo, "cannot write '" + config.output_path + "'");
  }
  out << csv;
  std::cerr << "wrote " << config.output_path << '\n';
  return 0;
}

int check_command(std::size_t scenarios, std::uint64_t first_seed) {
  rczf::CheckOptions options;
  options.scenarios = scenarios;
  options.first_seed = first_seed;
  bool all = true;
  for (const auto& r : rczf::run_checks(options)) {
    std::printf("[%s] %-28s worst=%.3e threshold=%.1e  %s\n", r.passed ? "PASS" : "FAIL",
                r.name.c_str(), r.worst, r.threshold, r.detail.c_str());
    all = all && r.passed;
  }
  return all ? 0 : kExitNumerical;
}

int dump_command(const std::string& config_path, const std::string& path, std::size_t trial) {
  const rczf::SweepConfig config = rczf::load_config(config_path);
  rczf::Scenario scenario = config.scenario;
  scenario.seed = rczf::trial_seed(config.base_seed, trial);
  const rczf::ChannelSet channels = rczf::generate_channels(scenario);
  std::ofstream out(path);
  if (!out) throw rczf::Error(rczf::ErrorCode::kIo, "cannot write '" + path + "'");
  rczf::write_channels(out, channels);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-user MIMO link-level simulator for reduced-channel zero forcing"};
  app.require_subcommand(1);

  std::string config_path;
  unsigned threads = 0;
  auto* run = app.add_subcommand("run", "run a sweep and write its CSV");
  run->add_option("config", config_path, "sweep config file")->required();
  run->add_option("-j,--threads", threads, "worker threads (0 = all cores)");

  std::size_t scenarios = 100;
  std::uint64_t first_seed = 1;
  auto* check = app.add_subcommand("check", "run the built-in interference-cancellation checks");
  check->add_option("-n,--scenarios", scenarios, "random scenarios per property");
  check->add_option("--first-seed", first_seed, "seed of the first scenario");

  std::string dump_path;
  std::size_t trial = 0;
  auto* dump = app.add_subcommand("dump-channels", "write the channels of one trial");
  dump->add_option("config", config_path, "sweep config file")->required();
  dump->add_option("path", dump_path, "output file")->required();
  dump->add_option("--trial", trial, "trial index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return run_command(config_path, threads);
    if (*check) return check_command(scenarios, first_seed);
    if (*dump) return dump_command(config_path, dump_path, trial);
  } catch (const rczf::Error& e) {
    std::cerr << "rczf: " << e.what() << '\n';
    return e.is_config_error() ? kExitConfig : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "rczf: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
