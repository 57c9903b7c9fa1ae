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


#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rczf/metrics.hpp"

namespace rczf {

/// A sweep over single-user SINR for every (precoder, detector) pair.
struct SweepConfig {
  Scenario scenario;                  // seed field unused; see base_seed
  std::vector<double> su_sinr_grid_db;
  std::vector<PrecoderScheme> precoders;
  std::vector<DetectorScheme> detectors;
  std::size_t trials = 100;
  std::uint64_t base_seed = 1;
  std::string output_path;            // empty: standard output

  /// Throws kConfig for an empty or non-increasing grid, zero trials, an
  /// invalid scenario or a scheme that cannot serve it (zf with p_k < q_k).
  void validate() const;
};

struct SweepRow {
  std::string precoder;
  std::string detector;
  double su_sinr_db = 0.0;
  double mu_se_mean = 0.0;
  double su_se_mean = 0.0;
  double ratio_mean = 0.0;
  double interference_power_mean = 0.0;
  std::size_t trials = 0;
  std::uint64_t base_seed = 0;
};

/// Flat `key = value` format with `#` comments. Keys: t, users, power,
/// grid, precoders, detectors, trials, seed, output. `users` takes
/// comma-separated groups `QxP *N`; `grid` is `start:stop:step` in dB
/// (inclusive) or a single value.
SweepConfig parse_config(std::string_view text);
SweepConfig load_config(const std::string& path);

/// Scenario seed of trial `index`.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t index);

/// Runs every grid point x scheme pair over `trials` channel draws. Rows are
/// ordered precoder-major, then detector, then grid. `threads` = 0 uses the
/// hardware concurrency; the result does not depend on it.
std::vector<SweepRow> run_sweep(const SweepConfig& config, unsigned threads = 0);

inline constexpr std::string_view kCsvHeader =
    "precoder,detector,su_sinr_db,mu_se_mean,su_se_mean,ratio_mean,"
    "interference_power_mean,trials,base_seed";

std::string format_csv(const std::vector<SweepRow>& rows);

}  // namespace rczf
