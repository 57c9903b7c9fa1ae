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
#include <vector>

#include "rczf/metrics.hpp"

namespace rczf {

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;      // worst observed residual (or ratio, see detail)
  double threshold = 0.0;
  std::string detail;
};

struct CheckOptions {
  std::uint64_t first_seed = 1;
  std::size_t scenarios = 100;
  Scenario scenario = Scenario::uniform(64, 8, {4, 2});
};

/// Minimum of ||G A_k - I||_F over detectors G whose rows annihilate every
/// interfering column H_k W_j (j != k). Zero iff interference can be
/// cancelled for user k.
double nulling_residual(const ChannelSet& channels, const Precoder& precoder, std::size_t user);

/// Numerical versions of the interference-cancellation results: the
/// reduced-channel ZF condition, MMSE-IRC and generalized-LSE limits, and
/// the QR-MLD identities. One result per property.
std::vector<CheckResult> run_checks(const CheckOptions& options = {});

}  // namespace rczf
