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

#include <string>
#include <vector>

#include "rczf/detection.hpp"

namespace rczf {

/// Post-detection SINR ceiling, so perfect noiseless links stay finite.
inline constexpr double kSinrCap = 1e12;

/// T[k][j] = G_k H_k W_j, p_k x p_j.
using EffectiveLinks = std::vector<std::vector<CMat>>;

EffectiveLinks effective_links(const ChannelSet& channels, const Precoder& precoder,
                               const Detector& detector);

/// Per-layer SINR of user k. Off-diagonal entries of T_kk count as
/// interference alongside the cross-user blocks T_kj.
std::vector<double> sinr_per_layer(const std::vector<CMat>& links_of_user, std::size_t user,
                                   const CMat& g, const CMat& l);

/// Shannon sum rate, sum_i log2(1 + sinr_i).
double spectral_efficiency(const std::vector<double>& sinrs);

enum class PrecoderScheme { kZf, kEzf, kMrt };

std::string to_string(PrecoderScheme scheme);
PrecoderScheme parse_precoder_scheme(const std::string& text);

Precoder build_precoder(PrecoderScheme scheme, const ChannelSet& channels);

struct LinkReport {
  EffectiveLinks links;
  std::vector<std::vector<double>> sinr;  // [user][layer], multi-user service
  std::vector<double> se;                 // per user, multi-user service
  std::vector<double> su_se;              // per user, served alone
  std::vector<double> interference_power; // per user, sum_{j != k} ||T_kj||_F^2
  double mu_se = 0.0;
  double su_se_total = 0.0;
  double ratio = 0.0;
};

/// Multi-user metrics for an already built system.
LinkReport link_report(const ChannelSet& channels, const Precoder& precoder,
                       const Detector& detector, const NoiseModel& noise);

/// Single-user spectral efficiency of user k: the co-scheduled streams are
/// switched off, user k keeps its own block W_k of `precoder`, and the
/// detector of the given scheme is rebuilt from the single-user covariance
/// L_k L_k*. Only inter-user interference separates this from the MU value.
double single_user_se(const ChannelSet& channels, std::size_t user, const Precoder& precoder,
                      const DetectorScheme& detector, const NoiseModel& noise);

/// Mean per-layer SINR (linear) with every user served alone by its own
/// EZF precoder at the full power budget. This is the quantity the noise
/// calibration targets.
double mean_single_user_sinr(const ChannelSet& channels, const DetectorScheme& detector,
                             const NoiseModel& noise);

/// Full SU/MU comparison for the named schemes, ratio = su_se / mu_se with
/// both summed over users.
LinkReport su_mu_report(const ChannelSet& channels, PrecoderScheme precoder,
                        const DetectorScheme& detector, const NoiseModel& noise);

}  // namespace rczf
