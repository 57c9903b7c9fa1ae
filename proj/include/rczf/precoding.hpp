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

#include <optional>
#include <vector>

#include "rczf/system_model.hpp"

namespace rczf {

enum class ReductionKind { kFullZf, kEzf, kCustom };

/// Reduced channels V_k = B_k H_k. V_k is p_k x t (rows span what user k
/// must be protected on), B_k is p_k x q_k.
struct ReducedChannel {
  std::vector<CMat> v;
  std::vector<CMat> b;
  ReductionKind kind = ReductionKind::kCustom;

  /// Row-stack of all V_k, p x t.
  CMat stacked() const;
};

enum class PrecoderKind { kRczf, kMrt };

/// Column blocks W_k (t x p_k) with the global scale `beta` already applied.
/// For RCZF precoders V_k W_j = beta delta_kj I.
struct Precoder {
  std::vector<CMat> w;
  double beta = 1.0;
  std::optional<ReducedChannel> reduced;
  PrecoderKind kind = PrecoderKind::kRczf;

  /// Column-stack of all W_k, t x p.
  CMat stacked() const;
};

/// Plain zero forcing: V_k = H_k. Requires p_k = q_k for every user.
ReducedChannel reduce_full_zf(const ChannelSet& channels);

/// Eigen zero forcing: with H_k = U diag(S) Vh, B_k = (I | 0) diag(S)^-1 U*,
/// so V_k holds the p_k dominant right-singular rows of H_k.
ReducedChannel reduce_ezf(const ChannelSet& channels);

/// Any caller-chosen B_k; V_k = B_k H_k must have full row rank.
ReducedChannel reduce_custom(const ChannelSet& channels, std::vector<CMat> b);

/// W = beta pinv(V) split per user, beta fixing trace(W W*) = total_power.
Precoder rczf_precode(const ReducedChannel& reduced, double total_power);

/// Matched filter onto each user's EZF directions: W_k = beta V_k*.
Precoder mrt_precode(const ChannelSet& channels, double total_power);

/// Residuals of the three reduced-channel zero-forcing conditions.
struct RczfResiduals {
  double factorization = 0.0;  // max_k ||V_k - B_k H_k||_F / ||V_k||_F
  double leakage = 0.0;        // max_{i != j} ||V_i W_j||_F / ||W||_F
  bool full_rank = true;       // rank(V_k W_k) = rank(W_k) = p_k for all k
};

RczfResiduals rczf_residuals(const ChannelSet& channels, const ReducedChannel& reduced,
                             const Precoder& precoder);

}  // namespace rczf
