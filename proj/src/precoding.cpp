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


#include "rczf/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rczf {

CMat ReducedChannel::stacked() const { return numerics::vstack<double>(v); }

CMat Precoder::stacked() const { return numerics::hstack<double>(w); }

ReducedChannel reduce_full_zf(const ChannelSet& channels) {
  ReducedChannel out;
  out.kind = ReductionKind::kFullZf;
  for (std::size_t k = 0; k < channels.h.size(); ++k) {
    const auto& u = channels.scenario.users[k];
    if (u.layers != u.antennas) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "full zero forcing needs p_k = q_k; user " + std::to_string(k) +
                      " has q=" + std::to_string(u.antennas) +
                      ", p=" + std::to_string(u.layers));
    }
    out.v.push_back(channels.h[k]);
    out.b.push_back(CMat::Identity(u.antennas, u.antennas));
  }
  return out;
}

ReducedChannel reduce_ezf(const ChannelSet& channels) {
  ReducedChannel out;
  out.kind = ReductionKind::kEzf;
  for (std::size_t k = 0; k < channels.h.size(); ++k) {
    const Index p = channels.scenario.users[k].layers;
    const auto f = numerics::svd(channels.h[k]);
    if (p > f.s.size() || !(f.s(p - 1) > numerics::kRankCutoff * f.s(0))) {
      throw Error(ErrorCode::kIllConditioned,
                  "user " + std::to_string(k) + ": singular value " +
                      std::to_string(p) + " is below the rank cutoff");
    }
    const RVec inv_s = f.s.head(p).cwiseInverse();
    CMat b = inv_s.asDiagonal() * f.u.leftCols(p).adjoint();
    out.v.push_back(b * channels.h[k]);
    out.b.push_back(std::move(b));
  }
  return out;
}

ReducedChannel reduce_custom(const ChannelSet& channels, std::vector<CMat> b) {
  if (b.size() != channels.h.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "reduce_custom: one B_k per user required");
  }
  ReducedChannel out;
  out.kind = ReductionKind::kCustom;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const auto& u = channels.scenario.users[k];
    if (b[k].rows() != u.layers || b[k].cols() != u.antennas) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "reduce_custom: B_" + std::to_string(k) + " must be p_k x q_k");
    }
    CMat v = b[k] * channels.h[k];
    if (numerics::rank(v) != u.layers) {
      throw Error(ErrorCode::kRankDeficient,
                  "reduce_custom: V_" + std::to_string(k) + " lacks full row rank");
    }
    out.v.push_back(std::move(v));
  }
  out.b = std::move(b);
  return out;
}

namespace {

std::vector<Index> row_counts(const std::vector<CMat>& blocks) {
  std::vector<Index> out;
  for (const auto& m : blocks) out.push_back(m.rows());
  return out;
}

double power_scale(const CMat& unscaled, double total_power) {
  if (!(total_power > 0) || !std::isfinite(total_power)) {
    throw Error(ErrorCode::kInvalidInput, "total power must be positive and finite");
  }
  const double norm2 = unscaled.squaredNorm();
  if (!(norm2 > 0)) throw Error(ErrorCode::kSingular, "precoder has zero energy");
  return std::sqrt(total_power / norm2);
}

}  // namespace

Precoder rczf_precode(const ReducedChannel& reduced, double total_power) {
  const CMat v = reduced.stacked();
  const RVec s = numerics::singular_values(v);
  if (s.size() < v.rows() || !(s(s.size() - 1) > numerics::kRankCutoff * s(0))) {
    throw Error(ErrorCode::kInfeasibleZeroForcing,
                "stacked reduced channel (" + std::to_string(v.rows()) + " x " +
                    std::to_string(v.cols()) +
                    ") lacks full row rank: too many layers or colinear users");
  }
  const CMat w0 = numerics::pinv(v);
  Precoder out;
  out.beta = power_scale(w0, total_power);
  const auto widths = row_counts(reduced.v);
  out.w = numerics::split_cols(out.beta * w0, widths);
  out.reduced = reduced;
  out.kind = PrecoderKind::kRczf;
  return out;
}

Precoder mrt_precode(const ChannelSet& channels, double total_power) {
  const ReducedChannel reduced = reduce_ezf(channels);
  std::vector<CMat> matched;
  for (const auto& v : reduced.v) matched.push_back(v.adjoint());
  const CMat w0 = numerics::hstack<double>(matched);
  Precoder out;
  out.beta = power_scale(w0, total_power);
  for (auto& m : matched) m *= out.beta;
  out.w = std::move(matched);
  out.reduced = reduced;
  out.kind = PrecoderKind::kMrt;
  return out;
}

RczfResiduals rczf_residuals(const ChannelSet& channels, const ReducedChannel& reduced,
                             const Precoder& precoder) {
  RczfResiduals r;
  const double w_norm = precoder.stacked().norm();
  const std::size_t n = reduced.v.size();
  for (std::size_t k = 0; k < n; ++k) {
    r.factorization = std::max(
        r.factorization, numerics::relative_error(reduced.b[k] * channels.h[k], reduced.v[k]));
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) {
        const Index p = precoder.w[k].cols();
        r.full_rank = r.full_rank && numerics::rank(reduced.v[k] * precoder.w[k]) == p &&
                      numerics::rank(precoder.w[k]) == p;
      } else {
        r.leakage = std::max(r.leakage, (reduced.v[k] * precoder.w[j]).norm() / w_norm);
      }
    }
  }
  return r;
}

}  // namespace rczf
