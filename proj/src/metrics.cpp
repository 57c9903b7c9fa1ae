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


#include "rczf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rczf {

EffectiveLinks effective_links(const ChannelSet& channels, const Precoder& precoder,
                               const Detector& detector) {
  const std::size_t n = channels.h.size();
  if (precoder.w.size() != n || detector.g.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "effective_links: user counts differ");
  }
  EffectiveLinks t(n);
  for (std::size_t k = 0; k < n; ++k) {
    const CMat gh = detector.g[k] * channels.h[k];
    t[k].reserve(n);
    for (std::size_t j = 0; j < n; ++j) t[k].push_back(gh * precoder.w[j]);
  }
  return t;
}

std::vector<double> sinr_per_layer(const std::vector<CMat>& links_of_user, std::size_t user,
                                   const CMat& g, const CMat& l) {
  const CMat& own = links_of_user.at(user);
  const CMat gl = g * l;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(own.rows()));
  for (Index i = 0; i < own.rows(); ++i) {
    const double signal = std::norm(own(i, i));
    const double self = own.row(i).squaredNorm() - signal;
    double cross = 0.0;
    for (std::size_t j = 0; j < links_of_user.size(); ++j) {
      if (j != user) cross += links_of_user[j].row(i).squaredNorm();
    }
    const double noise = gl.row(i).squaredNorm();
    const double denominator = std::max(self, 0.0) + cross + noise;
    double sinr = 0.0;
    if (signal > 0.0) {
      sinr = denominator > 0.0 ? std::min(signal / denominator, kSinrCap) : kSinrCap;
    }
    out.push_back(sinr);
  }
  return out;
}

double spectral_efficiency(const std::vector<double>& sinrs) {
  double se = 0.0;
  for (const double s : sinrs) se += std::log2(1.0 + s);
  return se;
}

std::string to_string(PrecoderScheme scheme) {
  switch (scheme) {
    case PrecoderScheme::kZf: return "zf";
    case PrecoderScheme::kEzf: return "ezf";
    case PrecoderScheme::kMrt: return "mrt";
  }
  return "unknown";
}

PrecoderScheme parse_precoder_scheme(const std::string& text) {
  if (text == "zf") return PrecoderScheme::kZf;
  if (text == "ezf") return PrecoderScheme::kEzf;
  if (text == "mrt") return PrecoderScheme::kMrt;
  throw Error(ErrorCode::kParse, "unknown precoder '" + text + "'");
}

Precoder build_precoder(PrecoderScheme scheme, const ChannelSet& channels) {
  const double power = channels.scenario.total_power;
  switch (scheme) {
    case PrecoderScheme::kZf: return rczf_precode(reduce_full_zf(channels), power);
    case PrecoderScheme::kEzf: return rczf_precode(reduce_ezf(channels), power);
    case PrecoderScheme::kMrt: return mrt_precode(channels, power);
  }
  throw Error(ErrorCode::kConfig, "unknown precoder scheme");
}

LinkReport link_report(const ChannelSet& channels, const Precoder& precoder,
                       const Detector& detector, const NoiseModel& noise) {
  LinkReport report;
  report.links = effective_links(channels, precoder, detector);
  const std::size_t n = channels.h.size();
  for (std::size_t k = 0; k < n; ++k) {
    auto sinr = sinr_per_layer(report.links[k], k, detector.g[k], noise.l[k]);
    report.se.push_back(spectral_efficiency(sinr));
    report.mu_se += report.se.back();
    report.sinr.push_back(std::move(sinr));
    double interference = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != k) interference += report.links[k][j].squaredNorm();
    }
    report.interference_power.push_back(interference);
  }
  return report;
}

namespace {

NoiseModel noise_of_user(const NoiseModel& noise, std::size_t user) {
  NoiseModel out;
  out.sigma = noise.sigma;
  out.l = {noise.l.at(user)};
  return out;
}

std::vector<double> alone_sinr(const ChannelSet& alone, const Precoder& precoder,
                               const DetectorScheme& detector, const NoiseModel& noise) {
  const CovarianceModel cov = build_covariance(alone, precoder, noise);
  const Detector g = build_detector(detector, cov, precoder, noise);
  const auto links = effective_links(alone, precoder, g);
  return sinr_per_layer(links[0], 0, g.g[0], noise.l[0]);
}

Precoder block_of_user(const Precoder& precoder, std::size_t user) {
  Precoder out;
  out.w = {precoder.w.at(user)};
  out.beta = precoder.beta;
  out.kind = precoder.kind;
  if (precoder.reduced) {
    ReducedChannel r;
    r.v = {precoder.reduced->v.at(user)};
    r.b = {precoder.reduced->b.at(user)};
    r.kind = precoder.reduced->kind;
    out.reduced = std::move(r);
  }
  return out;
}

}  // namespace

double single_user_se(const ChannelSet& channels, std::size_t user, const Precoder& precoder,
                      const DetectorScheme& detector, const NoiseModel& noise) {
  return spectral_efficiency(alone_sinr(channels.single_user(user),
                                        block_of_user(precoder, user), detector,
                                        noise_of_user(noise, user)));
}

double mean_single_user_sinr(const ChannelSet& channels, const DetectorScheme& detector,
                             const NoiseModel& noise) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < channels.h.size(); ++k) {
    const ChannelSet alone = channels.single_user(k);
    const Precoder ezf = build_precoder(PrecoderScheme::kEzf, alone);
    for (const double s : alone_sinr(alone, ezf, detector, noise_of_user(noise, k))) {
      sum += s;
      ++count;
    }
  }
  return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

LinkReport su_mu_report(const ChannelSet& channels, PrecoderScheme precoder_scheme,
                        const DetectorScheme& detector_scheme, const NoiseModel& noise) {
  const Precoder precoder = build_precoder(precoder_scheme, channels);
  const CovarianceModel cov = build_covariance(channels, precoder, noise);
  const Detector detector = build_detector(detector_scheme, cov, precoder, noise);
  LinkReport report = link_report(channels, precoder, detector, noise);
  for (std::size_t k = 0; k < channels.h.size(); ++k) {
    report.su_se.push_back(single_user_se(channels, k, precoder, detector_scheme, noise));
    report.su_se_total += report.su_se.back();
  }
  report.ratio = report.mu_se > 0.0 ? report.su_se_total / report.mu_se
                                    : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace rczf
