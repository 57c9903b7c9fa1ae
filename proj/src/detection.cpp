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


#include "rczf/detection.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace rczf {

CovarianceModel build_covariance(const ChannelSet& channels, const Precoder& precoder,
                                 const NoiseModel& noise) {
  const std::size_t n = channels.h.size();
  if (precoder.w.size() != n || noise.l.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "build_covariance: channels, precoder and noise disagree on user count");
  }
  CovarianceModel cov;
  cov.noiseless = noise.is_noiseless();
  cov.l = noise.l;
  for (std::size_t k = 0; k < n; ++k) {
    const CMat& h = channels.h[k];
    const Index q = h.rows();
    if (noise.l[k].rows() != q || noise.l[k].cols() != q) {
      throw Error(ErrorCode::kDimensionMismatch, "build_covariance: L_k must be q_k x q_k");
    }
    CMat r = noise.l[k] * noise.l[k].adjoint();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      const CMat hw = h * precoder.w[j];
      r.noalias() += hw * hw.adjoint();
    }
    cov.a.push_back(h * precoder.w[k]);
    cov.r.push_back(0.5 * (r + r.adjoint()));
  }
  return cov;
}

std::string DetectorScheme::name() const {
  switch (kind) {
    case DetectorKind::kMmseIrc: return "mmse-irc";
    case DetectorKind::kMmse: return "mmse";
    case DetectorKind::kGenLse: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "gen-lse:%.9g", lambda);
      return buf;
    }
    case DetectorKind::kLseLimit: return "lse-limit";
    case DetectorKind::kQrMldLinear: return "qr-mld";
    case DetectorKind::kReferenceIc: return "reference-ic";
  }
  return "unknown";
}

DetectorScheme parse_detector_scheme(const std::string& text) {
  if (text == "mmse-irc") return {DetectorKind::kMmseIrc};
  if (text == "mmse") return {DetectorKind::kMmse};
  if (text == "lse-limit") return {DetectorKind::kLseLimit};
  if (text == "qr-mld") return {DetectorKind::kQrMldLinear};
  if (text == "reference-ic") return {DetectorKind::kReferenceIc};
  if (text == "gen-lse") return {DetectorKind::kGenLse, 1.0};
  if (text.rfind("gen-lse:", 0) == 0) {
    const std::string value = text.substr(8);
    std::size_t used = 0;
    double lambda = 0.0;
    try {
      lambda = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size() || !(lambda > 0) || !std::isfinite(lambda)) {
      throw Error(ErrorCode::kParse, "gen-lse lambda must be a positive number: '" + text + "'");
    }
    return {DetectorKind::kGenLse, lambda};
  }
  throw Error(ErrorCode::kParse, "unknown detector '" + text + "'");
}

namespace {

Detector lse_family(const CovarianceModel& cov, double lambda, DetectorScheme scheme) {
  Detector out;
  out.scheme = scheme;
  for (std::size_t k = 0; k < cov.a.size(); ++k) {
    const CMat& a = cov.a[k];
    const CMat m = a * a.adjoint() + lambda * cov.r[k];
    CMat x;
    if (!numerics::try_solve_hpd(m, a, x)) {
      throw Error(ErrorCode::kSingular,
                  "user " + std::to_string(k) +
                      ": A A* + lambda R is singular; invertibility requires at least q_k = " +
                      std::to_string(a.rows()) + " layers in total");
    }
    out.g.push_back(x.adjoint());
  }
  return out;
}

CMat apply_inverse(const CMat& whitening, const CMat& rhs) {
  if (whitening.isLowerTriangular(0.0)) {
    return whitening.triangularView<Eigen::Lower>().solve(rhs);
  }
  return whitening.partialPivLu().solve(rhs);
}

}  // namespace

Detector mmse_irc(const CovarianceModel& cov) {
  return lse_family(cov, 1.0, {DetectorKind::kMmseIrc});
}

Detector gen_lse(const CovarianceModel& cov, double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidInput, "gen_lse: lambda must be positive");
  }
  return lse_family(cov, lambda, {DetectorKind::kGenLse, lambda});
}

Detector plain_mmse(const CovarianceModel& cov, double sigma) {
  if (!(sigma >= 0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvalidInput, "plain_mmse: sigma must be non-negative");
  }
  Detector out;
  out.scheme = {DetectorKind::kMmse};
  for (std::size_t k = 0; k < cov.a.size(); ++k) {
    const CMat& a = cov.a[k];
    const CMat m =
        a.adjoint() * a + (sigma * sigma) * CMat::Identity(a.cols(), a.cols());
    CMat g;
    if (!numerics::try_solve_hpd(m, a.adjoint(), g)) {
      throw Error(ErrorCode::kSingular,
                  "user " + std::to_string(k) + ": A* A + sigma^2 I is singular");
    }
    out.g.push_back(std::move(g));
  }
  return out;
}

Detector lse_limit(const CovarianceModel& cov) {
  if (cov.noiseless) {
    throw Error(ErrorCode::kNeedsExternalNoise,
                "lse_limit: R_k is singular without external noise");
  }
  Detector out;
  out.scheme = {DetectorKind::kLseLimit};
  for (std::size_t k = 0; k < cov.a.size(); ++k) {
    const CMat& a = cov.a[k];
    CMat r_inv_a;
    if (!numerics::try_solve_hpd(cov.r[k], a, r_inv_a)) {
      throw Error(ErrorCode::kNeedsExternalNoise,
                  "user " + std::to_string(k) + ": R_k is not invertible");
    }
    const CMat gram = a.adjoint() * r_inv_a;
    CMat g;
    if (!numerics::try_solve_hpd(0.5 * (gram + gram.adjoint()), r_inv_a.adjoint(), g)) {
      throw Error(ErrorCode::kSingular,
                  "user " + std::to_string(k) + ": A* R^-1 A is singular");
    }
    out.g.push_back(std::move(g));
  }
  return out;
}

QrMldFactors qr_mld_factors(const CMat& a, const CMat& r) {
  if (!(numerics::condition_number(r) <= numerics::kMaxCondition)) {
    throw Error(ErrorCode::kNeedsExternalNoise, "qr-mld: R_k is not invertible");
  }
  CMat whitening;
  try {
    whitening = numerics::cholesky(r);
  } catch (const Error& e) {
    throw Error(ErrorCode::kNeedsExternalNoise, std::string("qr-mld: ") + e.what());
  }
  return qr_mld_factors_with(a, whitening);
}

QrMldFactors qr_mld_factors_with(const CMat& a, const CMat& whitening) {
  if (whitening.rows() != a.rows() || whitening.cols() != a.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "qr-mld: whitening must be q_k x q_k");
  }
  if (!(numerics::condition_number(whitening) <= std::sqrt(numerics::kMaxCondition))) {
    throw Error(ErrorCode::kNeedsExternalNoise, "qr-mld: whitening factor is singular");
  }
  auto f = numerics::qr(apply_inverse(whitening, a));
  return {whitening, std::move(f.q), std::move(f.r)};
}

CMat qr_mld_matrix(const QrMldFactors& f) {
  const CMat projected =
      f.q.adjoint() * apply_inverse(f.whitening, CMat::Identity(f.whitening.rows(),
                                                                f.whitening.cols()));
  return f.r.triangularView<Eigen::Upper>().solve(projected);
}

Detector qr_mld_linear(const CovarianceModel& cov) {
  if (cov.noiseless) {
    throw Error(ErrorCode::kNeedsExternalNoise,
                "qr-mld: R_k is singular without external noise");
  }
  Detector out;
  out.scheme = {DetectorKind::kQrMldLinear};
  for (std::size_t k = 0; k < cov.a.size(); ++k) {
    out.g.push_back(qr_mld_matrix(qr_mld_factors(cov.a[k], cov.r[k])));
  }
  return out;
}

Detector reference_ic(const ReducedChannel& reduced, double beta) {
  if (!(beta > 0) || !std::isfinite(beta)) {
    throw Error(ErrorCode::kInvalidInput, "reference_ic: beta must be positive");
  }
  Detector out;
  out.scheme = {DetectorKind::kReferenceIc};
  for (std::size_t k = 0; k < reduced.b.size(); ++k) {
    const CMat& b = reduced.b[k];
    if (numerics::rank(b) != b.rows()) {
      throw Error(ErrorCode::kUniquenessPrecondition,
                  "user " + std::to_string(k) + ": rank(B_k) != p_k");
    }
    out.g.push_back(b / beta);
  }
  return out;
}

Detector build_detector(const DetectorScheme& scheme, const CovarianceModel& cov,
                        const Precoder& precoder, const NoiseModel& noise) {
  switch (scheme.kind) {
    case DetectorKind::kMmseIrc: return mmse_irc(cov);
    case DetectorKind::kMmse: return plain_mmse(cov, noise.sigma);
    case DetectorKind::kGenLse: return gen_lse(cov, scheme.lambda);
    case DetectorKind::kLseLimit: return lse_limit(cov);
    case DetectorKind::kQrMldLinear: return qr_mld_linear(cov);
    case DetectorKind::kReferenceIc:
      if (precoder.kind != PrecoderKind::kRczf || !precoder.reduced) {
        throw Error(ErrorCode::kConfig, "reference-ic requires an RCZF precoder");
      }
      return reference_ic(*precoder.reduced, precoder.beta);
  }
  throw Error(ErrorCode::kConfig, "unknown detector scheme");
}

Constellation Constellation::qpsk() {
  const double a = 1.0 / std::sqrt(2.0);
  return {ConstellationKind::kQpsk, {{a, a}, {-a, a}, {-a, -a}, {a, -a}}};
}

Constellation Constellation::qam16() {
  Constellation c{ConstellationKind::kQam16, {}};
  const double scale = 1.0 / std::sqrt(10.0);
  for (int re : {-3, -1, 1, 3}) {
    for (int im : {-3, -1, 1, 3}) c.points.emplace_back(re * scale, im * scale);
  }
  return c;
}

std::complex<double> Constellation::slice(std::complex<double> z) const {
  std::complex<double> best = points.front();
  double best_distance = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    const double d = std::norm(z - p);
    if (d < best_distance) {
      best_distance = d;
      best = p;
    }
  }
  return best;
}

CVec sic_slice(const CVec& z, const CMat& upper, const Constellation& constellation) {
  const Index n = upper.cols();
  if (upper.rows() != n || z.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "sic_slice: shape mismatch");
  }
  CVec decided(n);
  for (Index i = n - 1; i >= 0; --i) {
    std::complex<double> residual = z(i);
    for (Index j = i + 1; j < n; ++j) residual -= upper(i, j) * decided(j);
    decided(i) = constellation.slice(residual / upper(i, i));
  }
  return decided;
}

CVec qr_mld_detect(const CVec& y, const QrMldFactors& factors,
                   const Constellation& constellation) {
  if (y.size() != factors.whitening.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "qr_mld_detect: y must have length q_k");
  }
  const CVec z = factors.q.adjoint() * apply_inverse(factors.whitening, y);
  return sic_slice(z, factors.r, constellation);
}

CVec qr_mld_detect(const CVec& y, const CovarianceModel& cov, std::size_t user,
                   const Constellation& constellation) {
  if (cov.noiseless) {
    throw Error(ErrorCode::kNeedsExternalNoise,
                "qr-mld: R_k is singular without external noise");
  }
  return qr_mld_detect(y, qr_mld_factors(cov.a.at(user), cov.r.at(user)), constellation);
}

}  // namespace rczf
