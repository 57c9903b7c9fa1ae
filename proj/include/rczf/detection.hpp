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

#include <complex>
#include <string>
#include <vector>

#include "rczf/precoding.hpp"

namespace rczf {

/// What user k can estimate from reference signals: its transmitting matrix
/// A_k = H_k W_k (q_k x p_k) and the interference-plus-noise covariance
///   R_k = H_k (sum_{j != k} W_j W_j*) H_k* + L_k L_k*.
struct CovarianceModel {
  std::vector<CMat> a;
  std::vector<CMat> r;
  std::vector<CMat> l;
  bool noiseless = false;  // every L_k is exactly zero

  std::size_t user_count() const { return a.size(); }
};

CovarianceModel build_covariance(const ChannelSet& channels, const Precoder& precoder,
                                 const NoiseModel& noise);

enum class DetectorKind {
  kMmseIrc,
  kMmse,
  kGenLse,
  kLseLimit,
  kQrMldLinear,
  kReferenceIc,
};

struct DetectorScheme {
  DetectorKind kind = DetectorKind::kMmseIrc;
  double lambda = 1.0;  // only meaningful for kGenLse

  std::string name() const;
  friend bool operator==(const DetectorScheme&, const DetectorScheme&) = default;
};

/// Parses `mmse-irc`, `mmse`, `gen-lse`, `gen-lse:<lambda>`, `lse-limit`,
/// `qr-mld` and `reference-ic`.
DetectorScheme parse_detector_scheme(const std::string& text);

/// Per-user detection matrices G_k (p_k x q_k).
struct Detector {
  std::vector<CMat> g;
  DetectorScheme scheme;
};

/// G_k = A_k* (A_k A_k* + R_k)^-1.
Detector mmse_irc(const CovarianceModel& cov);

/// Interference-blind MMSE, G_k = A_k* (A_k A_k* + sigma^2 I)^-1, evaluated
/// as (A_k* A_k + sigma^2 I)^-1 A_k* so that sigma = 0 yields pinv(A_k).
Detector plain_mmse(const CovarianceModel& cov, double sigma);

/// G_k = A_k* (A_k A_k* + lambda R_k)^-1.
Detector gen_lse(const CovarianceModel& cov, double lambda);

/// lambda -> 0 limit of gen_lse: (A* R^-1 A)^-1 A* R^-1.
Detector lse_limit(const CovarianceModel& cov);

/// Whitened QR factors used by QR-MLD: R_k = L L*, L^-1 A_k = Q Rt.
struct QrMldFactors {
  CMat whitening;  // L, lower triangular unless supplied by the caller
  CMat q;
  CMat r;
};

QrMldFactors qr_mld_factors(const CMat& a, const CMat& r);

/// Same factorisation with a caller-chosen square root of R (any L U with U
/// unitary is admissible).
QrMldFactors qr_mld_factors_with(const CMat& a, const CMat& whitening);

/// Linear part of QR-MLD from given factors: Rt^-1 Q* L^-1.
CMat qr_mld_matrix(const QrMldFactors& f);

/// Linear part of QR-MLD for every user.
Detector qr_mld_linear(const CovarianceModel& cov);

/// The unique interference-cancelling detector G_k = B_k / beta.
Detector reference_ic(const ReducedChannel& reduced, double beta);

/// Builds any scheme. reference-ic needs an RCZF precoder; mmse reads
/// noise.sigma.
Detector build_detector(const DetectorScheme& scheme, const CovarianceModel& cov,
                        const Precoder& precoder, const NoiseModel& noise);

enum class ConstellationKind { kQpsk, kQam16 };

/// Unit average power symbol alphabet.
struct Constellation {
  ConstellationKind kind = ConstellationKind::kQpsk;
  std::vector<std::complex<double>> points;

  static Constellation qpsk();
  static Constellation qam16();

  std::complex<double> slice(std::complex<double> z) const;
};

/// Back-substitution with slicing on an upper-triangular system z = Rt s + e:
/// symbols are decided last to first, each after cancelling the already
/// decided ones.
CVec sic_slice(const CVec& z, const CMat& upper, const Constellation& constellation);

/// Full symbol-wise QR-MLD for one user's received vector y (length q_k).
CVec qr_mld_detect(const CVec& y, const QrMldFactors& factors,
                   const Constellation& constellation);

CVec qr_mld_detect(const CVec& y, const CovarianceModel& cov, std::size_t user,
                   const Constellation& constellation);

}  // namespace rczf
