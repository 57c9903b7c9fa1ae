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


#include "rczf/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace rczf {

double nulling_residual(const ChannelSet& channels, const Precoder& precoder, std::size_t user) {
  const CMat& h = channels.h.at(user);
  std::vector<CMat> interferers;
  for (std::size_t j = 0; j < precoder.w.size(); ++j) {
    if (j != user) interferers.push_back(h * precoder.w[j]);
  }
  const CMat a = h * precoder.w[user];
  const Index p = a.cols();
  if (interferers.empty()) {
    return (numerics::pinv(a) * a - CMat::Identity(p, p)).norm();
  }
  // Rows of G must lie in the left null space of J = [H_k W_j]_{j != k}.
  const CMat j = numerics::hstack<double>(interferers);
  Eigen::JacobiSVD<CMat> svd(j, Eigen::ComputeFullU);
  const RVec& s = svd.singularValues();
  const double floor = numerics::kRankCutoff * (s.size() > 0 ? s(0) : 0.0);
  const Index rank = static_cast<Index>(std::count_if(s.begin(), s.end(),
                                                      [&](double v) { return v > floor; }));
  const CMat null_basis = svd.matrixU().rightCols(h.rows() - rank);
  if (null_basis.cols() == 0) return std::sqrt(static_cast<double>(p));
  // G = C N*, minimise ||C (N* A) - I||_F.
  const CMat reduced = null_basis.adjoint() * a;
  const CMat c = numerics::pinv(reduced);
  return (c * reduced - CMat::Identity(p, p)).norm();
}

namespace {

struct Worst {
  double value = 0.0;
  void update(double v) { value = std::max(value, std::isnan(v) ? INFINITY : v); }
};

ChannelSet channels_for(const CheckOptions& options, std::size_t i) {
  Scenario s = options.scenario;
  s.seed = options.first_seed + i;
  return generate_channels(s);
}

CMat random_gaussian(Index rows, Index cols, std::mt19937_64& engine) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMat m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = {normal(engine), normal(engine)};
  }
  return m;
}

CheckResult below(std::string name, double worst, double threshold, std::string detail) {
  return {std::move(name), worst < threshold, worst, threshold, std::move(detail)};
}

}  // namespace

std::vector<CheckResult> run_checks(const CheckOptions& options) {
  Worst identity, leakage, irc_noiseless, lse_lambda, small_noise;
  double necessity_min = INFINITY;
  double rate_min = INFINITY;
  double rate_max = 0.0;

  for (std::size_t i = 0; i < options.scenarios; ++i) {
    const ChannelSet channels = channels_for(options, i);
    const Precoder ezf = build_precoder(PrecoderScheme::kEzf, channels);
    const Detector ref = reference_ic(*ezf.reduced, ezf.beta);
    const auto links = effective_links(channels, ezf, ref);
    for (std::size_t k = 0; k < channels.h.size(); ++k) {
      const Index p = links[k][k].rows();
      identity.update((links[k][k] - CMat::Identity(p, p)).norm());
      for (std::size_t j = 0; j < channels.h.size(); ++j) {
        if (j == k) continue;
        leakage.update(links[k][j].norm() / (channels.h[k].norm() * ezf.w[j].norm()));
      }
    }

    const Precoder mrt = build_precoder(PrecoderScheme::kMrt, channels);
    for (std::size_t k = 0; k < channels.h.size(); ++k) {
      necessity_min = std::min(necessity_min, nulling_residual(channels, mrt, k));
    }

    const CovarianceModel noiseless =
        build_covariance(channels, ezf, NoiseModel::noiseless(channels.scenario));
    const Detector irc = mmse_irc(noiseless);
    std::vector<Detector> lse;
    for (const double lambda : {1e-3, 1.0, 1e3}) lse.push_back(gen_lse(noiseless, lambda));
    for (std::size_t k = 0; k < channels.h.size(); ++k) {
      irc_noiseless.update(numerics::relative_error(irc.g[k], ref.g[k]));
      for (std::size_t a = 0; a < lse.size(); ++a) {
        for (std::size_t b = a + 1; b < lse.size(); ++b) {
          lse_lambda.update(numerics::relative_error(lse[a].g[k], lse[b].g[k]));
        }
      }
    }

    const auto irc_error = [&](double sigma) {
      const auto cov = build_covariance(channels, ezf, NoiseModel::white(channels.scenario, sigma));
      const Detector g = mmse_irc(cov);
      double err = 0.0;
      for (std::size_t k = 0; k < g.g.size(); ++k) err += (g.g[k] - ref.g[k]).squaredNorm();
      return std::sqrt(err);
    };
    const double rate = irc_error(1e-2) / irc_error(1e-3);
    rate_min = std::min(rate_min, rate);
    rate_max = std::max(rate_max, rate);

    const auto noisy = build_covariance(channels, ezf, NoiseModel::white(channels.scenario, 1e-4));
    const Detector qr = qr_mld_linear(noisy);
    for (std::size_t k = 0; k < qr.g.size(); ++k) {
      small_noise.update(numerics::relative_error(qr.g[k], ref.g[k]));
    }
  }

  Worst limit, factor_identity, rotation;
  for (std::size_t i = 0; i < options.scenarios; ++i) {
    std::mt19937_64 engine(derive_seed(options.first_seed + i, 0xA11CE));
    const Index q = 4;
    const Index p = 2;
    const CMat m = random_gaussian(q, q, engine);
    CovarianceModel cov;
    cov.a = {random_gaussian(q, p, engine)};
    cov.r = {m * m.adjoint() / static_cast<double>(q) + CMat::Identity(q, q)};
    cov.l = {CMat::Identity(q, q)};
    const CMat g_limit = lse_limit(cov).g[0];
    limit.update(numerics::relative_error(gen_lse(cov, 1e-8).g[0], g_limit));
    factor_identity.update(numerics::relative_error(qr_mld_linear(cov).g[0], g_limit));

    const CMat unitary = numerics::qr(random_gaussian(q, q, engine)).q;
    const CMat rotated = numerics::cholesky(cov.r[0]) * unitary;
    const CMat g_rotated = qr_mld_matrix(qr_mld_factors_with(cov.a[0], rotated));
    rotation.update(numerics::relative_error(g_rotated, g_limit));
  }

  const std::string n = std::to_string(options.scenarios) + " instances";
  std::vector<CheckResult> out;
  out.push_back(below("rczf-identity", identity.value, 1e-8, "max ||G_k H_k W_k - I||_F, " + n));
  out.push_back(below("rczf-leakage", leakage.value, 1e-8,
                      "max ||G_k H_k W_j||_F / (||H_k|| ||W_j||), " + n));
  out.push_back({"mrt-no-cancelling-detector", necessity_min > 0.1, necessity_min,
                 0.1, "min nulling residual under MRT (must exceed threshold), " + n});
  out.push_back(below("mmse-irc-noiseless", irc_noiseless.value, 1e-7,
                      "max rel. error vs B_k / beta, " + n));
  out.push_back({"mmse-irc-rate", rate_min >= 50.0 && rate_max <= 200.0, rate_max, 200.0,
                 "error ratio sigma 1e-2 / 1e-3 in [" + std::to_string(rate_min) + ", " +
                     std::to_string(rate_max) + "], must lie in [50, 200]"});
  out.push_back(below("gen-lse-lambda-free", lse_lambda.value, 1e-7,
                      "max pairwise rel. diff for lambda in {1e-3, 1, 1e3}, " + n));
  out.push_back(below("gen-lse-limit", limit.value, 1e-5, "lambda = 1e-8 vs limit, " + n));
  out.push_back(below("qr-mld-linear-identity", factor_identity.value, 1e-9,
                      "QR-MLD linear part vs LSE limit, " + n));
  out.push_back(below("qr-mld-rotation", rotation.value, 1e-9,
                      "whitening L -> L U invariance, " + n));
  out.push_back(below("qr-mld-limit", small_noise.value, 1e-6,
                      "sigma = 1e-4 QR-MLD vs B_k / beta, " + n));
  return out;
}

}  // namespace rczf
