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


#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rczf/precoding.hpp"

using namespace rczf;
namespace nx = rczf::numerics;

namespace {

ChannelSet manual(Index t, std::vector<CMat> h, std::vector<Index> layers) {
  ChannelSet ch;
  ch.scenario.bs_antennas = t;
  for (std::size_t k = 0; k < h.size(); ++k) {
    ch.scenario.users.push_back({h[k].rows(), layers[k]});
  }
  ch.h = std::move(h);
  return ch;
}

ChannelSet default_channels(std::uint64_t seed) {
  return generate_channels(Scenario::uniform(64, 8, {4, 2}, 1.0, seed));
}

CMat diag2(double a, double b) {
  CMat m = CMat::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_SUITE("precoding") {
  TEST_CASE("full zero forcing copies the channel") {
    const auto r = reduce_full_zf(manual(2, {CMat::Identity(2, 2)}, {2}));
    CHECK(r.v[0] == CMat::Identity(2, 2));
    CHECK(r.b[0] == CMat::Identity(2, 2));

    const ChannelSet ch = generate_channels(Scenario::uniform(16, 3, {2, 2}, 1.0, 7));
    const auto zf = reduce_full_zf(ch);
    for (std::size_t k = 0; k < 3; ++k) CHECK(zf.v[k] == ch.h[k]);
    CHECK(zf.kind == ReductionKind::kFullZf);
  }

  TEST_CASE("full zero forcing needs p_k = q_k") {
    try {
      reduce_full_zf(default_channels(1));
      FAIL("expected dimension mismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDimensionMismatch);
    }
  }

  TEST_CASE("EZF on a diagonal channel picks the dominant direction") {
    const auto r = reduce_ezf(manual(2, {diag2(3, 1)}, {1}));
    REQUIRE(r.v[0].rows() == 1);
    CHECK(std::abs(r.v[0](0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(r.v[0](0, 1)) < 1e-15);
    CHECK(std::abs(r.b[0](0, 0) - 1.0 / 3.0) < 1e-15);
  }

  TEST_CASE("EZF with p_k = q_k yields orthonormal rows") {
    const ChannelSet ch = generate_channels(Scenario::uniform(32, 4, {4, 4}, 1.0, 3));
    const auto r = reduce_ezf(ch);
    for (const auto& v : r.v) CHECK((v * v.adjoint() - CMat::Identity(4, 4)).norm() < 1e-9);
  }

  TEST_CASE("EZF spans the dominant right-singular subspace") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const ChannelSet ch = default_channels(seed);
      const auto r = reduce_ezf(ch);
      for (std::size_t k = 0; k < ch.h.size(); ++k) {
        CHECK(oracle::max_principal_angle(r.v[k], oracle::dominant_rows(ch.h[k], 2)) < 1e-8);
        CHECK(nx::relative_error(r.b[k] * ch.h[k], r.v[k]) < 1e-10);
        CHECK(nx::rank(r.v[k]) == 2);
      }
    }
  }

  TEST_CASE("EZF rejects an ill-conditioned channel") {
    CMat h = CMat::Zero(2, 3);
    h(0, 0) = 1.0;
    h(1, 0) = 1.0;  // rank one
    try {
      reduce_ezf(manual(3, {h}, {2}));
      FAIL("expected ill-conditioned error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kIllConditioned);
    }
  }

  TEST_CASE("RCZF precoder on orthonormal rows is the Hermitian transpose") {
    ReducedChannel r;
    CMat v0 = CMat::Zero(1, 3);
    CMat v1 = CMat::Zero(1, 3);
    v0(0, 0) = 1.0;
    v1(0, 1) = 1.0;
    r.v = {v0, v1};
    r.b = {CMat::Identity(1, 1), CMat::Identity(1, 1)};
    const Precoder w = rczf_precode(r, 2.0);
    CMat expected = CMat::Zero(3, 2);
    expected(0, 0) = 1.0;
    expected(1, 1) = 1.0;
    CHECK((w.stacked() - expected).norm() < 1e-15);
    CHECK(w.beta == doctest::Approx(1.0));
  }

  TEST_CASE("RCZF precoder inverts a square reduced channel") {
    ReducedChannel r;
    r.v = {diag2(2, 1).topRows(1), diag2(2, 1).bottomRows(1)};
    r.b = {CMat::Identity(1, 1), CMat::Identity(1, 1)};
    const Precoder w = rczf_precode(r, 1.0);
    const CMat w0 = w.stacked() / w.beta;
    CHECK((w0 - diag2(0.5, 1.0)).norm() < 1e-15);
    CHECK((r.stacked() * w0 - CMat::Identity(2, 2)).norm() < 1e-15);
    // beta^2 (0.25 + 1) = 1
    CHECK(w.beta == doctest::Approx(std::sqrt(1.0 / 1.25)).epsilon(1e-15));
  }

  TEST_CASE("EZF precoders belong to the reduced-channel zero-forcing class") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const ChannelSet ch = default_channels(seed);
      const auto reduced = reduce_ezf(ch);
      const Precoder w = rczf_precode(reduced, 1.0);
      const auto res = rczf_residuals(ch, reduced, w);
      CHECK(res.factorization < 1e-8);
      CHECK(res.leakage < 1e-9);
      CHECK(res.full_rank);
      CHECK(w.stacked().squaredNorm() == doctest::Approx(1.0).epsilon(1e-9));
      for (std::size_t k = 0; k < ch.h.size(); ++k) {
        CHECK(nx::relative_error(CMat(reduced.v[k] * w.w[k]), CMat(w.beta * CMat::Identity(2, 2))) <
              1e-8);
      }
    }
  }

  TEST_CASE("full ZF and a custom reduction are also RCZF") {
    const ChannelSet ch = generate_channels(Scenario::uniform(16, 4, {2, 2}, 3.0, 8));
    const auto zf = reduce_full_zf(ch);
    const Precoder w = rczf_precode(zf, 3.0);
    const auto res = rczf_residuals(ch, zf, w);
    CHECK(res.leakage < 1e-9);
    CHECK(res.full_rank);
    CHECK(w.stacked().squaredNorm() == doctest::Approx(3.0).epsilon(1e-9));

    std::mt19937_64 engine(2);
    const ChannelSet wide = default_channels(4);
    std::vector<CMat> b;
    for (std::size_t k = 0; k < wide.h.size(); ++k) b.push_back(oracle::gaussian(2, 4, engine));
    const auto custom = reduce_custom(wide, b);
    const Precoder wc = rczf_precode(custom, 1.0);
    const auto rc = rczf_residuals(wide, custom, wc);
    CHECK(rc.factorization < 1e-12);
    CHECK(rc.leakage < 1e-9);
    CHECK(rc.full_rank);
  }

  TEST_CASE("colinear users make zero forcing infeasible") {
    std::mt19937_64 engine(5);
    const CMat h = oracle::gaussian(1, 4, engine);
    const ChannelSet ch = manual(4, {h, 2.0 * h}, {1, 1});
    try {
      rczf_precode(reduce_full_zf(ch), 1.0);
      FAIL("expected infeasible zero forcing");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInfeasibleZeroForcing);
    }
  }

  TEST_CASE("power scaling is a single global factor") {
    const ChannelSet ch = default_channels(6);
    const auto reduced = reduce_ezf(ch);
    const Precoder one = rczf_precode(reduced, 1.0);
    const Precoder two = rczf_precode(reduced, 2.0);
    CHECK(two.beta / one.beta == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    for (std::size_t k = 0; k < ch.h.size(); ++k) {
      CHECK(nx::relative_error(two.w[k], CMat(std::sqrt(2.0) * one.w[k])) < 1e-15);
    }
    const Precoder mrt = mrt_precode(ch, 2.0);
    CHECK(mrt.stacked().squaredNorm() == doctest::Approx(2.0).epsilon(1e-9));
  }

  TEST_CASE("MRT on a diagonal channel") {
    const Precoder w = mrt_precode(manual(2, {diag2(3, 1)}, {1}), 1.0);
    CHECK(std::abs(w.w[0](0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(w.w[0](1, 0)) < 1e-15);
    CHECK(w.kind == PrecoderKind::kMrt);
  }

  TEST_CASE("MRT zero-forces users with orthogonal row spaces") {
    std::mt19937_64 engine(9);
    const CMat u = oracle::random_unitary(8, engine);
    // Users occupy disjoint sets of orthonormal directions.
    const CMat h0 = oracle::gaussian(2, 2, engine) * u.topRows(2);
    const CMat h1 = oracle::gaussian(3, 3, engine) * u.middleRows(2, 3);
    const ChannelSet ch = manual(8, {h0, h1}, {2, 2});
    const Precoder mrt = mrt_precode(ch, 1.0);
    const auto reduced = reduce_ezf(ch);
    CHECK((reduced.v[0] * mrt.w[1]).norm() < 1e-9);
    CHECK((reduced.v[1] * mrt.w[0]).norm() < 1e-9);
    // Same as the RCZF precoder up to per-column phase.
    const Precoder rczf = rczf_precode(reduced, 1.0);
    for (std::size_t k = 0; k < 2; ++k) {
      for (Index c = 0; c < mrt.w[k].cols(); ++c) {
        const std::complex<double> overlap = mrt.w[k].col(c).dot(rczf.w[k].col(c));
        CHECK(std::abs(overlap) ==
              doctest::Approx(mrt.w[k].col(c).norm() * rczf.w[k].col(c).norm()).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("MRT is not zero forcing on generic multi-user channels") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const ChannelSet ch = default_channels(seed);
      const Precoder mrt = mrt_precode(ch, 1.0);
      const auto res = rczf_residuals(ch, *mrt.reduced, mrt);
      CHECK(res.leakage > 1e-3);
    }
  }
}
