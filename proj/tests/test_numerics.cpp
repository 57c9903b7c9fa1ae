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

#include <limits>

#include "oracles.hpp"
#include "rczf/numerics.hpp"

using namespace rczf;
namespace nx = rczf::numerics;

namespace {

CMat diag(std::initializer_list<double> values) {
  RVec d(static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) d(i++) = v;
  return d.cast<std::complex<double>>().asDiagonal();
}

bool is_upper(const CMat& m, double tol = 0.0) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = j + 1; i < m.rows(); ++i) {
      if (std::abs(m(i, j)) > tol) return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("numerics") {
  TEST_CASE("svd of diagonal and identity") {
    const auto f = nx::svd(diag({3, 1}));
    CHECK(f.s(0) == doctest::Approx(3.0));
    CHECK(f.s(1) == doctest::Approx(1.0));
    CHECK((f.u - CMat::Identity(2, 2)).norm() < 1e-15);
    CHECK((f.vh - CMat::Identity(2, 2)).norm() < 1e-15);

    const auto g = nx::svd(CMat::Identity(4, 4));
    CHECK((g.s - RVec::Ones(4)).norm() < 1e-15);
  }

  TEST_CASE("svd round trip, orthonormal factors and ordering") {
    std::mt19937_64 engine(11);
    for (const auto [rows, cols] : {std::pair{4, 64}, {64, 4}, {7, 7}, {16, 64}, {1, 5}}) {
      const CMat m = oracle::gaussian(rows, cols, engine);
      const auto f = nx::svd(m);
      CHECK(nx::relative_error(f.u * f.s.cast<std::complex<double>>().asDiagonal() * f.vh, m) <
            1e-10);
      const Index r = f.s.size();
      CHECK((f.u.adjoint() * f.u - CMat::Identity(r, r)).norm() < 1e-12);
      CHECK((f.vh * f.vh.adjoint() - CMat::Identity(r, r)).norm() < 1e-12);
      for (Index i = 1; i < r; ++i) CHECK(f.s(i) <= f.s(i - 1));
      CHECK(f.s.minCoeff() >= 0.0);
    }
  }

  TEST_CASE("non-finite input is rejected") {
    CMat m = CMat::Identity(2, 2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(nx::svd(m), Error);
    try {
      nx::pinv(m);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInvalidInput);
    }
    m(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(nx::qr(m), Error);
    CHECK_THROWS_AS(nx::cholesky(m), Error);
  }

  TEST_CASE("qr of identity") {
    const auto f = nx::qr(CMat::Identity(3, 3));
    CHECK((f.q - CMat::Identity(3, 3)).norm() < 1e-15);
    CHECK((f.r - CMat::Identity(3, 3)).norm() < 1e-15);
  }

  TEST_CASE("qr sign convention forces positive diagonal") {
    const auto f = nx::qr(diag({-2, 1}));
    CHECK((f.q - diag({-1, 1})).norm() < 1e-15);
    CHECK((f.r - diag({2, 1})).norm() < 1e-15);
  }

  TEST_CASE("qr round trip and uniqueness on random tall matrices") {
    std::mt19937_64 engine(12);
    for (int trial = 0; trial < 50; ++trial) {
      const Index rows = 2 + trial % 7;
      const Index cols = 1 + trial % rows;
      const CMat m = oracle::gaussian(rows, cols, engine);
      const auto f = nx::qr(m);
      CHECK(nx::relative_error(f.q * f.r, m) < 1e-10);
      CHECK((f.q.adjoint() * f.q - CMat::Identity(cols, cols)).norm() < 1e-12);
      CHECK(is_upper(f.r));
      for (Index i = 0; i < cols; ++i) {
        CHECK(f.r(i, i).real() > 0.0);
        CHECK(f.r(i, i).imag() == 0.0);
      }
      const auto again = nx::qr(m);
      CHECK((again.q - f.q).norm() <= 1e-12);
      CHECK((again.r - f.r).norm() <= 1e-12);

      // Column phases of the input only rotate Q: the positive diagonal
      // pins R's diagonal to the column norms of the Gram-Schmidt process.
      const CMat unitary_diag =
          CVec(oracle::gaussian(cols, 1, engine)).unaryExpr([](std::complex<double> z) {
            return z / std::abs(z);
          }).asDiagonal();
      const auto rotated = nx::qr(m * unitary_diag);
      CHECK((rotated.r.diagonal() - f.r.diagonal()).norm() < 1e-10);
    }
  }

  TEST_CASE("qr rejects rank deficiency") {
    CMat m(3, 2);
    m << 1, 2, 2, 4, 3, 6;
    try {
      nx::qr(m);
      FAIL("expected rank deficiency");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kRankDeficient);
    }
    CHECK_THROWS_AS(nx::qr(CMat::Ones(2, 3)), Error);
  }

  TEST_CASE("cholesky examples") {
    CHECK((nx::cholesky(CMat::Identity(2, 2)) - CMat::Identity(2, 2)).norm() < 1e-15);
    CHECK((nx::cholesky(diag({4, 9})) - diag({2, 3})).norm() < 1e-15);

    std::mt19937_64 engine(13);
    for (int trial = 0; trial < 20; ++trial) {
      const CMat m = oracle::gaussian(4, 4, engine);
      const CMat r = m * m.adjoint() + 1e-6 * CMat::Identity(4, 4);
      const CMat l = nx::cholesky(r);
      CHECK(nx::relative_error(l * l.adjoint(), r) < 1e-9);
      CHECK(l.isLowerTriangular(0.0));
      for (Index i = 0; i < 4; ++i) {
        CHECK(l(i, i).real() > 0.0);
        CHECK(l(i, i).imag() == 0.0);
      }
    }
  }

  TEST_CASE("cholesky rejects non-Hermitian and indefinite input") {
    CMat asym(2, 2);
    asym << 2, 1, 0, 2;
    CHECK_THROWS_AS(nx::cholesky(asym), Error);
    try {
      nx::cholesky(diag({1, -1}));
      FAIL("expected decomposition error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDecomposition);
    }
    CHECK_THROWS_AS(nx::cholesky(diag({1, 0})), Error);
  }

  TEST_CASE("pinv examples") {
    CHECK((nx::pinv(CMat::Identity(3, 3)) - CMat::Identity(3, 3)).norm() < 1e-15);

    std::mt19937_64 engine(14);
    const CMat rows = oracle::random_unitary(5, engine).topRows(2);
    CHECK((nx::pinv(rows) - rows.adjoint()).norm() < 1e-12);

    for (int trial = 0; trial < 20; ++trial) {
      const CMat m = oracle::gaussian(2, 5, engine);
      CHECK((m * nx::pinv(m) - CMat::Identity(2, 2)).norm() < 1e-10);
      CHECK(nx::relative_error(nx::pinv(nx::pinv(m)), m) < 1e-9);
      // Full row rank: pinv(M) = M* (M M*)^-1.
      CHECK(nx::relative_error(nx::pinv(m), CMat(m.adjoint() * (m * m.adjoint()).inverse())) <
            1e-10);
    }
  }

  TEST_CASE("pinv of a rank-deficient matrix satisfies the Penrose conditions") {
    std::mt19937_64 engine(15);
    const CMat m = oracle::gaussian(5, 2, engine) * oracle::gaussian(2, 6, engine);
    const CMat x = nx::pinv(m);
    CHECK(nx::relative_error(CMat(m * x * m), m) < 1e-10);
    CHECK(nx::relative_error(CMat(x * m * x), x) < 1e-10);
    CHECK(((m * x) - (m * x).adjoint()).norm() < 1e-10);
    CHECK(((x * m) - (x * m).adjoint()).norm() < 1e-10);
    CHECK(nx::relative_error(x, oracle::pseudo_inverse(m)) < 1e-9);
    CHECK(nx::rank(m) == 2);
    CHECK(nx::pinv(CMat::Zero(2, 3)).isZero(0.0));
  }

  TEST_CASE("condition guard refuses near-singular systems") {
    CMat x;
    CHECK(nx::try_solve_hpd(diag({1, 2}), CMat::Identity(2, 2), x));
    CHECK((x - diag({1, 0.5})).norm() < 1e-15);
    CHECK_FALSE(nx::try_solve_hpd(diag({1, 1e-13}), CMat::Identity(2, 2), x));
    CHECK_FALSE(nx::try_solve_hpd(diag({1, 0}), CMat::Identity(2, 2), x));
  }

  TEST_CASE("block stacking and slicing") {
    const std::vector<CMat> blocks{CMat::Ones(2, 3), CMat::Zero(1, 3)};
    const CMat stacked = nx::vstack<double>(blocks);
    CHECK(stacked.rows() == 3);
    CHECK(stacked.row(2).isZero(0.0));
    const std::vector<Index> widths{1, 2};
    const auto parts = nx::split_cols(stacked, widths);
    CHECK(parts[1].cols() == 2);
    CHECK(nx::hstack<double>(parts) == stacked);
    CHECK_THROWS_AS(nx::split_cols(stacked, std::vector<Index>{1}), Error);
  }

  TEST_CASE("single-precision instantiation") {
    const Eigen::MatrixXcf m = Eigen::MatrixXcf::Identity(3, 3) * 2.0f;
    const auto f = nx::qr(m);
    CHECK(std::abs(f.r(0, 0) - std::complex<float>(2.0f, 0.0f)) < 1e-6f);
  }
}
