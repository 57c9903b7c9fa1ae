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
//
// Dense complex linear algebra with pinned factor conventions. Everything
// here is a free function over Eigen expressions and is templated on the
// scalar type; the rest of the library instantiates it with
// std::complex<double>.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "rczf/error.hpp"

namespace rczf {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using CMat = CMatrix<double>;
using CVec = CVector<double>;
using RVec = RVector<double>;
using Index = Eigen::Index;

namespace numerics {

/// Relative singular-value cutoff below which a direction is treated as null.
inline constexpr double kRankCutoff = 1e-12;
/// Largest condition number accepted before an inversion is refused.
inline constexpr double kMaxCondition = 1e12;

template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

template <typename Real>
struct Svd {
  CMatrix<Real> u;   // m x r, orthonormal columns
  RVector<Real> s;   // r, descending, non-negative
  CMatrix<Real> vh;  // r x n, orthonormal rows
};

template <typename Real>
struct Qr {
  CMatrix<Real> q;  // m x n, orthonormal columns
  CMatrix<Real> r;  // n x n, upper triangular, positive real diagonal
};

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(what) + ": matrix has non-finite entries");
  }
}

/// Thin SVD, M = U diag(S) Vh with r = min(rows, cols).
template <typename Derived>
Svd<RealOf<Derived>> svd(const Eigen::MatrixBase<Derived>& m) {
  using Real = RealOf<Derived>;
  require_finite(m, "svd");
  CMatrix<Real> dense = m.template cast<std::complex<Real>>();
  Eigen::JacobiSVD<CMatrix<Real>> solver(dense,
                                         Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV().adjoint()};
}

template <typename Derived>
RVector<RealOf<Derived>> singular_values(const Eigen::MatrixBase<Derived>& m) {
  using Real = RealOf<Derived>;
  require_finite(m, "singular_values");
  CMatrix<Real> dense = m.template cast<std::complex<Real>>();
  return Eigen::JacobiSVD<CMatrix<Real>>(dense).singularValues();
}

/// Numerical rank with the library-wide relative cutoff.
template <typename Derived>
Index rank(const Eigen::MatrixBase<Derived>& m) {
  const auto s = singular_values(m);
  if (s.size() == 0 || s(0) == 0) return 0;
  const auto floor = kRankCutoff * s(0);
  return static_cast<Index>(std::count_if(s.begin(), s.end(),
                                          [&](auto v) { return v > floor; }));
}

/// 2-norm condition number; +inf for singular input.
template <typename Derived>
RealOf<Derived> condition_number(const Eigen::MatrixBase<Derived>& m) {
  using Real = RealOf<Derived>;
  const auto s = singular_values(m);
  if (s.size() == 0) return Real(0);
  const Real smallest = s(s.size() - 1);
  if (smallest == Real(0)) return std::numeric_limits<Real>::infinity();
  return s(0) / smallest;
}

/// Householder QR with every diagonal entry of R made real and positive by
/// rotating the matching column of Q. This makes the factor pair unique.
template <typename Derived>
Qr<RealOf<Derived>> qr(const Eigen::MatrixBase<Derived>& m) {
  using Real = RealOf<Derived>;
  using Scalar = std::complex<Real>;
  require_finite(m, "qr");
  const Index rows = m.rows();
  const Index cols = m.cols();
  if (cols > rows) {
    throw Error(ErrorCode::kRankDeficient,
                "qr: more columns than rows cannot have full column rank");
  }
  CMatrix<Real> dense = m.template cast<Scalar>();
  Eigen::HouseholderQR<CMatrix<Real>> solver(dense);
  CMatrix<Real> q = solver.householderQ() * CMatrix<Real>::Identity(rows, cols);
  CMatrix<Real> r = solver.matrixQR().topRows(cols).template triangularView<Eigen::Upper>();

  const Real scale = dense.norm();
  for (Index i = 0; i < cols; ++i) {
    const Real magnitude = std::abs(r(i, i));
    if (!(magnitude > kRankCutoff * scale)) {
      throw Error(ErrorCode::kRankDeficient,
                  "qr: input does not have full column rank (column " +
                      std::to_string(i) + ")");
    }
    const Scalar phase = r(i, i) / magnitude;
    r.row(i) *= std::conj(phase);
    q.col(i) *= phase;
    r(i, i) = Scalar(magnitude, 0);
  }
  return {std::move(q), std::move(r)};
}

/// Lower Cholesky factor L with L L* = R.
template <typename Derived>
CMatrix<RealOf<Derived>> cholesky(const Eigen::MatrixBase<Derived>& r) {
  using Real = RealOf<Derived>;
  require_finite(r, "cholesky");
  if (r.rows() != r.cols()) {
    throw Error(ErrorCode::kDecomposition, "cholesky: matrix is not square");
  }
  CMatrix<Real> dense = r.template cast<std::complex<Real>>();
  const Real asymmetry = (dense - dense.adjoint()).norm();
  if (asymmetry > Real(1e-10) * std::max(dense.norm(), Real(1))) {
    throw Error(ErrorCode::kDecomposition, "cholesky: matrix is not Hermitian");
  }
  Eigen::LLT<CMatrix<Real>> llt(dense);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kDecomposition,
                "cholesky: matrix is not positive definite (pivot <= 0)");
  }
  CMatrix<Real> lower = llt.matrixL();
  return lower;
}

/// Moore-Penrose pseudo-inverse through the SVD; singular values below
/// kRankCutoff * sigma_max are dropped.
template <typename Derived>
CMatrix<RealOf<Derived>> pinv(const Eigen::MatrixBase<Derived>& m) {
  using Real = RealOf<Derived>;
  const auto f = svd(m);
  const Index r = f.s.size();
  RVector<Real> inverted = RVector<Real>::Zero(r);
  if (r > 0 && f.s(0) > Real(0)) {
    const Real floor = Real(kRankCutoff) * f.s(0);
    for (Index i = 0; i < r; ++i) {
      if (f.s(i) > floor) inverted(i) = Real(1) / f.s(i);
    }
  }
  return f.vh.adjoint() * inverted.asDiagonal() * f.u.adjoint();
}

/// Solves M X = B for Hermitian positive definite M, refusing matrices
/// whose condition number exceeds `max_condition`. Returns false on refusal.
template <typename DerivedM, typename DerivedB>
bool try_solve_hpd(const Eigen::MatrixBase<DerivedM>& m,
                   const Eigen::MatrixBase<DerivedB>& b,
                   CMatrix<RealOf<DerivedM>>& x,
                   double max_condition = kMaxCondition) {
  using Real = RealOf<DerivedM>;
  CMatrix<Real> dense = m.template cast<std::complex<Real>>();
  if (!dense.allFinite() || !(condition_number(dense) <= max_condition)) {
    return false;
  }
  Eigen::LLT<CMatrix<Real>> llt(dense);
  if (llt.info() != Eigen::Success) return false;
  x = llt.solve(b.template cast<std::complex<Real>>());
  return true;
}

/// Row-stacks blocks that share a column count.
template <typename Real>
CMatrix<Real> vstack(std::span<const CMatrix<Real>> blocks) {
  if (blocks.empty()) return {};
  const Index cols = blocks.front().cols();
  Index rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != cols) {
      throw Error(ErrorCode::kDimensionMismatch, "vstack: column counts differ");
    }
    rows += b.rows();
  }
  CMatrix<Real> out(rows, cols);
  Index offset = 0;
  for (const auto& b : blocks) {
    out.middleRows(offset, b.rows()) = b;
    offset += b.rows();
  }
  return out;
}

template <typename Real>
CMatrix<Real> hstack(std::span<const CMatrix<Real>> blocks) {
  if (blocks.empty()) return {};
  const Index rows = blocks.front().rows();
  Index cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) {
      throw Error(ErrorCode::kDimensionMismatch, "hstack: row counts differ");
    }
    cols += b.cols();
  }
  CMatrix<Real> out(rows, cols);
  Index offset = 0;
  for (const auto& b : blocks) {
    out.middleCols(offset, b.cols()) = b;
    offset += b.cols();
  }
  return out;
}

/// Splits the columns of `m` into consecutive blocks of the given widths.
template <typename Derived>
std::vector<CMatrix<RealOf<Derived>>> split_cols(const Eigen::MatrixBase<Derived>& m,
                                                 std::span<const Index> widths) {
  const Index total = std::accumulate(widths.begin(), widths.end(), Index{0});
  if (total != m.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "split_cols: widths do not sum to cols");
  }
  std::vector<CMatrix<RealOf<Derived>>> out;
  out.reserve(widths.size());
  Index offset = 0;
  for (const Index w : widths) {
    out.emplace_back(m.middleCols(offset, w));
    offset += w;
  }
  return out;
}

/// ||a - b||_F / ||b||_F, falling back to the absolute difference when b = 0.
template <typename DerivedA, typename DerivedB>
RealOf<DerivedA> relative_error(const Eigen::MatrixBase<DerivedA>& a,
                                const Eigen::MatrixBase<DerivedB>& b) {
  const auto diff = (a - b).norm();
  const auto ref = b.norm();
  return ref > 0 ? diff / ref : diff;
}

}  // namespace numerics
}  // namespace rczf
