// SPDX-License-Identifier: Apache-2.0
//
// stpnc - space-time physical-layer network coding simulator
// Copyright (C) 2026 The stpnc authors
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
#include <cstddef>

#include <Eigen/Dense>

namespace stpnc {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;

namespace linalg {

// Cutoffs used wherever exact rank statements have to be made numerically.
// rel_eps scales the largest singular value (and the larger matrix
// dimension); abs_eps bounds acceptable residuals.
struct Tolerance {
  double rel_eps = 1e-10;
  double abs_eps = 1e-10;

  // Throws std::invalid_argument unless both cutoffs are strictly positive.
  void validate() const;
};

inline constexpr Tolerance kDefaultTolerance{};

/// Kronecker product; entry (i*rows(b)+p, j*cols(b)+q) = a(i,j)*b(p,q).
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Column-stacking vectorisation.
CVector vec(const CMatrix& m);

/// Inverse of vec for a rows x cols target.
CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols);

/// Orthonormal basis of the right null space of `a`.
///
/// A singular value counts as zero when it is at most
/// rel_eps * sigma_max * max(rows, cols). Columns are ordered by ascending
/// singular value and each column is rotated so its first nonzero entry is
/// real and positive, which makes the basis reproducible. Returns a matrix
/// with zero columns when `a` has full column rank.
CMatrix null_space(const CMatrix& a, const Tolerance& tol = kDefaultTolerance);

/// Number of singular values above the null_space cutoff.
Eigen::Index rank(const CMatrix& a, const Tolerance& tol = kDefaultTolerance);

/// Minimum-norm solution of a*x = b.
///
/// Throws InconsistentSystem when ||a*x - b|| > abs_eps * (1 + ||b||).
CMatrix solve_least_norm(const CMatrix& a, const CMatrix& b,
                         const Tolerance& tol = kDefaultTolerance);

/// Zero-forcing (least-squares) solve of h*s = y for full-column-rank h.
///
/// Throws RankDeficient when rank(h) < cols(h).
CMatrix zf_solve(const CMatrix& h, const CMatrix& y,
                 const Tolerance& tol = kDefaultTolerance);

/// Largest absolute entry, 0 for empty matrices.
double max_abs(const CMatrix& m);

}  // namespace linalg
}  // namespace stpnc
