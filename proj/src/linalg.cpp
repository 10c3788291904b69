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

#include "stpnc/linalg.hpp"

#include <algorithm>
#include <stdexcept>

#include "stpnc/errors.hpp"

namespace stpnc::linalg {
namespace {

using Svd = Eigen::JacobiSVD<CMatrix>;

void require_nonempty(const CMatrix& a, const char* what) {
  if (a.rows() == 0 || a.cols() == 0) {
    throw std::invalid_argument(std::string(what) + ": empty matrix");
  }
}

double cutoff(const Eigen::VectorXd& sv, const CMatrix& a, const Tolerance& tol) {
  const double largest = sv.size() > 0 ? sv(0) : 0.0;
  return tol.rel_eps * largest * static_cast<double>(std::max(a.rows(), a.cols()));
}

Eigen::Index count_above(const Eigen::VectorXd& sv, double cut) {
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut && sv(i) > 0.0) ++r;
  }
  return r;
}

// Rotates v so that its first entry of non-negligible magnitude is real > 0.
void canonical_phase(Eigen::Ref<CVector> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-12) {
      v *= std::conj(v(i)) / mag;
      v(i) = cplx(mag, 0.0);
      return;
    }
  }
}

CMatrix svd_solve_refined(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  Svd svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(tol.rel_eps * static_cast<double>(std::max(a.rows(), a.cols())));
  CMatrix x = svd.solve(b);
  // One refinement step; the correction stays in the row space, so the
  // minimum-norm property is preserved.
  const CMatrix r = b - a * x;
  x += svd.solve(r);
  return x;
}

}  // namespace

void Tolerance::validate() const {
  if (!(rel_eps > 0.0) || !(abs_eps > 0.0)) {
    throw std::invalid_argument("Tolerance: rel_eps and abs_eps must be positive");
  }
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector vec(const CMatrix& m) {
  CVector out(m.size());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    out.segment(j * m.rows(), m.rows()) = m.col(j);
  }
  return out;
}

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) {
    throw std::invalid_argument("unvec: size mismatch");
  }
  CMatrix out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    out.col(j) = v.segment(j * rows, rows);
  }
  return out;
}

CMatrix null_space(const CMatrix& a, const Tolerance& tol) {
  require_nonempty(a, "null_space");
  tol.validate();
  Svd svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::Index r = count_above(sv, cutoff(sv, a, tol));
  const CMatrix& v = svd.matrixV();
  const Eigen::Index dim = a.cols() - r;
  CMatrix out(a.cols(), dim);
  // V is ordered by descending singular value; columns past min(rows, cols)
  // belong to implicit zero singular values.
  for (Eigen::Index c = 0; c < dim; ++c) {
    out.col(c) = v.col(a.cols() - 1 - c);
    canonical_phase(out.col(c));
  }
  return out;
}

Eigen::Index rank(const CMatrix& a, const Tolerance& tol) {
  require_nonempty(a, "rank");
  tol.validate();
  Svd svd(a);
  const Eigen::VectorXd& sv = svd.singularValues();
  return count_above(sv, cutoff(sv, a, tol));
}

CMatrix solve_least_norm(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  require_nonempty(a, "solve_least_norm");
  tol.validate();
  if (b.rows() != a.rows()) {
    throw std::invalid_argument("solve_least_norm: row mismatch");
  }
  CMatrix x = svd_solve_refined(a, b, tol);
  const double residual = (a * x - b).norm();
  if (residual > tol.abs_eps * (1.0 + b.norm())) {
    throw InconsistentSystem("solve_least_norm: residual " + std::to_string(residual) +
                             " exceeds threshold");
  }
  return x;
}

CMatrix zf_solve(const CMatrix& h, const CMatrix& y, const Tolerance& tol) {
  require_nonempty(h, "zf_solve");
  if (y.rows() != h.rows()) {
    throw std::invalid_argument("zf_solve: row mismatch");
  }
  const Eigen::Index r = rank(h, tol);
  if (r < h.cols()) {
    throw RankDeficient("zf_solve: rank " + std::to_string(r) + " < " +
                        std::to_string(h.cols()) + " columns");
  }
  return svd_solve_refined(h, y, tol);
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace stpnc::linalg
