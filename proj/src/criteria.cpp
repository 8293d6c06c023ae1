// Copyright 2026 The rcdesign Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rcdesign/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rcdesign/errors.hpp"

namespace rcdesign {

namespace {

constexpr double kSingularPivot = 1e-12;

struct ScaledProduct {
  double mantissa = 1.0;
  long exponent = 0;

  void multiply(double x) {
    int e = 0;
    mantissa = std::frexp(mantissa * x, &e);
    exponent += e;
  }
};

// In-place LDL^T of the dense row-major m x m matrix `a` (only the lower
// triangle is read). Returns false when a pivot drops to the singularity
// threshold; otherwise the pivot product is accumulated into `det`.
bool ldlt_determinant(double* a, std::size_t m, ScaledProduct& det) {
  double max_diag = 0.0;
  for (std::size_t j = 0; j < m; ++j) max_diag = std::max(max_diag, a[j * m + j]);
  if (!(max_diag > 0.0)) return false;
  const double tol = kSingularPivot * max_diag;

  // Column j of L overwrites the strict lower triangle; pivots live in the
  // diagonal.
  for (std::size_t j = 0; j < m; ++j) {
    double d = a[j * m + j];
    for (std::size_t k = 0; k < j; ++k) {
      const double l = a[j * m + k];
      d -= l * l * a[k * m + k];
    }
    if (!(d > tol)) return false;
    a[j * m + j] = d;
    for (std::size_t i = j + 1; i < m; ++i) {
      double s = a[i * m + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * m + k] * a[j * m + k] * a[k * m + k];
      a[i * m + j] = s / d;
    }
    det.multiply(d);
  }
  return true;
}

double root(const ScaledProduct& det, std::size_t m) {
  const double direct = std::ldexp(det.mantissa, static_cast<int>(det.exponent));
  const double inv_m = 1.0 / static_cast<double>(m);
  if (std::isnormal(direct)) return m == 1 ? direct : std::pow(direct, inv_m);
  const double log_det =
      std::log(det.mantissa) + static_cast<double>(det.exponent) * std::numbers::ln2;
  return std::exp(log_det * inv_m);
}

}  // namespace

InformationMatrix::InformationMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ContractError("information matrix must be square");
}

InformationMatrix information_matrix(std::span<const double> weights,
                                     const DesignProblem& problem) {
  if (weights.size() != problem.points()) {
    throw ContractError("information_matrix: weight vector has wrong length");
  }
  const auto& f = problem.regressors();
  const Eigen::Index m = f.rows();
  InformationMatrix info(static_cast<std::size_t>(m));
  Eigen::MatrixXd& out = info.matrix();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (w == 0.0) continue;
    const auto col = f.col(static_cast<Eigen::Index>(i));
    for (Eigen::Index c = 0; c < m; ++c) {
      for (Eigen::Index r = 0; r <= c; ++r) out(r, c) += w * col(r) * col(c);
    }
  }
  for (Eigen::Index c = 0; c < m; ++c) {
    for (Eigen::Index r = c + 1; r < m; ++r) out(r, c) = out(c, r);
  }
  return info;
}

InformationMatrix information_matrix(const ExactDesign& design,
                                     const DesignProblem& problem) {
  const std::vector<double> w = design.weights();
  return information_matrix(std::span<const double>(w), problem);
}

void update_information(InformationMatrix& m, std::size_t i, Direction dir,
                        const DesignProblem& problem) {
  if (i >= problem.points()) throw ContractError("update_information: bad index");
  if (m.dimension() != problem.dimension()) {
    throw ContractError("update_information: dimension mismatch");
  }
  const auto col = problem.regressors().col(static_cast<Eigen::Index>(i));
  const double sign = dir == Direction::kForward ? 1.0 : -1.0;
  m.matrix().noalias() += sign * col * col.transpose();
}

double d_criterion(const InformationMatrix& m) {
  const std::size_t dim = m.dimension();
  if (dim == 0) throw ContractError("d_criterion: empty matrix");
  std::vector<double> a(dim * dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      a[r * dim + c] = m.matrix()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  ScaledProduct det;
  if (!ldlt_determinant(a.data(), dim, det)) return 0.0;
  return root(det, dim);
}

DCriterion::DCriterion(const DesignProblem& problem)
    : m_(problem.dimension()), n_(problem.points()), packed_(m_ * (m_ + 1) / 2) {
  const Eigen::MatrixXd ft = problem.regressors().transpose();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ft);
  const Eigen::MatrixXd q =
      qr.householderQ() * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n_),
                                                    static_cast<Eigen::Index>(m_));
  const Eigen::MatrixXd r = qr.matrixQR().topRows(static_cast<Eigen::Index>(m_))
                                .triangularView<Eigen::Upper>();

  double max_r = 0.0;
  for (std::size_t j = 0; j < m_; ++j) {
    max_r = std::max(max_r, std::abs(r(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j))));
  }
  ScaledProduct scale;
  for (std::size_t j = 0; j < m_; ++j) {
    const double rjj = std::abs(r(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)));
    if (!(rjj > 1e-12 * max_r)) rank_deficient_ = true;
    scale.multiply(rjj * rjj);
  }
  scale_mantissa_ = scale.mantissa;
  scale_exponent_ = scale.exponent;

  outer_.assign(n_ * packed_, 0.0);
  zero_point_.assign(n_, true);
  for (std::size_t i = 0; i < n_; ++i) {
    double* block = outer_.data() + i * packed_;
    std::size_t idx = 0;
    for (std::size_t c = 0; c < m_; ++c) {
      for (std::size_t rr = 0; rr <= c; ++rr) {
        const double v = q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(rr)) *
                         q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
        block[idx++] = v;
        if (v != 0.0) zero_point_[i] = false;
      }
    }
  }
}

double DCriterion::evaluate(std::span<const double> weights) const {
  if (weights.size() != n_) throw ContractError("DCriterion: weight vector has wrong length");
  if (rank_deficient_) return 0.0;

  thread_local std::vector<double> packed;
  thread_local std::vector<double> dense;
  packed.assign(packed_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double w = weights[i];
    if (w == 0.0 || zero_point_[i]) continue;
    const double* block = outer_.data() + i * packed_;
    for (std::size_t k = 0; k < packed_; ++k) packed[k] += w * block[k];
  }
  dense.resize(m_ * m_);
  std::size_t idx = 0;
  for (std::size_t c = 0; c < m_; ++c) {
    for (std::size_t r = 0; r <= c; ++r) {
      dense[c * m_ + r] = packed[idx];  // lower triangle, row c
      dense[r * m_ + c] = packed[idx];
      ++idx;
    }
  }
  ScaledProduct det;
  if (!ldlt_determinant(dense.data(), m_, det)) return 0.0;
  det.multiply(scale_mantissa_);
  det.exponent += scale_exponent_;
  return root(det, m_);
}

double DCriterion::evaluate(const InformationMatrix& m) const { return d_criterion(m); }

double efficiency(const ExactDesign& xi, const ExactDesign& zeta,
                  const Criterion& criterion) {
  const double denom = criterion.evaluate(zeta);
  if (!(denom > 0.0)) {
    throw ContractError("efficiency: reference design has criterion value 0");
  }
  return criterion.evaluate(xi) / denom;
}

double d_efficiency(const ExactDesign& xi, const ExactDesign& zeta,
                    const DesignProblem& problem) {
  return efficiency(xi, zeta, DCriterion(problem));
}

}  // namespace rcdesign
