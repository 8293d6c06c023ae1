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

#ifndef RCDESIGN_CRITERIA_HPP_
#define RCDESIGN_CRITERIA_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rcdesign/design.hpp"

namespace rcdesign {

// M = sum_i w_i f_i f_i^T.
class InformationMatrix {
 public:
  explicit InformationMatrix(std::size_t m) : m_(Eigen::MatrixXd::Zero(m, m)) {}
  explicit InformationMatrix(Eigen::MatrixXd m);

  std::size_t dimension() const { return static_cast<std::size_t>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  Eigen::MatrixXd& matrix() { return m_; }

 private:
  Eigen::MatrixXd m_;
};

InformationMatrix information_matrix(std::span<const double> weights,
                                     const DesignProblem& problem);
InformationMatrix information_matrix(const ExactDesign& design,
                                     const DesignProblem& problem);

// M +/- f_i f_i^T.
void update_information(InformationMatrix& m, std::size_t i, Direction dir,
                        const DesignProblem& problem);

// det(M)^(1/m); exactly 0 when an LDL^T pivot falls to 1e-12 * max diag(M)
// or below.
double d_criterion(const InformationMatrix& m);

// A monotone, homogeneous design criterion bound to one problem.
class Criterion {
 public:
  virtual ~Criterion() = default;

  virtual std::string_view name() const = 0;
  // Value on nonnegative weights over the problem's design points.
  virtual double evaluate(std::span<const double> weights) const = 0;
  virtual double evaluate(const InformationMatrix& m) const = 0;

  double evaluate(const ExactDesign& design) const {
    const std::vector<double> w = design.weights();
    return evaluate(std::span<const double>(w));
  }
};

// D-optimality, phi_D(w) = det(sum_i w_i f_i f_i^T)^(1/m).
//
// Weighted evaluation runs in an orthonormalised regressor basis: with the
// thin QR factorisation F^T = Q R we have M(w) = R^T M_Q(w) R, so
// det M(w) = det(R)^2 det M_Q(w). M_Q is well scaled even when F is not
// (e.g. the quadratic model with x1 near 95), so the singularity test and the
// LDL^T factorisation stay meaningful.
class DCriterion final : public Criterion {
 public:
  explicit DCriterion(const DesignProblem& problem);

  std::string_view name() const override { return "D"; }
  double evaluate(std::span<const double> weights) const override;
  double evaluate(const InformationMatrix& m) const override;
  using Criterion::evaluate;

  std::size_t dimension() const { return m_; }

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::size_t packed_ = 0;
  // Packed upper triangles of q_i q_i^T, one block of packed_ per point.
  std::vector<double> outer_;
  std::vector<bool> zero_point_;
  // det(R)^2 as mantissa/exponent, so the scaling never overflows.
  double scale_mantissa_ = 1.0;
  long scale_exponent_ = 0;
  bool rank_deficient_ = false;
};

// phi_D(xi) / phi_D(zeta). Throws ContractError if phi_D(zeta) == 0.
double d_efficiency(const ExactDesign& xi, const ExactDesign& zeta,
                    const DesignProblem& problem);
double efficiency(const ExactDesign& xi, const ExactDesign& zeta,
                  const Criterion& criterion);

}  // namespace rcdesign

#endif  // RCDESIGN_CRITERIA_HPP_
