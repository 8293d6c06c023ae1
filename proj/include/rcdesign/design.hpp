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

// Exact and approximate experimental designs over a finite design space of n
// points, together with the resource constraints A*xi <= b that define the
// feasible set. Point indices are zero-based throughout the C++ API; the file
// formats and the command line use one-based indices.

#ifndef RCDESIGN_DESIGN_HPP_
#define RCDESIGN_DESIGN_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rcdesign {

using Count = std::int64_t;

enum class Direction : int { kBackward = -1, kForward = +1 };

// Replication counts of trials at each design point.
class ExactDesign {
 public:
  ExactDesign() = default;
  explicit ExactDesign(std::size_t n) : counts_(n, 0) {}
  // Throws ContractError if any count is negative.
  explicit ExactDesign(std::vector<Count> counts);

  std::size_t size() const { return counts_.size(); }
  Count operator[](std::size_t i) const { return counts_[i]; }
  std::span<const Count> counts() const { return counts_; }
  Count total() const;

  // Forward (+1) or backward (-1) step at point i. A backward step below zero
  // throws ContractError.
  void step(std::size_t i, Direction dir);

  // Weights as doubles, for criterion evaluation.
  std::vector<double> weights() const;

  friend bool operator==(const ExactDesign&, const ExactDesign&) = default;
  friend auto operator<=>(const ExactDesign&, const ExactDesign&) = default;

 private:
  std::vector<Count> counts_;
};

// Relaxation of an exact design to nonnegative real weights.
class ApproximateDesign {
 public:
  ApproximateDesign() = default;
  explicit ApproximateDesign(std::vector<double> weights);
  explicit ApproximateDesign(const ExactDesign& design);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// Residual amounts of each resource, r = b - A*zeta.
using ResidualVector = std::vector<double>;

// Nonnegative consumption matrix A (k x n) and positive limits b (k).
//
// The dense matrix is stored row-major; in addition every column keeps the
// list of rows in which it consumes a resource, so that per-point work
// (feasibility of a step, headroom, residual update) costs O(nnz of column).
class ResourceConstraints {
 public:
  struct Entry {
    std::size_t row;
    double coef;
  };

  ResourceConstraints() = default;
  // Validates (C1) 0 < b_r < inf, (C2) a_ri >= 0 and (C3) every column has a
  // positive entry. Throws ValidationError naming the violated assumption.
  ResourceConstraints(std::size_t rows, std::size_t cols,
                      std::vector<double> a_row_major, std::vector<double> b);
  ResourceConstraints(const std::vector<std::vector<double>>& a,
                      std::vector<double> b);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double a(std::size_t r, std::size_t i) const { return a_[r * cols_ + i]; }
  std::span<const double> row(std::size_t r) const {
    return {a_.data() + r * cols_, cols_};
  }
  std::span<const double> limits() const { return b_; }
  double limit(std::size_t r) const { return b_[r]; }

  // Rows with a_ri > 0 for column i.
  std::span<const Entry> column(std::size_t i) const { return columns_[i]; }

  // Entries below this value (1e-12 * max|A|) are treated as zero by headroom.
  double tiny() const { return tiny_; }

  // Per-row feasibility slack 1e-9 * max(1, |b_r|).
  double tolerance(std::size_t r) const { return tol_[r]; }

  std::span<const double> data() const { return a_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> tol_;
  double tiny_ = 0.0;
  std::vector<std::vector<Entry>> columns_;
};

// Regressors F (m x n), constraints, and the protected base design xi0.
class DesignProblem {
 public:
  // Throws ContractError on dimension mismatch and ValidationError when the
  // base design is infeasible or maximal, or when m > n.
  DesignProblem(Eigen::MatrixXd regressors, ResourceConstraints constraints,
                ExactDesign base, std::vector<std::string> labels = {});

  std::size_t points() const { return static_cast<std::size_t>(f_.cols()); }
  std::size_t dimension() const { return static_cast<std::size_t>(f_.rows()); }
  const Eigen::MatrixXd& regressors() const { return f_; }
  const ResourceConstraints& constraints() const { return constraints_; }
  const ExactDesign& base() const { return base_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  Eigen::MatrixXd f_;
  ResourceConstraints constraints_;
  ExactDesign base_;
  std::vector<std::string> labels_;
};

bool is_feasible(const ExactDesign& design, const DesignProblem& problem);
// Feasibility of real weights in the approximate polyhedron (same tolerance).
bool is_feasible(std::span<const double> weights, const DesignProblem& problem);

ResidualVector residuals(const ExactDesign& design,
                         const ResourceConstraints& constraints);
ResidualVector residuals(std::span<const double> weights,
                         const ResourceConstraints& constraints);

// r(zeta +/- e_i) = r(zeta) -/+ A[:, i], applied in place.
void update_residuals(ResidualVector& r, std::size_t i, Direction dir,
                      const ResourceConstraints& constraints);

// True iff every row consumed by point i still has room for one more trial.
bool can_step_forward(std::span<const double> r, std::size_t i,
                      const ResourceConstraints& constraints);

std::vector<std::size_t> upper_neighbors(const ExactDesign& design,
                                         const DesignProblem& problem);
std::vector<std::size_t> upper_neighbors(std::span<const double> r,
                                         const ResourceConstraints& constraints);
std::vector<std::size_t> lower_neighbors(const ExactDesign& design,
                                         const DesignProblem& problem);
bool is_maximal(const ExactDesign& design, const DesignProblem& problem);

// d_i = largest integer step count along e_i that stays feasible.
std::vector<Count> headroom(const ExactDesign& design,
                            const DesignProblem& problem);
void headroom(std::span<const double> r, const ResourceConstraints& constraints,
              std::vector<Count>& out);

// Largest gamma >= 0 with zeta + gamma * d inside the approximate polyhedron;
// zero when d == 0.
double gamma(const ExactDesign& design, std::span<const Count> d,
             const DesignProblem& problem);
double gamma(std::span<const double> r, std::span<const Count> d,
             const ResourceConstraints& constraints);

}  // namespace rcdesign

#endif  // RCDESIGN_DESIGN_HPP_
