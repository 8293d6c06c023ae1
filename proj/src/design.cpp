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

#include "rcdesign/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "rcdesign/errors.hpp"

namespace rcdesign {

namespace {

// Upper bound for a single headroom entry; keeps the double -> integer
// conversion defined when a column only consumes near-empty rows.
constexpr double kMaxHeadroom = 1e15;

void check_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    std::ostringstream os;
    os << what << ": expected length " << want << ", got " << got;
    throw ContractError(os.str());
  }
}

}  // namespace

ExactDesign::ExactDesign(std::vector<Count> counts) : counts_(std::move(counts)) {
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < 0) {
      throw ContractError("exact design has a negative count at point " +
                          std::to_string(i));
    }
  }
}

Count ExactDesign::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), Count{0});
}

void ExactDesign::step(std::size_t i, Direction dir) {
  if (i >= counts_.size()) throw ContractError("step: point index out of range");
  if (dir == Direction::kBackward && counts_[i] == 0) {
    throw ContractError("step: backward step below zero");
  }
  counts_[i] += static_cast<int>(dir);
}

std::vector<double> ExactDesign::weights() const {
  return {counts_.begin(), counts_.end()};
}

ApproximateDesign::ApproximateDesign(std::vector<double> weights)
    : weights_(std::move(weights)) {
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ContractError("approximate design weights must be finite and >= 0");
    }
  }
}

ApproximateDesign::ApproximateDesign(const ExactDesign& design)
    : weights_(design.weights()) {}

ResourceConstraints::ResourceConstraints(std::size_t rows, std::size_t cols,
                                         std::vector<double> a_row_major,
                                         std::vector<double> b)
    : rows_(rows), cols_(cols), a_(std::move(a_row_major)), b_(std::move(b)) {
  check_size(a_.size(), rows_ * cols_, "constraint matrix");
  check_size(b_.size(), rows_, "limit vector");
  if (rows_ == 0) throw ValidationError("C1", "at least one resource row is required");

  for (std::size_t r = 0; r < rows_; ++r) {
    if (!(b_[r] > 0.0) || !std::isfinite(b_[r])) {
      std::ostringstream os;
      os << "resource limits must be positive and finite; b[" << r + 1
         << "] = " << b_[r];
      throw ValidationError("C1", os.str());
    }
  }
  double max_abs = 0.0;
  for (std::size_t idx = 0; idx < a_.size(); ++idx) {
    const double v = a_[idx];
    if (!(v >= 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "consumption coefficients must be finite and nonnegative; a["
         << idx / cols_ + 1 << "," << idx % cols_ + 1 << "] = " << v;
      throw ValidationError("C2", os.str());
    }
    max_abs = std::max(max_abs, v);
  }
  tiny_ = 1e-12 * max_abs;

  columns_.assign(cols_, {});
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t i = 0; i < cols_; ++i) {
      if (a(r, i) > 0.0) columns_[i].push_back({r, a(r, i)});
    }
  }
  for (std::size_t i = 0; i < cols_; ++i) {
    if (columns_[i].empty()) {
      throw ValidationError("C3", "design point " + std::to_string(i + 1) +
                                      " consumes no resource (zero column)");
    }
  }

  tol_.resize(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    tol_[r] = 1e-9 * std::max(1.0, std::abs(b_[r]));
  }
}

ResourceConstraints::ResourceConstraints(const std::vector<std::vector<double>>& a,
                                         std::vector<double> b)
    : ResourceConstraints(
          a.size(), a.empty() ? 0 : a.front().size(),
          [&a] {
            std::vector<double> flat;
            const std::size_t cols = a.empty() ? 0 : a.front().size();
            for (const auto& row : a) {
              check_size(row.size(), cols, "constraint matrix row");
              flat.insert(flat.end(), row.begin(), row.end());
            }
            return flat;
          }(),
          std::move(b)) {}

DesignProblem::DesignProblem(Eigen::MatrixXd regressors,
                             ResourceConstraints constraints, ExactDesign base,
                             std::vector<std::string> labels)
    : f_(std::move(regressors)),
      constraints_(std::move(constraints)),
      base_(std::move(base)),
      labels_(std::move(labels)) {
  const std::size_t n = points();
  if (n == 0) throw ContractError("design space is empty");
  check_size(constraints_.cols(), n, "constraint columns");
  check_size(base_.size(), n, "base design");
  if (!labels_.empty()) check_size(labels_.size(), n, "labels");
  if (!f_.allFinite()) throw ContractError("regressors must be finite");
  if (dimension() == 0) throw ContractError("model dimension must be positive");
  if (dimension() > n) {
    throw ValidationError("m<=n", "model dimension " + std::to_string(dimension()) +
                                      " exceeds the number of design points " +
                                      std::to_string(n) +
                                      "; no design can be nonsingular");
  }
  if (!is_feasible(base_, *this)) {
    throw ValidationError("base-feasible", "base design violates A*xi0 <= b");
  }
  if (is_maximal(base_, *this)) {
    throw ValidationError("base-not-maximal",
                          "base design is maximal; no forward step exists");
  }
}

bool is_feasible(const ExactDesign& design, const DesignProblem& problem) {
  check_size(design.size(), problem.points(), "design");
  const auto& base = problem.base();
  for (std::size_t i = 0; i < design.size(); ++i) {
    if (design[i] < base[i]) return false;
  }
  const ResidualVector r = residuals(design, problem.constraints());
  const auto& c = problem.constraints();
  for (std::size_t row = 0; row < r.size(); ++row) {
    if (r[row] < -c.tolerance(row)) return false;
  }
  return true;
}

bool is_feasible(std::span<const double> weights, const DesignProblem& problem) {
  check_size(weights.size(), problem.points(), "design");
  const auto& base = problem.base();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < static_cast<double>(base[i]) - 1e-9) return false;
  }
  const ResidualVector r = residuals(weights, problem.constraints());
  const auto& c = problem.constraints();
  for (std::size_t row = 0; row < r.size(); ++row) {
    if (r[row] < -c.tolerance(row)) return false;
  }
  return true;
}

ResidualVector residuals(const ExactDesign& design,
                         const ResourceConstraints& constraints) {
  check_size(design.size(), constraints.cols(), "design");
  ResidualVector r(constraints.limits().begin(), constraints.limits().end());
  for (std::size_t i = 0; i < design.size(); ++i) {
    if (design[i] == 0) continue;
    const double w = static_cast<double>(design[i]);
    for (const auto& e : constraints.column(i)) r[e.row] -= e.coef * w;
  }
  return r;
}

ResidualVector residuals(std::span<const double> weights,
                         const ResourceConstraints& constraints) {
  check_size(weights.size(), constraints.cols(), "design");
  ResidualVector r(constraints.limits().begin(), constraints.limits().end());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0.0) continue;
    for (const auto& e : constraints.column(i)) r[e.row] -= e.coef * weights[i];
  }
  return r;
}

void update_residuals(ResidualVector& r, std::size_t i, Direction dir,
                      const ResourceConstraints& constraints) {
  const double sign = dir == Direction::kForward ? -1.0 : 1.0;
  for (const auto& e : constraints.column(i)) r[e.row] += sign * e.coef;
}

bool can_step_forward(std::span<const double> r, std::size_t i,
                      const ResourceConstraints& constraints) {
  for (const auto& e : constraints.column(i)) {
    if (e.coef > r[e.row] + constraints.tolerance(e.row)) return false;
  }
  return true;
}

std::vector<std::size_t> upper_neighbors(std::span<const double> r,
                                         const ResourceConstraints& constraints) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < constraints.cols(); ++i) {
    if (can_step_forward(r, i, constraints)) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> upper_neighbors(const ExactDesign& design,
                                         const DesignProblem& problem) {
  const ResidualVector r = residuals(design, problem.constraints());
  return upper_neighbors(r, problem.constraints());
}

std::vector<std::size_t> lower_neighbors(const ExactDesign& design,
                                         const DesignProblem& problem) {
  check_size(design.size(), problem.points(), "design");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < design.size(); ++i) {
    if (design[i] > problem.base()[i]) out.push_back(i);
  }
  return out;
}

bool is_maximal(const ExactDesign& design, const DesignProblem& problem) {
  const ResidualVector r = residuals(design, problem.constraints());
  for (std::size_t i = 0; i < design.size(); ++i) {
    if (can_step_forward(r, i, problem.constraints())) return false;
  }
  return true;
}

void headroom(std::span<const double> r, const ResourceConstraints& constraints,
              std::vector<Count>& out) {
  out.resize(constraints.cols());
  const double tiny = constraints.tiny();
  for (std::size_t i = 0; i < constraints.cols(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& e : constraints.column(i)) {
      if (e.coef <= tiny) continue;
      any = true;
      best = std::min(best, (r[e.row] + constraints.tolerance(e.row)) / e.coef);
    }
    if (!any) {
      // Every entry in the column is negligible; fall back to all of them.
      for (const auto& e : constraints.column(i)) {
        best = std::min(best, (r[e.row] + constraints.tolerance(e.row)) / e.coef);
      }
    }
    best = std::clamp(std::floor(best), 0.0, kMaxHeadroom);
    out[i] = static_cast<Count>(best);
  }
}

std::vector<Count> headroom(const ExactDesign& design, const DesignProblem& problem) {
  const ResidualVector r = residuals(design, problem.constraints());
  std::vector<Count> d;
  headroom(r, problem.constraints(), d);
  return d;
}

double gamma(std::span<const double> r, std::span<const Count> d,
             const ResourceConstraints& constraints) {
  check_size(d.size(), constraints.cols(), "headroom vector");
  // h = A d, accumulated column by column over the nonzero headrooms.
  thread_local std::vector<double> h;
  h.assign(constraints.rows(), 0.0);
  bool nonzero = false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0) continue;
    nonzero = true;
    const double di = static_cast<double>(d[i]);
    for (const auto& e : constraints.column(i)) h[e.row] += e.coef * di;
  }
  if (!nonzero) return 0.0;
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t row = 0; row < h.size(); ++row) {
    if (h[row] > 0.0) g = std::min(g, std::max(r[row], 0.0) / h[row]);
  }
  return std::isfinite(g) ? g : 0.0;
}

double gamma(const ExactDesign& design, std::span<const Count> d,
             const DesignProblem& problem) {
  const ResidualVector r = residuals(design, problem.constraints());
  return gamma(r, d, problem.constraints());
}

}  // namespace rcdesign
