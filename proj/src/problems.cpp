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

#include "rcdesign/problems.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rcdesign/errors.hpp"

namespace rcdesign {

namespace {

std::size_t pair_count(int v) {
  return static_cast<std::size_t>(v) * static_cast<std::size_t>(v - 1) / 2;
}

std::string format_hour(int t) { return "t=" + std::to_string(t); }

}  // namespace

std::size_t pair_index(int t1, int t2, int v) {
  if (!(1 <= t1 && t1 < t2 && t2 <= v)) {
    std::ostringstream os;
    os << "pair_index requires 1 <= t1 < t2 <= v; got (" << t1 << ", " << t2 << ", " << v << ")";
    throw ContractError(os.str());
  }
  const long long a = t1, b = t2, n = v;
  return static_cast<std::size_t>(b - n + a * n - (a * a + a) / 2);
}

std::pair<int, int> pair_of_index(std::size_t index, int v) {
  if (index < 1 || index > pair_count(v)) throw ContractError("pair index out of range");
  std::size_t first = 1;  // index of (t1, t1 + 1)
  for (int t1 = 1; t1 < v; ++t1) {
    const std::size_t row = static_cast<std::size_t>(v - t1);
    if (index < first + row) return {t1, t1 + 1 + static_cast<int>(index - first)};
    first += row;
  }
  throw ContractError("pair index out of range");
}

DesignProblem block_problem(const BlockProblemSpec& spec) {
  const int v = spec.v;
  if (v < 3) throw ContractError("block problem needs v >= 3 treatments");
  if (!spec.block_limit && !spec.treatment_limits) {
    throw ContractError("block problem needs a block limit or treatment limits");
  }
  const std::size_t n = pair_count(v);
  const auto m = static_cast<Eigen::Index>(v - 1);
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(n));
  std::vector<std::string> labels(n);
  for (int t1 = 1; t1 < v; ++t1) {
    for (int t2 = t1 + 1; t2 <= v; ++t2) {
      const auto col = static_cast<Eigen::Index>(pair_index(t1, t2, v) - 1);
      // [I_{v-1}, 0](e_t1 - e_t2): treatment v is dropped.
      f(t1 - 1, col) = 1.0;
      if (t2 < v) f(t2 - 1, col) = -1.0;
      labels[static_cast<std::size_t>(col)] =
          "(" + std::to_string(t1) + "," + std::to_string(t2) + ")";
    }
  }

  std::vector<double> a;
  std::vector<double> b;
  if (spec.block_limit) {
    a.insert(a.end(), n, 1.0);
    b.push_back(*spec.block_limit);
  }
  if (spec.treatment_limits) {
    const auto& lim = *spec.treatment_limits;
    if (lim.size() != static_cast<std::size_t>(v)) {
      throw ContractError("treatment_limits must have one entry per treatment");
    }
    for (int r = 1; r <= v; ++r) {
      for (std::size_t idx = 1; idx <= n; ++idx) {
        const auto [t1, t2] = pair_of_index(idx, v);
        a.push_back(t1 == r || t2 == r ? 1.0 : 0.0);
      }
      b.push_back(lim[static_cast<std::size_t>(r - 1)]);
    }
  }
  const std::size_t rows = b.size();
  ResourceConstraints constraints(rows, n, std::move(a), std::move(b));
  return DesignProblem(std::move(f), std::move(constraints), ExactDesign(n),
                       std::move(labels));
}

Multigraph::Multigraph(int v) : v_(v), mult_(v >= 2 ? pair_count(v) : 0, 0) {
  if (v < 1) throw ContractError("multigraph needs at least one vertex");
}

Count Multigraph::multiplicity(int a, int b) const {
  if (a > b) std::swap(a, b);
  return mult_[pair_index(a, b, v_) - 1];
}

void Multigraph::set_multiplicity(int a, int b, Count count) {
  if (count < 0) throw ContractError("edge multiplicity must be nonnegative");
  if (a > b) std::swap(a, b);
  mult_[pair_index(a, b, v_) - 1] = count;
}

void Multigraph::add_edge(int a, int b, Count count) {
  set_multiplicity(a, b, multiplicity(a, b) + count);
}

Count Multigraph::edges() const {
  return std::accumulate(mult_.begin(), mult_.end(), Count{0});
}

Multigraph concurrence_graph(const ExactDesign& design, int v) {
  if (design.size() != pair_count(v)) {
    throw ContractError("concurrence_graph: design length must be v(v-1)/2");
  }
  Multigraph g(v);
  for (std::size_t idx = 1; idx <= design.size(); ++idx) {
    if (design[idx - 1] == 0) continue;
    const auto [t1, t2] = pair_of_index(idx, v);
    g.set_multiplicity(t1, t2, design[idx - 1]);
  }
  return g;
}

std::uint64_t matrix_tree_count(const Multigraph& graph) {
  const int v = graph.vertices();
  if (v < 2) throw ContractError("matrix_tree_count needs at least two vertices");
  // Laplacian with the last vertex removed.
  const auto dim = static_cast<Eigen::Index>(v - 1);
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(dim, dim);
  for (int a = 1; a < v; ++a) {
    for (int b = a + 1; b <= v; ++b) {
      const double w = static_cast<double>(graph.multiplicity(a, b));
      if (w == 0.0) continue;
      lap(a - 1, a - 1) += w;
      if (b < v) {
        lap(b - 1, b - 1) += w;
        lap(a - 1, b - 1) -= w;
        lap(b - 1, a - 1) -= w;
      }
    }
  }
  const double det = lap.fullPivLu().determinant();
  const double rounded = std::round(det);
  if (rounded <= 0.0) return 0;
  if (std::abs(det - rounded) >= 1e-6 * rounded) {
    throw std::logic_error("matrix_tree_count: determinant is not near an integer");
  }
  return static_cast<std::uint64_t>(rounded);
}

BigInt multipartite_tree_count(int v, std::span<const int> parts) {
  if (parts.size() < 2) throw ContractError("multipartite graph needs p >= 2 parts");
  long long sum = 0;
  for (int k : parts) {
    if (k < 1) throw ContractError("partition sizes must be positive");
    sum += k;
  }
  if (sum != v) throw ContractError("partition sizes must sum to v");
  BigInt out = boost::multiprecision::pow(BigInt(v), static_cast<unsigned>(parts.size() - 2));
  for (int k : parts) {
    out *= boost::multiprecision::pow(BigInt(v - k), static_cast<unsigned>(k - 1));
  }
  return out;
}

Multigraph complete_multipartite(std::span<const int> parts) {
  const int v = std::accumulate(parts.begin(), parts.end(), 0);
  Multigraph g(v);
  std::vector<int> part_of;
  for (std::size_t p = 0; p < parts.size(); ++p) part_of.insert(part_of.end(), parts[p], static_cast<int>(p));
  for (int a = 1; a <= v; ++a) {
    for (int b = a + 1; b <= v; ++b) {
      if (part_of[a - 1] != part_of[b - 1]) g.set_multiplicity(a, b, 1);
    }
  }
  return g;
}

std::vector<int> quadratic_x1_tenths() {
  std::vector<int> levels{949};
  for (int x = 951; x <= 967; ++x) levels.push_back(x);
  return levels;
}

std::size_t quadratic_index(int x1_tenths, int x2) {
  if (x2 != 0 && x2 != 10 && x2 != 20) throw ContractError("x2 must be 0, 10 or 20");
  if (x1_tenths == 949) return static_cast<std::size_t>(1 + x2 / 10);
  if (x1_tenths < 951 || x1_tenths > 967) throw ContractError("x1 is not a grid level");
  // 30 (x1 - 94.9) + x2 / 10 - 2 with x1 in tenths.
  return static_cast<std::size_t>(3 * (x1_tenths - 949) + x2 / 10 - 2);
}

DesignProblem quadratic_problem(double budget) {
  if (!(budget > 0.0)) throw ContractError("quadratic problem needs a positive budget");
  constexpr std::size_t n = 54;
  Eigen::MatrixXd f(6, static_cast<Eigen::Index>(n));
  std::vector<std::string> labels(n);
  for (int x1t : quadratic_x1_tenths()) {
    for (int x2 : {0, 10, 20}) {
      const std::size_t idx = quadratic_index(x1t, x2) - 1;
      const double x1 = x1t / 10.0;
      const double x2d = x2;
      f.col(static_cast<Eigen::Index>(idx)) << 1.0, x1, x2d, x1 * x1, x2d * x2d, x1 * x2d;
      std::ostringstream os;
      os << "(" << x1t / 10 << "." << x1t % 10 << "," << x2 << ")";
      labels[idx] = os.str();
    }
  }

  constexpr std::size_t k = kQuadraticMarginals.size() + 1;
  std::vector<double> a(k * n, 0.0);
  std::vector<double> b(kQuadraticMarginals.begin(), kQuadraticMarginals.end());
  for (std::size_t r = 0; r < kQuadraticMarginals.size(); ++r) {
    for (std::size_t j = 0; j < 3; ++j) a[r * n + 3 * r + j] = 1.0;
  }
  const std::size_t cost = kQuadraticMarginals.size();
  for (std::size_t r = 0; r < kQuadraticMarginals.size(); ++r) {
    a[cost * n + 3 * r + 1] = 10.0;
    a[cost * n + 3 * r + 2] = 20.0;
  }
  b.push_back(budget);
  ResourceConstraints constraints(k, n, std::move(a), std::move(b));
  return DesignProblem(std::move(f), std::move(constraints), ExactDesign(n),
                       std::move(labels));
}

std::vector<double> quadratic_budget_grid() {
  std::vector<double> grid;
  for (int budget = 1100; budget <= 3900; budget += 50) grid.push_back(budget);
  return grid;
}

double mu(double t, double theta1, double theta2) {
  const double u = std::max(t - kWindowHours, 0.0);
  return theta1 / theta2 * (std::exp(-theta2 * u) - std::exp(-theta2 * t));
}

std::array<double, 2> mu_gradient(double t, double theta1, double theta2) {
  const double u = std::max(t - kWindowHours, 0.0);
  const double eu = std::exp(-theta2 * u);
  const double et = std::exp(-theta2 * t);
  const double diff = eu - et;
  return {diff / theta2,
          -theta1 / (theta2 * theta2) * diff + theta1 / theta2 * (-u * eu + t * et)};
}

double cost_class(int s, int t) {
  const int h = ((s + t) % 168 + 168) % 168;
  constexpr int kWeekendStart = 4 * 24 + 19;  // Friday 19:00
  constexpr int kWeekendEnd = 6;              // Monday 06:00
  if (h >= kWeekendStart || h < kWeekendEnd) return 2.0;
  const int day = h / 24;
  const int hour = h % 24;
  if (day <= 4 && hour >= 8 && hour < 17) return 1.0;
  return 1.5;
}

DesignProblem fluoranthene_problem(const FluorantheneSpec& spec) {
  if (spec.s < 0 || spec.s > 167) throw ContractError("starting hour s must lie in [0, 167]");
  if (!(spec.budget > 0.0)) throw ContractError("budget must be positive");
  if (!(spec.theta2 > 0.0)) throw ContractError("theta2 must be positive");
  constexpr std::size_t n = kHorizonHours + 1;
  constexpr std::size_t k = n + 1;

  Eigen::MatrixXd f(2, static_cast<Eigen::Index>(n));
  std::vector<std::string> labels(n);
  std::vector<double> a(k * n, 0.0);
  std::vector<double> b(k, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int t = static_cast<int>(i);
    const auto g = mu_gradient(t, spec.theta1, spec.theta2);
    f(0, static_cast<Eigen::Index>(i)) = g[0];
    f(1, static_cast<Eigen::Index>(i)) = g[1];
    labels[i] = format_hour(t);
    a[i] = cost_class(spec.s, t);
    a[(i + 1) * n + i] = 1.0;
  }
  b[0] = spec.budget;

  std::vector<Count> base(n, 0);
  base[0] = base[kWindowHours] = base[kHorizonHours] = 1;
  ResourceConstraints constraints(k, n, std::move(a), std::move(b));
  return DesignProblem(std::move(f), std::move(constraints), ExactDesign(std::move(base)),
                       std::move(labels));
}

}  // namespace rcdesign
