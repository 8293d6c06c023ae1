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

// Benchmark problem families and block-design graph utilities:
//
//  * block designs with blocks of size two (v treatments, pair design points),
//    under a block limit and/or per-treatment replication limits;
//  * the full quadratic model on an 18 x 3 grid with marginal and cost rows;
//  * sampling times for a two-parameter uptake/elimination model with a
//    time-of-week cost row and at-most-once sampling per hour.

#ifndef RCDESIGN_PROBLEMS_HPP_
#define RCDESIGN_PROBLEMS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rcdesign/design.hpp"

namespace rcdesign {

// ---------------------------------------------------------------- blocks ---

struct BlockProblemSpec {
  int v = 0;
  std::optional<double> block_limit;
  std::optional<std::vector<double>> treatment_limits;
};

// One-based point index of the treatment pair t1 < t2 among v treatments,
// t2 - v + t1 v - (t1^2 + t1)/2. Throws ContractError unless 1 <= t1 < t2 <= v.
std::size_t pair_index(int t1, int t2, int v);
// Inverse of pair_index: the (t1, t2) pair of a one-based point index.
std::pair<int, int> pair_of_index(std::size_t index, int v);

DesignProblem block_problem(const BlockProblemSpec& spec);

// Undirected multigraph without loops; multiplicities indexed like the pair
// design points.
class Multigraph {
 public:
  explicit Multigraph(int v);

  int vertices() const { return v_; }
  // Vertices are one-based.
  Count multiplicity(int a, int b) const;
  void set_multiplicity(int a, int b, Count count);
  void add_edge(int a, int b, Count count = 1);
  Count edges() const;
  std::span<const Count> pair_multiplicities() const { return mult_; }

 private:
  int v_;
  std::vector<Count> mult_;
};

Multigraph concurrence_graph(const ExactDesign& design, int v);

// Spanning-tree count as the determinant of a reduced Laplacian (double
// precision, rounded). Zero for disconnected graphs.
std::uint64_t matrix_tree_count(const Multigraph& graph);

using BigInt = boost::multiprecision::cpp_int;

// v^(p-2) * prod_j (v - k_j)^(k_j - 1) for the complete multipartite graph
// with parts k_1..k_p (p >= 2, sum k_j = v).
BigInt multipartite_tree_count(int v, std::span<const int> parts);

Multigraph complete_multipartite(std::span<const int> parts);

// ------------------------------------------------------------- quadratic ---

// Marginal limits of the 18 levels of x1.
inline constexpr std::array<double, 18> kQuadraticMarginals = {
    1, 3, 14, 59, 52, 29, 25, 32, 36, 29, 36, 38, 12, 10, 8, 2, 3, 3};

// x1 levels in tenths: 949, 951, 952, ..., 967.
std::vector<int> quadratic_x1_tenths();
// One-based index of the point (x1 / 10, x2); x1 given in tenths.
std::size_t quadratic_index(int x1_tenths, int x2);

DesignProblem quadratic_problem(double budget);

// 1100, 1150, ..., 3900.
std::vector<double> quadratic_budget_grid();

// ---------------------------------------------------------- fluoranthene ---

struct FluorantheneSpec {
  int s = 0;
  double budget = 13.0;
  double theta2 = 0.2381;
  double theta1 = 1.0;
};

inline constexpr int kHorizonHours = 144;
inline constexpr int kWindowHours = 72;

// Gradient of mu_t = (th1 / th2)(exp(-th2 max(t - 72, 0)) - exp(-th2 t)) with
// respect to (th1, th2).
std::array<double, 2> mu_gradient(double t, double theta1, double theta2);
double mu(double t, double theta1, double theta2);

// Sampling cost at offset t for an experiment started at hour-of-week s
// (hour 0 = Monday 00:00): 2.0 in [Fri 19:00, Mon 06:00), 1.0 on weekdays in
// [08:00, 17:00), 1.5 otherwise.
double cost_class(int s, int t);

DesignProblem fluoranthene_problem(const FluorantheneSpec& spec);

}  // namespace rcdesign

#endif  // RCDESIGN_PROBLEMS_HPP_
