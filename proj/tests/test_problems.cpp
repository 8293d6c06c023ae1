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

#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "doctest.h"
#include "rcdesign/criteria.hpp"
#include "rcdesign/errors.hpp"
#include "rcdesign/heuristic.hpp"
#include "rcdesign/oracle.hpp"
#include "rcdesign/problems.hpp"
#include "test_support.hpp"

namespace rcdesign {
namespace {

TEST_CASE("pair_index") {
  CHECK(pair_index(1, 2, 16) == 1);
  CHECK(pair_index(1, 4, 16) == 3);
  CHECK(pair_index(15, 16, 16) == 120);
  CHECK_THROWS_AS(pair_index(2, 2, 5), ContractError);
  CHECK_THROWS_AS(pair_index(3, 2, 5), ContractError);
  CHECK_THROWS_AS(pair_index(1, 6, 5), ContractError);
}

TEST_CASE("pair_index is a bijection onto 1..v(v-1)/2") {
  for (int v = 3; v <= 20; ++v) {
    const std::size_t n = static_cast<std::size_t>(v * (v - 1) / 2);
    std::vector<int> hits(n + 1, 0);
    for (int a = 1; a < v; ++a) {
      for (int b = a + 1; b <= v; ++b) {
        const std::size_t idx = pair_index(a, b, v);
        REQUIRE(idx >= 1);
        REQUIRE(idx <= n);
        ++hits[idx];
        CHECK(pair_of_index(idx, v) == std::pair{a, b});
      }
    }
    for (std::size_t i = 1; i <= n; ++i) CHECK(hits[i] == 1);
  }
}

TEST_CASE("block problem shape") {
  const DesignProblem p = block_problem({.v = 6, .block_limit = 9.0, .treatment_limits = {}});
  CHECK(p.points() == 15);
  CHECK(p.dimension() == 5);
  CHECK(p.constraints().rows() == 1);
  CHECK(p.labels()[pair_index(2, 5, 6) - 1] == "(2,5)");
  // Column of (t1, v) is e_t1; column of (t1, t2) is e_t1 - e_t2.
  const auto& f = p.regressors();
  CHECK(f.col(static_cast<Eigen::Index>(pair_index(3, 6, 6) - 1)).sum() == 1.0);
  CHECK(f(2, static_cast<Eigen::Index>(pair_index(3, 6, 6) - 1)) == 1.0);
  CHECK(f(1, static_cast<Eigen::Index>(pair_index(2, 4, 6) - 1)) == 1.0);
  CHECK(f(3, static_cast<Eigen::Index>(pair_index(2, 4, 6) - 1)) == -1.0);

  const DesignProblem q = block_problem({.v = 4, .block_limit = 5.0,
                                         .treatment_limits = std::vector<double>{3, 3, 3, 3}});
  CHECK(q.constraints().rows() == 5);
  CHECK(q.constraints().limit(0) == 5.0);
  // Treatment row 2 covers (1,2), (2,3), (2,4).
  CHECK(q.constraints().a(2, pair_index(1, 2, 4) - 1) == 1.0);
  CHECK(q.constraints().a(2, pair_index(2, 3, 4) - 1) == 1.0);
  CHECK(q.constraints().a(2, pair_index(1, 3, 4) - 1) == 0.0);

  CHECK_THROWS_AS(block_problem({.v = 2, .block_limit = 3.0, .treatment_limits = {}}), ContractError);
  CHECK_THROWS_AS(block_problem({.v = 4, .block_limit = {}, .treatment_limits = {}}), ContractError);
}

TEST_CASE("concurrence graph") {
  Multigraph k3 = concurrence_graph(testing::design({1, 1, 1}), 3);
  CHECK(k3.edges() == 3);
  CHECK(matrix_tree_count(k3) == 3);

  std::vector<Count> c(6, 0);
  for (auto [a, b] : {std::pair{1, 3}, {1, 4}, {2, 3}, {2, 4}}) c[pair_index(a, b, 4) - 1] = 1;
  const Multigraph k22 = concurrence_graph(ExactDesign(c), 4);
  CHECK(k22.multiplicity(3, 1) == 1);
  CHECK(k22.multiplicity(1, 2) == 0);
  CHECK(matrix_tree_count(k22) == 4);

  CHECK(matrix_tree_count(concurrence_graph(ExactDesign(6), 4)) == 0);
  Multigraph split(4);
  split.add_edge(1, 2);
  split.add_edge(3, 4, 2);
  CHECK(split.edges() == 3);
  CHECK(matrix_tree_count(split) == 0);
}

TEST_CASE("multipartite tree count") {
  const std::vector<int> p422{2, 2};
  const std::vector<int> p633{3, 3};
  const std::vector<int> p1688{8, 8};
  CHECK(multipartite_tree_count(4, p422) == 4);
  CHECK(multipartite_tree_count(6, p633) == 81);
  CHECK(multipartite_tree_count(16, p1688) == BigInt(4398046511104LL));
  CHECK(multipartite_tree_count(16, p1688) == boost::multiprecision::pow(BigInt(8), 14));
  const std::vector<int> bad{2, 3};
  CHECK_THROWS_AS(multipartite_tree_count(6, bad), ContractError);
  const std::vector<int> single{4};
  CHECK_THROWS_AS(multipartite_tree_count(4, single), ContractError);
}

void partitions(int remaining, int max_part, std::vector<int>& current,
                const std::function<void(const std::vector<int>&)>& visit) {
  if (remaining == 0) {
    visit(current);
    return;
  }
  for (int k = std::min(remaining, max_part); k >= 1; --k) {
    current.push_back(k);
    partitions(remaining - k, k, current, visit);
    current.pop_back();
  }
}

TEST_CASE("closed form matches the Laplacian on every multipartite graph up to v = 9") {
  int checked = 0;
  for (int v = 2; v <= 9; ++v) {
    std::vector<int> current;
    partitions(v, v, current, [&](const std::vector<int>& parts) {
      if (parts.size() < 2) return;
      const BigInt closed = multipartite_tree_count(v, parts);
      const std::uint64_t lap = matrix_tree_count(complete_multipartite(parts));
      CHECK(closed == BigInt(lap));
      ++checked;
    });
  }
  CHECK(checked > 50);
}

TEST_CASE("Kirchhoff: D-criterion power equals the spanning-tree count") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int v = 3 + static_cast<int>(rng() % 6);
    const Count blocks = static_cast<Count>(v - 1 + rng() % 12);
    const DesignProblem p = block_problem({.v = v, .block_limit = static_cast<double>(blocks),
                                           .treatment_limits = {}});
    const DCriterion phi(p);
    const ExactDesign xi = testing::random_block_design(v, blocks, rng);
    const double power = std::pow(phi.evaluate(xi), static_cast<double>(v - 1));
    const Multigraph g = concurrence_graph(xi, v);
    const std::uint64_t count = matrix_tree_count(g);
    CHECK(std::llround(power) == static_cast<long long>(count));
    if (v <= kBruteMaxVertices && g.edges() <= kBruteMaxEdges) {
      CHECK(spanning_tree_brute(g) == count);
    }
  }
}

TEST_CASE("quadratic problem") {
  CHECK(quadratic_index(949, 0) == 1);
  CHECK(quadratic_index(949, 20) == 3);
  CHECK(quadratic_index(951, 0) == 4);
  CHECK(quadratic_index(967, 20) == 54);
  CHECK_THROWS_AS(quadratic_index(950, 0), ContractError);
  CHECK_THROWS_AS(quadratic_index(951, 5), ContractError);

  const DesignProblem p = quadratic_problem(2000);
  CHECK(p.points() == 54);
  CHECK(p.dimension() == 6);
  CHECK(p.constraints().rows() == 19);
  CHECK(p.labels()[3] == "(95.1,0)");
  const auto col = p.regressors().col(quadratic_index(952, 10) - 1);
  CHECK(col(1) == doctest::Approx(95.2));
  CHECK(col(2) == 10.0);
  CHECK(col(3) == doctest::Approx(95.2 * 95.2));
  CHECK(col(5) == doctest::Approx(952.0));

  // The 18 marginal rows partition the points into strata of three.
  for (std::size_t i = 0; i < p.points(); ++i) {
    int ones = 0;
    for (std::size_t r = 0; r < 18; ++r) {
      const double a = p.constraints().a(r, i);
      CHECK((a == 0.0 || a == 1.0));
      ones += a == 1.0;
    }
    CHECK(ones == 1);
    CHECK(p.constraints().a(18, i) == static_cast<double>(10 * (i % 3)));
  }
  for (std::size_t r = 0; r < 18; ++r) CHECK(p.constraints().limit(r) == kQuadraticMarginals[r]);
  CHECK(p.constraints().limit(18) == 2000.0);

  const auto grid = quadratic_budget_grid();
  CHECK(grid.size() == 57);
  CHECK(grid.front() == 1100.0);
  CHECK(grid.back() == 3900.0);
}

TEST_CASE("cost classes") {
  CHECK(cost_class(0, 34) == 1.0);
  CHECK(cost_class(0, 132) == 2.0);
  CHECK(cost_class(0, 7) == 1.5);
  CHECK(cost_class(100, 102) == cost_class(0, 34));
  std::map<double, int> counts;
  for (int h = 0; h < 168; ++h) ++counts[cost_class(0, h)];
  CHECK(counts[1.0] == 45);
  CHECK(counts[2.0] == 59);
  CHECK(counts[1.5] == 64);
  for (int s = 0; s < 168; ++s) {
    for (int t = 0; t <= 144; ++t) CHECK(cost_class(s, t) == cost_class(0, (s + t) % 168));
  }
}

TEST_CASE("fluoranthene gradient") {
  const auto g0 = mu_gradient(0, 1.0, 0.2381);
  CHECK(g0[0] == 0.0);
  CHECK(g0[1] == 0.0);
  for (int t = 0; t <= kHorizonHours; ++t) {
    const double th1 = 1.0;
    const double th2 = 0.2381;
    const auto g = mu_gradient(t, th1, th2);
    const double h1 = 1e-6 * th1;
    const double h2 = 1e-6 * th2;
    const double fd1 = (mu(t, th1 + h1, th2) - mu(t, th1 - h1, th2)) / (2 * h1);
    const double fd2 = (mu(t, th1, th2 + h2) - mu(t, th1, th2 - h2)) / (2 * h2);
    if (t > 0) {
      CHECK(g[0] == doctest::Approx(fd1).epsilon(1e-6));
      CHECK(g[1] == doctest::Approx(fd2).epsilon(1e-6));
    }
  }
}

TEST_CASE("fluoranthene problem") {
  const DesignProblem p = fluoranthene_problem({});
  CHECK(p.points() == 145);
  CHECK(p.dimension() == 2);
  CHECK(p.constraints().rows() == 146);
  CHECK(p.base()[0] == 1);
  CHECK(p.base()[72] == 1);
  CHECK(p.base()[144] == 1);
  CHECK(p.base().total() == 3);
  CHECK(p.labels()[72] == "t=72");
  // Monday 00:00 and Sunday 00:00 fall in the weekend, Thursday 00:00 does not.
  double base_cost = 0.0;
  for (std::size_t i = 0; i < p.points(); ++i) base_cost += p.constraints().a(0, i) * p.base()[i];
  CHECK(base_cost == 5.5);
  CHECK(p.constraints().limit(0) == 13.0);
  for (std::size_t r = 1; r < 146; ++r) {
    CHECK(p.constraints().limit(r) == 1.0);
    CHECK(p.constraints().a(r, r - 1) == 1.0);
  }
  CHECK_THROWS_AS(fluoranthene_problem({.s = 168}), ContractError);
}

TEST_CASE("fluoranthene optimum does not depend on theta1") {
  // Scaling theta1 scales both regressors, which rescales phi but keeps the argmax.
  std::set<std::vector<Count>> optima;
  for (double th1 : {0.5, 1.0, 2.0}) {
    const DesignProblem p = fluoranthene_problem({.s = 0, .budget = 13.0, .theta2 = 0.2381, .theta1 = th1});
    const DCriterion phi(p);
    SearchConfig config;
    config.time_limit.reset();
    config.stall_limit = 3000;
    config.restarts = 3;
    config.seed = 5;
    const RunResult r = run(p, phi, config);
    optima.insert(std::vector<Count>(r.best.counts().begin(), r.best.counts().end()));
  }
  CHECK(optima.size() == 1);
}

}  // namespace
}  // namespace rcdesign
