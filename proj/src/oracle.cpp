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

#include "rcdesign/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "rcdesign/errors.hpp"

namespace rcdesign {

namespace {

struct CountsHash {
  std::size_t operator()(const std::vector<Count>& v) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (Count c : v) h = (h ^ static_cast<std::size_t>(c)) * 1099511628211ULL;
    return h;
  }
};

bool fits(const ResidualVector& r, std::size_t i, const ResourceConstraints& c) {
  for (const auto& e : c.column(i)) {
    if (r[e.row] - e.coef < -c.tolerance(e.row)) return false;
  }
  return true;
}

void dfs(std::size_t i, std::vector<Count>& counts, ResidualVector& r,
         const ResourceConstraints& c,
         const std::function<void(const ExactDesign&)>& visit) {
  if (i == counts.size()) {
    visit(ExactDesign(counts));
    return;
  }
  const Count start = counts[i];
  const ResidualVector saved = r;
  for (;;) {
    dfs(i + 1, counts, r, c, visit);
    if (!fits(r, i, c)) break;
    ++counts[i];
    for (const auto& e : c.column(i)) r[e.row] -= e.coef;
  }
  counts[i] = start;
  r = saved;
}

bool ties(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max(std::abs(a), std::abs(b));
}

}  // namespace

double enumeration_bound(const DesignProblem& problem) {
  const std::vector<Count> d = headroom(problem.base(), problem);
  double bound = 1.0;
  for (Count di : d) bound *= static_cast<double>(di) + 1.0;
  return bound;
}

void enumerate_feasible(const DesignProblem& problem,
                        const std::function<void(const ExactDesign&)>& visit, double cap) {
  const double bound = enumeration_bound(problem);
  if (bound > cap) {
    std::ostringstream os;
    os << "enumeration refused: up to " << bound << " lattice nodes exceed the cap of " << cap;
    throw CapExceeded(bound, cap, os.str());
  }
  std::vector<Count> counts(problem.base().counts().begin(), problem.base().counts().end());
  ResidualVector r = residuals(problem.base(), problem.constraints());
  dfs(0, counts, r, problem.constraints(), visit);
}

std::vector<ExactDesign> enumerate_feasible(const DesignProblem& problem, double cap) {
  std::vector<ExactDesign> out;
  enumerate_feasible(problem, [&out](const ExactDesign& d) { out.push_back(d); }, cap);
  return out;
}

EnumerationReport global_optimum(const DesignProblem& problem, const Criterion& criterion,
                                 double cap) {
  EnumerationReport report;
  double best = -1.0;
  enumerate_feasible(
      problem,
      [&](const ExactDesign& d) {
        ++report.feasible_count;
        if (is_maximal(d, problem)) report.maximal_designs.push_back(d);
        const double phi = criterion.evaluate(d);
        if (best >= 0.0 && ties(phi, best)) {
          report.global_optima.push_back({d, phi});
        } else if (phi > best) {
          best = phi;
          report.global_optima.assign(1, {d, phi});
        }
      },
      cap);
  report.local_optima = local_optima(problem, criterion, cap);
  return report;
}

std::vector<ScoredDesign> local_optima(const DesignProblem& problem,
                                       const Criterion& criterion, double cap) {
  std::unordered_map<std::vector<Count>, double, CountsHash> value;
  std::vector<ExactDesign> order;
  enumerate_feasible(
      problem,
      [&](const ExactDesign& d) {
        value.emplace(std::vector<Count>(d.counts().begin(), d.counts().end()),
                      criterion.evaluate(d));
        order.push_back(d);
      },
      cap);

  const std::size_t n = problem.points();
  std::vector<ScoredDesign> out;
  std::vector<int> offset(n);
  std::vector<Count> probe(n);
  for (const ExactDesign& d : order) {
    const std::vector<Count> key(d.counts().begin(), d.counts().end());
    const double phi = value.at(key);
    bool strict = true;
    // Odometer over {-1, 0, 1}^n, skipping the all-zero offset.
    std::fill(offset.begin(), offset.end(), -1);
    for (bool done = false; !done && strict;) {
      if (std::any_of(offset.begin(), offset.end(), [](int o) { return o != 0; })) {
        for (std::size_t i = 0; i < n; ++i) probe[i] = key[i] + offset[i];
        const auto it = value.find(probe);
        if (it != value.end() && !(it->second < phi && !ties(it->second, phi))) strict = false;
      }
      std::size_t pos = 0;
      while (pos < n && offset[pos] == 1) offset[pos++] = -1;
      if (pos == n) {
        done = true;
      } else {
        ++offset[pos];
      }
    }
    if (strict) out.push_back({d, phi});
  }
  return out;
}

std::uint64_t spanning_tree_brute(const Multigraph& graph) {
  const int v = graph.vertices();
  const Count total = graph.edges();
  if (v > kBruteMaxVertices || total > kBruteMaxEdges) {
    std::ostringstream os;
    os << "spanning_tree_brute refused: " << v << " vertices and " << total
       << " edges exceed the caps of " << kBruteMaxVertices << " and " << kBruteMaxEdges;
    throw CapExceeded(static_cast<double>(total), static_cast<double>(kBruteMaxEdges), os.str());
  }
  if (v == 1) return 1;

  std::vector<std::pair<int, int>> edges;
  for (int a = 1; a <= v; ++a) {
    for (int b = a + 1; b <= v; ++b) {
      for (Count c = 0; c < graph.multiplicity(a, b); ++c) edges.emplace_back(a - 1, b - 1);
    }
  }
  const std::size_t pick = static_cast<std::size_t>(v - 1);
  if (edges.size() < pick) return 0;

  std::vector<std::size_t> chosen(pick);
  std::iota(chosen.begin(), chosen.end(), 0);
  std::vector<int> parent(static_cast<std::size_t>(v));
  auto find = [&parent](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      x = parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    }
    return x;
  };

  std::uint64_t trees = 0;
  for (;;) {
    std::iota(parent.begin(), parent.end(), 0);
    bool acyclic = true;
    for (std::size_t e : chosen) {
      const int ra = find(edges[e].first);
      const int rb = find(edges[e].second);
      if (ra == rb) {
        acyclic = false;
        break;
      }
      parent[static_cast<std::size_t>(ra)] = rb;
    }
    // v - 1 edges without a cycle always span.
    if (acyclic) ++trees;

    std::size_t k = pick;
    while (k > 0 && chosen[k - 1] == edges.size() - pick + (k - 1)) --k;
    if (k == 0) break;
    ++chosen[k - 1];
    for (std::size_t j = k; j < pick; ++j) chosen[j] = chosen[j - 1] + 1;
  }
  return trees;
}

}  // namespace rcdesign
