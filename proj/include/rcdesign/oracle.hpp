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

// Exhaustive ground truth for small instances. Everything here is brute force
// and deliberately shares no search logic with the heuristic.

#ifndef RCDESIGN_ORACLE_HPP_
#define RCDESIGN_ORACLE_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "rcdesign/criteria.hpp"
#include "rcdesign/design.hpp"
#include "rcdesign/problems.hpp"

namespace rcdesign {

inline constexpr double kDefaultEnumerationCap = 1e7;

// Product over points of (headroom at the base + 1): an upper bound on the
// number of lattice nodes the enumeration may visit.
double enumeration_bound(const DesignProblem& problem);

// Calls `visit` for every feasible exact design exactly once, in
// lexicographic order. Throws CapExceeded if enumeration_bound > cap.
void enumerate_feasible(const DesignProblem& problem,
                        const std::function<void(const ExactDesign&)>& visit,
                        double cap = kDefaultEnumerationCap);
std::vector<ExactDesign> enumerate_feasible(const DesignProblem& problem,
                                            double cap = kDefaultEnumerationCap);

struct ScoredDesign {
  ExactDesign design;
  double phi = 0.0;
};

struct EnumerationReport {
  std::int64_t feasible_count = 0;
  std::vector<ExactDesign> maximal_designs;
  std::vector<ScoredDesign> global_optima;
  std::vector<ScoredDesign> local_optima;
};

// Two criterion values closer than this relative gap count as a tie.
inline constexpr double kTieTolerance = 1e-12;

EnumerationReport global_optimum(const DesignProblem& problem, const Criterion& criterion,
                                 double cap = kDefaultEnumerationCap);

// Strict local optima under the box neighbourhood: every feasible design
// within l-infinity distance one has a strictly smaller value.
std::vector<ScoredDesign> local_optima(const DesignProblem& problem,
                                       const Criterion& criterion,
                                       double cap = kDefaultEnumerationCap);

inline constexpr int kBruteMaxVertices = 8;
inline constexpr Count kBruteMaxEdges = 20;

// Counts spanning trees by testing every (v-1)-subset of the (parallel)
// edges. Throws CapExceeded beyond 8 vertices or 20 edges.
std::uint64_t spanning_tree_brute(const Multigraph& graph);

}  // namespace rcdesign

#endif  // RCDESIGN_ORACLE_HPP_
