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

// Tabu-guided excursions over the lattice of feasible exact designs.
//
// Each iteration tries a forward step (when the current design's attribute is
// new) or a backward step (when it has been seen), always moving to the
// non-tabu neighbour with the largest lookahead value `val`. When every
// neighbour is tabu a random neighbour is taken. Maximal designs are compared
// against the best design so far, and an excursion that has taken more than
// `back_max` backward steps since the last improvement is abandoned in favour
// of the best design. The tabu list persists across those failure restarts.

#ifndef RCDESIGN_HEURISTIC_HPP_
#define RCDESIGN_HEURISTIC_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <unordered_set>
#include <vector>

#include "rcdesign/criteria.hpp"
#include "rcdesign/design.hpp"

namespace rcdesign {

// Criterion value rounded to n_round significant digits, as an integer
// mantissa in [10^(n_round-1), 10^n_round) and a decimal exponent. Zero maps
// to (0, 0).
struct AttributeToken {
  std::int64_t mantissa = 0;
  int exponent = 0;

  friend bool operator==(const AttributeToken&, const AttributeToken&) = default;
};

struct AttributeTokenHash {
  std::size_t operator()(const AttributeToken& t) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(t.mantissa) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(static_cast<std::int64_t>(t.exponent)) + 0x632BE59BD9B4E019ULL +
         (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

AttributeToken attr(double phi, int n_round);

enum class InitStrategy { kBase, kRandomWalk, kFloorApproximate };

struct SearchConfig {
  // Wall-clock budget per independent search, in seconds.
  std::optional<double> time_limit = 120.0;
  int back_max = 16;
  int n_round = 9;
  std::uint64_t seed = 0;
  // Number of independent searches, each from its own initial design.
  int restarts = 10;
  // Stop a search after this many iterations without improving its best.
  std::optional<std::int64_t> stall_limit;
  InitStrategy init = InitStrategy::kRandomWalk;
  // Weights for InitStrategy::kFloorApproximate.
  std::optional<ApproximateDesign> approximate;
  // Stop every search as soon as one reaches this criterion value.
  std::optional<double> target;
  // Worker threads for independent searches; 0 means hardware concurrency.
  int threads = 1;
  bool record_trace = false;

  // Throws ContractError for back_max < 1, n_round outside [1, 15], no
  // stopping rule, restarts < 1 or a floor initialisation without weights.
  void validate() const;
};

// Deterministic random stream. Bounded draws use rejection sampling on the
// raw 64-bit engine so results do not depend on the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

// Seed of the independent search with the given index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

using TabuList = std::unordered_set<AttributeToken, AttributeTokenHash>;

struct SearchState {
  ExactDesign current;
  std::vector<double> weights;  // current as doubles
  ResidualVector residuals;
  double phi = 0.0;  // criterion value of current
  TabuList tabu;
  ExactDesign best;
  double best_phi = 0.0;
  int back_count = 0;
  Rng rng{0};

  static SearchState start(const DesignProblem& problem, const Criterion& criterion,
                           ExactDesign initial, std::uint64_t seed);
};

enum class StepKind { kForward, kBackward, kRandom, kRestart, kNewBest };

const char* to_string(StepKind kind);

struct StepOutcome {
  StepKind kind = StepKind::kForward;  // forward, backward or random
  std::size_t point = 0;
  Direction direction = Direction::kForward;
  bool new_best = false;
  bool failure_restart = false;
};

struct TraceEvent {
  int restart = 0;
  std::int64_t iteration = 0;
  StepKind kind = StepKind::kForward;
  AttributeToken attribute;
  double phi = 0.0;
  double elapsed = 0.0;
};

struct SearchTrace {
  std::vector<TraceEvent> events;
};

// phi(zeta + gamma(zeta) d(zeta)), the value of the largest feasible
// approximate design in the headroom direction.
double val(const ExactDesign& zeta, const DesignProblem& problem,
           const Criterion& criterion);
// Same, from the weights and residuals of zeta.
double val(std::span<const double> weights, std::span<const double> r,
           const DesignProblem& problem, const Criterion& criterion);

ExactDesign initial_from_base(const DesignProblem& problem);
// Uniformly random feasible forward steps from the base design. Without a
// walk length, one complete walk to a maximal design is drawn and cut after a
// uniform number of steps in [0, its length].
ExactDesign initial_random(const DesignProblem& problem, Rng& rng,
                           std::optional<std::size_t> walk_length = std::nullopt);
// Componentwise floor, raised to the base design. Throws ContractError if the
// weights lie outside the approximate feasible set.
ExactDesign initial_from_approximate(const ApproximateDesign& approx,
                                     const DesignProblem& problem);

// One iteration of the excursion. Throws std::logic_error if the current
// design has no neighbour at all.
StepOutcome excursion_step(SearchState& state, const DesignProblem& problem,
                           const Criterion& criterion, const SearchConfig& config);

struct RunResult {
  ExactDesign best;
  double phi = 0.0;
  AttributeToken attribute;
  std::int64_t iterations = 0;
  int restarts = 0;
  int best_restart = 0;
  double elapsed = 0.0;
  SearchTrace trace;
};

RunResult run(const DesignProblem& problem, const Criterion& criterion,
              const SearchConfig& config);

}  // namespace rcdesign

#endif  // RCDESIGN_HEURISTIC_HPP_
