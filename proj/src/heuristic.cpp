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

#include "rcdesign/heuristic.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "rcdesign/errors.hpp"

namespace rcdesign {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// x * 10^k without overflowing the intermediate power.
double scale_pow10(double x, int k) {
  while (k > 300) {
    x *= 1e300;
    k -= 300;
  }
  while (k < -300) {
    x *= 1e-300;
    k += 300;
  }
  return x * std::pow(10.0, k);
}

// Reusable buffers for val().
struct Lookahead {
  std::vector<Count> d;
  std::vector<double> w;
};

double val_impl(std::span<const double> weights, std::span<const double> r,
                const DesignProblem& problem, const Criterion& criterion,
                Lookahead& buf) {
  const auto& c = problem.constraints();
  headroom(r, c, buf.d);
  const double g = gamma(r, buf.d, c);
  if (g == 0.0) return criterion.evaluate(weights);
  buf.w.assign(weights.begin(), weights.end());
  for (std::size_t i = 0; i < buf.w.size(); ++i) {
    if (buf.d[i] != 0) buf.w[i] += g * static_cast<double>(buf.d[i]);
  }
  return criterion.evaluate(std::span<const double>(buf.w));
}

Lookahead& lookahead_buffers() {
  thread_local Lookahead buf;
  return buf;
}

struct Candidate {
  std::size_t point = 0;
  double phi = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

// argmax of val over the neighbours in one direction whose attribute is not
// tabu. Ties keep the smallest point index.
std::optional<Candidate> best_neighbor(SearchState& s, Direction dir,
                                       const DesignProblem& problem,
                                       const Criterion& criterion,
                                       const SearchConfig& config) {
  const auto& c = problem.constraints();
  const auto& base = problem.base();
  auto& buf = lookahead_buffers();
  thread_local std::vector<double> saved;
  std::optional<Candidate> best;
  const double delta = dir == Direction::kForward ? 1.0 : -1.0;
  for (std::size_t i = 0; i < s.current.size(); ++i) {
    if (dir == Direction::kForward) {
      if (!can_step_forward(s.residuals, i, c)) continue;
    } else if (s.current[i] <= base[i]) {
      continue;
    }
    const auto column = c.column(i);
    saved.clear();
    for (const auto& e : column) saved.push_back(s.residuals[e.row]);
    s.weights[i] += delta;
    update_residuals(s.residuals, i, dir, c);
    const double phi = criterion.evaluate(std::span<const double>(s.weights));
    if (!s.tabu.contains(attr(phi, config.n_round))) {
      const double v = val_impl(s.weights, s.residuals, problem, criterion, buf);
      if (!best || v > best->value) best = Candidate{i, phi, v};
    }
    s.weights[i] -= delta;
    // Restore rather than reverse the update, so rounding never accumulates.
    for (std::size_t k = 0; k < column.size(); ++k) s.residuals[column[k].row] = saved[k];
  }
  return best;
}

void move(SearchState& s, std::size_t i, Direction dir, double phi,
          const DesignProblem& problem) {
  s.current.step(i, dir);
  s.weights[i] += static_cast<double>(static_cast<int>(dir));
  update_residuals(s.residuals, i, dir, problem.constraints());
  s.phi = phi;
  assert(is_feasible(s.current, problem));
}

StepOutcome random_move(SearchState& s, const DesignProblem& problem,
                        const Criterion& criterion) {
  const auto& c = problem.constraints();
  const auto& base = problem.base();
  // L(xi) followed by U(xi); the two sets never share a design.
  thread_local std::vector<std::pair<std::size_t, Direction>> options;
  options.clear();
  for (std::size_t i = 0; i < s.current.size(); ++i) {
    if (s.current[i] > base[i]) options.emplace_back(i, Direction::kBackward);
  }
  for (std::size_t i = 0; i < s.current.size(); ++i) {
    if (can_step_forward(s.residuals, i, c)) options.emplace_back(i, Direction::kForward);
  }
  if (options.empty()) {
    throw std::logic_error("excursion reached a design with no neighbours");
  }
  const auto [i, dir] = options[s.rng.below(options.size())];
  s.current.step(i, dir);
  s.weights[i] += static_cast<double>(static_cast<int>(dir));
  update_residuals(s.residuals, i, dir, c);
  s.phi = criterion.evaluate(std::span<const double>(s.weights));
  assert(is_feasible(s.current, problem));
  return {StepKind::kRandom, i, dir, false, false};
}

}  // namespace

AttributeToken attr(double phi, int n_round) {
  if (!(phi > 0.0)) return {0, 0};
  n_round = std::clamp(n_round, 1, 15);
  const double upper = std::pow(10.0, n_round);
  const double lower = std::pow(10.0, n_round - 1);
  if (!std::isfinite(phi)) {
    return {static_cast<std::int64_t>(lower), std::numeric_limits<double>::max_exponent10 + 1};
  }
  int e = static_cast<int>(std::floor(std::log10(phi)));
  double mant = std::round(scale_pow10(phi, n_round - 1 - e));
  if (mant < lower) {
    // log10 overshot at an exact power of ten.
    --e;
    mant = std::round(scale_pow10(phi, n_round - 1 - e));
  }
  if (mant >= upper) {
    mant = lower;
    ++e;
  }
  return {static_cast<std::int64_t>(mant), e};
}

void SearchConfig::validate() const {
  if (back_max < 1) throw ContractError("back_max must be at least 1");
  if (n_round < 1 || n_round > 15) throw ContractError("n_round must lie in [1, 15]");
  if (!time_limit && !stall_limit) {
    throw ContractError("a time limit or a stall limit is required");
  }
  if (time_limit && !(*time_limit >= 0.0)) throw ContractError("time_limit must be >= 0");
  if (stall_limit && *stall_limit < 0) throw ContractError("stall_limit must be >= 0");
  if (restarts < 1) throw ContractError("restarts must be at least 1");
  if (threads < 0) throw ContractError("threads must be >= 0");
  if (init == InitStrategy::kFloorApproximate && !approximate) {
    throw ContractError("floor initialisation requires approximate design weights");
  }
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ContractError("Rng::below: bound must be positive");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 of seed + golden-ratio multiple of the index
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

const char* to_string(StepKind kind) {
  switch (kind) {
    case StepKind::kForward: return "forward";
    case StepKind::kBackward: return "backward";
    case StepKind::kRandom: return "random";
    case StepKind::kRestart: return "restart";
    case StepKind::kNewBest: return "new-best";
  }
  return "unknown";
}

SearchState SearchState::start(const DesignProblem& problem, const Criterion& criterion,
                               ExactDesign initial, std::uint64_t seed) {
  if (!is_feasible(initial, problem)) {
    throw ContractError("initial design is not feasible");
  }
  SearchState s;
  s.weights = initial.weights();
  s.residuals = rcdesign::residuals(initial, problem.constraints());
  s.phi = criterion.evaluate(std::span<const double>(s.weights));
  s.best = initial;
  s.best_phi = s.phi;
  s.current = std::move(initial);
  s.rng = Rng(seed);
  return s;
}

double val(std::span<const double> weights, std::span<const double> r,
           const DesignProblem& problem, const Criterion& criterion) {
  return val_impl(weights, r, problem, criterion, lookahead_buffers());
}

double val(const ExactDesign& zeta, const DesignProblem& problem,
           const Criterion& criterion) {
  const std::vector<double> w = zeta.weights();
  const ResidualVector r = residuals(zeta, problem.constraints());
  return val(w, r, problem, criterion);
}

ExactDesign initial_from_base(const DesignProblem& problem) { return problem.base(); }

ExactDesign initial_random(const DesignProblem& problem, Rng& rng,
                           std::optional<std::size_t> walk_length) {
  const auto& c = problem.constraints();
  ExactDesign design = problem.base();
  ResidualVector r = residuals(design, c);
  std::vector<std::size_t> path;
  std::vector<std::size_t> options;
  const std::size_t limit = walk_length.value_or(std::numeric_limits<std::size_t>::max());
  while (path.size() < limit) {
    options.clear();
    for (std::size_t i = 0; i < design.size(); ++i) {
      if (can_step_forward(r, i, c)) options.push_back(i);
    }
    if (options.empty()) break;
    const std::size_t i = options[rng.below(options.size())];
    design.step(i, Direction::kForward);
    update_residuals(r, i, Direction::kForward, c);
    path.push_back(i);
  }
  if (walk_length) return design;

  const std::size_t keep = rng.below(path.size() + 1);
  ExactDesign cut = problem.base();
  for (std::size_t s = 0; s < keep; ++s) cut.step(path[s], Direction::kForward);
  return cut;
}

ExactDesign initial_from_approximate(const ApproximateDesign& approx,
                                     const DesignProblem& problem) {
  if (approx.size() != problem.points()) {
    throw ContractError("approximate design has wrong length");
  }
  if (!is_feasible(approx.weights(), problem)) {
    throw ContractError("approximate design is not feasible (A w <= b and w >= base)");
  }
  std::vector<Count> counts(approx.size());
  for (std::size_t i = 0; i < approx.size(); ++i) {
    counts[i] = std::max(static_cast<Count>(std::floor(approx[i])), problem.base()[i]);
  }
  ExactDesign design(std::move(counts));
  if (!is_feasible(design, problem)) {
    throw ContractError("floored approximate design is not feasible");
  }
  return design;
}

StepOutcome excursion_step(SearchState& s, const DesignProblem& problem,
                           const Criterion& criterion, const SearchConfig& config) {
  StepOutcome out;
  const AttributeToken current = attr(s.phi, config.n_round);

  auto forward = [&]() -> bool {
    auto cand = best_neighbor(s, Direction::kForward, problem, criterion, config);
    if (!cand) return false;
    move(s, cand->point, Direction::kForward, cand->phi, problem);
    out.kind = StepKind::kForward;
    out.point = cand->point;
    out.direction = Direction::kForward;
    return true;
  };
  auto backward = [&]() -> bool {
    auto cand = best_neighbor(s, Direction::kBackward, problem, criterion, config);
    if (!cand) return false;
    move(s, cand->point, Direction::kBackward, cand->phi, problem);
    ++s.back_count;
    out.kind = StepKind::kBackward;
    out.point = cand->point;
    out.direction = Direction::kBackward;
    return true;
  };
  auto random = [&] {
    const StepOutcome r = random_move(s, problem, criterion);
    out.kind = r.kind;
    out.point = r.point;
    out.direction = r.direction;
  };

  if (!s.tabu.contains(current)) {
    s.tabu.insert(current);
    if (!forward()) {
      // Every upper neighbour is tabu or there is none; only the latter means
      // the design is maximal.
      if (s.best_phi < s.phi && upper_neighbors(s.residuals, problem.constraints()).empty()) {
        s.best = s.current;
        s.best_phi = s.phi;
        s.back_count = 0;
        out.new_best = true;
      }
      if (!backward()) random();
    }
  } else if (!backward() && !forward()) {
    random();
  }

  if (s.back_count > config.back_max) {
    s.current = s.best;
    s.weights = s.current.weights();
    s.residuals = residuals(s.current, problem.constraints());
    s.phi = s.best_phi;
    s.back_count = 0;
    out.failure_restart = true;
  }
  return out;
}

RunResult run(const DesignProblem& problem, const Criterion& criterion,
              const SearchConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const int restarts = config.restarts;

  struct Outcome {
    ExactDesign best;
    double phi = 0.0;
    std::int64_t iterations = 0;
    SearchTrace trace;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(restarts));
  std::atomic<bool> target_hit{false};

  auto search = [&](int index) {
    const auto t0 = Clock::now();
    const std::uint64_t seed = derive_seed(config.seed, static_cast<std::uint64_t>(index));
    Rng init_rng(derive_seed(seed, 0));
    ExactDesign initial;
    switch (config.init) {
      case InitStrategy::kBase: initial = initial_from_base(problem); break;
      case InitStrategy::kRandomWalk: initial = initial_random(problem, init_rng); break;
      case InitStrategy::kFloorApproximate:
        initial = initial_from_approximate(*config.approximate, problem);
        break;
    }
    SearchState state = SearchState::start(problem, criterion, std::move(initial), seed);
    Outcome& out = outcomes[static_cast<std::size_t>(index)];

    auto record = [&](StepKind kind, double phi) {
      if (!config.record_trace) return;
      out.trace.events.push_back({index, out.iterations, kind, attr(phi, config.n_round), phi,
                                  seconds_since(t0)});
    };
    auto reached_target = [&] {
      return config.target && state.best_phi >= *config.target * (1.0 - 1e-12);
    };
    if (reached_target()) target_hit = true;

    std::int64_t stall = 0;
    for (;;) {
      if (config.time_limit && seconds_since(t0) >= *config.time_limit) break;
      if (config.stall_limit && stall >= *config.stall_limit) break;
      if (target_hit.load(std::memory_order_relaxed)) break;

      const StepOutcome step = excursion_step(state, problem, criterion, config);
      ++out.iterations;
      record(step.kind, state.phi);
      if (step.new_best) {
        record(StepKind::kNewBest, state.best_phi);
        stall = 0;
        if (reached_target()) target_hit = true;
      } else {
        ++stall;
      }
      if (step.failure_restart) record(StepKind::kRestart, state.phi);
    }
    out.best = std::move(state.best);
    out.phi = state.best_phi;
  };

  int workers = config.threads == 0 ? static_cast<int>(std::thread::hardware_concurrency())
                                    : config.threads;
  workers = std::clamp(workers, 1, restarts);
  if (workers == 1) {
    for (int i = 0; i < restarts; ++i) search(i);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < restarts; i = next++) {
          try {
            search(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  RunResult result;
  result.restarts = restarts;
  for (int i = 0; i < restarts; ++i) {
    Outcome& o = outcomes[static_cast<std::size_t>(i)];
    result.iterations += o.iterations;
    if (i == 0 || o.phi > result.phi) {
      result.best = o.best;
      result.phi = o.phi;
      result.best_restart = i;
    }
    if (config.record_trace) {
      result.trace.events.insert(result.trace.events.end(), o.trace.events.begin(),
                                 o.trace.events.end());
    }
  }
  result.attribute = attr(result.phi, config.n_round);
  result.elapsed = seconds_since(start);
  return result;
}

}  // namespace rcdesign
