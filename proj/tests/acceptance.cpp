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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "json.hpp"
#include "rcdesign/criteria.hpp"
#include "rcdesign/heuristic.hpp"
#include "rcdesign/oracle.hpp"
#include "rcdesign/problems.hpp"
#include "test_support.hpp"

namespace {

using namespace rcdesign;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

const std::string kData = RCDESIGN_TEST_DATA_DIR;

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json cli_json(std::vector<std::string> args, int& code) {
  args.insert(args.begin(), "rcdesign");
  std::ostringstream out;
  std::ostringstream err;
  code = cli::run(args, out, err);
  return code == cli::kExitOk ? json::parse(out.str()) : json();
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// 1. Painting optimum (11, 6) with phi = sqrt(66) for seeds 1..10, < 1 s each.
Verdict toy_optimum() {
  Verdict v;
  double slowest = 0.0;
  for (int seed = 1; seed <= 10; ++seed) {
    const auto t0 = Clock::now();
    int code = 0;
    const json doc = cli_json({"solve", kData + "/toy.json", "--stall-limit", "10000",
                               "--restarts", "1", "--seed", std::to_string(seed)},
                              code);
    const double t = seconds_since(t0);
    slowest = std::max(slowest, t);
    if (code != cli::kExitOk) {
      v.fail("seed " + std::to_string(seed) + ": exit " + std::to_string(code));
      continue;
    }
    const double phi = doc.at("phi").get<double>();
    if (doc.at("design") != json::parse("[[1, 11], [2, 6]]")) {
      v.fail("seed " + std::to_string(seed) + ": design " + doc.at("design").dump());
    }
    if (std::abs(phi - std::sqrt(66.0)) > 1e-9 * std::sqrt(66.0)) {
      v.fail("seed " + std::to_string(seed) + ": phi " + fmt(phi));
    }
    if (t >= 1.0) v.fail("seed " + std::to_string(seed) + ": " + fmt(t) + " s");
  }
  if (v.pass) v.detail = "10 seeds, slowest " + fmt(slowest) + " s";
  return v;
}

// 2. Exactly the five strict local optima of the painting problem, < 1 s.
Verdict toy_local_optima() {
  Verdict v;
  const auto t0 = Clock::now();
  int code = 0;
  const json doc = cli_json({"verify", kData + "/toy.json"}, code);
  const double t = seconds_since(t0);
  if (code != cli::kExitOk) {
    v.fail("exit " + std::to_string(code));
    return v;
  }
  std::set<std::string> got;
  for (const auto& o : doc.at("local_optima")) got.insert(o.at("design").dump());
  const std::set<std::string> want{"[[1,9],[2,7]]", "[[1,11],[2,6]]", "[[1,13],[2,5]]",
                                   "[[1,15],[2,4]]", "[[1,17],[2,3]]"};
  if (got != want) v.fail("local optima differ: " + doc.at("local_optima").dump());
  if (t >= 1.0) v.fail(fmt(t) + " s");
  if (v.pass) v.detail = "5 local optima in " + fmt(t) + " s";
  return v;
}

// 3. Block optima pi(6,3,3) = 81 within 10 s and pi(16,8,8) = 8^14 within 120 s.
Verdict block_optima() {
  Verdict v;
  std::string detail;
  struct Case {
    int v;
    double blocks;
    std::uint64_t optimum;
    double limit;
  };
  for (const Case& c : {Case{6, 9, 81, 10.0}, Case{16, 64, 4398046511104ULL, 120.0}}) {
    const DesignProblem p = block_problem({.v = c.v, .block_limit = c.blocks, .treatment_limits = {}});
    const DCriterion phi(p);
    const double m = c.v - 1;
    double slowest = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      SearchConfig config;
      config.time_limit = c.limit;
      config.restarts = 1;
      config.seed = seed;
      config.target = std::pow(static_cast<double>(c.optimum), 1.0 / m) * (1 - 1e-12);
      const auto t0 = Clock::now();
      const RunResult r = run(p, phi, config);
      const double t = seconds_since(t0);
      slowest = std::max(slowest, t);
      const double power = std::pow(r.phi, m);
      const std::string tag = "v=" + std::to_string(c.v) + " seed " + std::to_string(seed);
      if (std::llround(power) != static_cast<long long>(c.optimum)) {
        v.fail(tag + ": phi^m " + fmt(power));
      }
      if (t >= c.limit) v.fail(tag + ": " + fmt(t) + " s");
    }
    detail += "v=" + std::to_string(c.v) + " slowest " + fmt(slowest) + " s; ";
  }
  if (v.pass) v.detail = detail + "3 seeds each";
  return v;
}

// 4. round(phi^m) = matrix-tree count = brute-force count on 200 designs.
Verdict kirchhoff() {
  Verdict v;
  std::mt19937_64 rng(4);
  int brute = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int t = 3 + static_cast<int>(rng() % 6);
    const Count blocks = static_cast<Count>(1 + rng() % (2 * t + 4));
    const DesignProblem p = block_problem({.v = t, .block_limit = static_cast<double>(blocks),
                                           .treatment_limits = {}});
    const ExactDesign xi = testing::random_block_design(t, blocks, rng);
    const double power = std::pow(DCriterion(p).evaluate(xi), static_cast<double>(t - 1));
    const Multigraph g = concurrence_graph(xi, t);
    const std::uint64_t count = matrix_tree_count(g);
    if (std::llround(power) != static_cast<long long>(count) ||
        std::abs(power - static_cast<double>(count)) > 1e-6 * std::max(1.0, static_cast<double>(count))) {
      v.fail("trial " + std::to_string(trial) + ": phi^m " + fmt(power) + " vs " + std::to_string(count));
    }
    if (t <= kBruteMaxVertices && g.edges() <= kBruteMaxEdges) {
      ++brute;
      if (spanning_tree_brute(g) != count) v.fail("trial " + std::to_string(trial) + ": brute force differs");
    }
  }
  if (v.pass) v.detail = "200 designs, " + std::to_string(brute) + " also brute-forced";
  return v;
}

// 5. Heuristic attribute matches the enumerated optimum on 20 random problems, < 60 s.
Verdict oracle_agreement() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(5);
  testing::RandomProblemOptions opt;
  opt.max_points = 5;
  opt.max_rows = 4;
  opt.max_headroom = 8;
  opt.random_base = true;
  for (int trial = 0; trial < 20; ++trial) {
    opt.integer_coefficients = trial % 2 == 0;
    const DesignProblem p = testing::random_problem(rng, opt);
    const DCriterion phi(p);
    const EnumerationReport report = global_optimum(p, phi);
    SearchConfig config;
    config.time_limit.reset();
    config.stall_limit = 10000;
    config.restarts = 5;
    config.seed = static_cast<std::uint64_t>(trial);
    const RunResult r = run(p, phi, config);
    const AttributeToken want = attr(report.global_optima.front().phi, config.n_round);
    if (!(r.attribute == want)) {
      v.fail("problem " + std::to_string(trial) + ": heuristic " + fmt(r.phi) + " vs oracle " +
             fmt(report.global_optima.front().phi));
    }
  }
  const double t = seconds_since(t0);
  if (t >= 60.0) v.fail(fmt(t) + " s");
  if (v.pass) v.detail = "20 problems in " + fmt(t) + " s";
  return v;
}

// 6. Headroom, gamma, residual-update and feasibility-closure invariants.
Verdict geometry() {
  Verdict v;
  std::mt19937_64 rng(6);
  long checks = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    testing::RandomProblemOptions opt;
    opt.integer_coefficients = trial % 2 == 0;
    opt.random_base = trial % 3 == 0;
    const DesignProblem p = testing::random_problem(rng, opt);
    const auto& c = p.constraints();
    const std::string tag = "case " + std::to_string(trial);

    // Residual consistency and feasibility closure along a random walk.
    ExactDesign zeta = p.base();
    ResidualVector r = residuals(zeta, c);
    const int steps = 1 + static_cast<int>(rng() % 1000);
    for (int s = 0; s < steps; ++s) {
      const auto up = upper_neighbors(r, c);
      const auto down = lower_neighbors(zeta, p);
      for (std::size_t i : up) {
        ExactDesign x = zeta;
        x.step(i, Direction::kForward);
        if (!is_feasible(x, p)) v.fail(tag + ": forward step leaves the feasible set");
      }
      for (std::size_t i : down) {
        ExactDesign x = zeta;
        x.step(i, Direction::kBackward);
        if (!is_feasible(x, p)) v.fail(tag + ": backward step leaves the feasible set");
      }
      const bool go_up = !up.empty() && (down.empty() || rng() % 3 != 0);
      const std::size_t i = go_up ? up[rng() % up.size()] : down[rng() % down.size()];
      const Direction dir = go_up ? Direction::kForward : Direction::kBackward;
      zeta.step(i, dir);
      update_residuals(r, i, dir, c);
      ++checks;
    }
    const ResidualVector fresh = residuals(zeta, c);
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (std::abs(fresh[k] - r[k]) > 1e-9) v.fail(tag + ": residual drift");
    }

    // Headroom extremality.
    const auto d = headroom(zeta, p);
    for (std::size_t i = 0; i < d.size(); ++i) {
      std::vector<Count> x(zeta.counts().begin(), zeta.counts().end());
      x[i] += d[i];
      if (!is_feasible(ExactDesign(x), p)) v.fail(tag + ": headroom step infeasible");
      x[i] += 1;
      if (is_feasible(ExactDesign(x), p)) v.fail(tag + ": headroom not maximal");
    }

    // Gamma extremality.
    const double g = gamma(zeta, d, p);
    auto lookahead = [&](double scale) {
      std::vector<double> w = zeta.weights();
      for (std::size_t i = 0; i < w.size(); ++i) w[i] += scale * static_cast<double>(d[i]);
      return w;
    };
    if (!is_feasible(lookahead(g), p)) v.fail(tag + ": gamma lookahead infeasible");
    bool any = false;
    for (Count di : d) any = any || di != 0;
    if (any) {
      const auto w = lookahead(g * (1 + 2e-9));
      bool violated = false;
      for (std::size_t k = 0; k < c.rows(); ++k) {
        double used = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) used += c.a(k, i) * w[i];
        violated = violated || used > c.limit(k);
      }
      if (!violated) v.fail(tag + ": gamma not maximal");
    } else if (g != 0.0) {
      v.fail(tag + ": gamma nonzero at zero headroom");
    }
  }
  if (v.pass) v.detail = "1000 problems, " + std::to_string(checks) + " walk steps";
  return v;
}

// 7. Monotonicity, homogeneity and concavity of the D-criterion.
Verdict criterion_properties() {
  Verdict v;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const DesignProblem p = testing::random_problem(rng);
    const DCriterion phi(p);
    const std::string tag = "case " + std::to_string(trial);
    const ExactDesign xi = testing::random_feasible(p, rng);
    std::vector<Count> bigger(xi.counts().begin(), xi.counts().end());
    for (Count& x : bigger) x += static_cast<Count>(rng() % 3);
    const double small_phi = phi.evaluate(xi);
    const double big_phi = phi.evaluate(ExactDesign(bigger));
    if (small_phi > big_phi + 1e-9) v.fail(tag + ": monotonicity");

    const std::vector<double> w = xi.weights();
    for (double c : {0.5, 2.0, 10.0}) {
      std::vector<double> scaled = w;
      for (double& x : scaled) x *= c;
      const double got = phi.evaluate(std::span<const double>(scaled));
      if (std::abs(got - c * small_phi) > 1e-9 * std::max(1e-300, c * small_phi)) {
        if (!(got == 0.0 && small_phi == 0.0)) v.fail(tag + ": homogeneity");
      }
    }

    std::vector<double> a(p.points());
    std::vector<double> b(p.points());
    std::vector<double> mid(p.points());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = 5 * unit(rng);
      b[i] = 5 * unit(rng);
      mid[i] = 0.5 * a[i] + 0.5 * b[i];
    }
    const double fa = phi.evaluate(std::span<const double>(a));
    const double fb = phi.evaluate(std::span<const double>(b));
    const double fm = phi.evaluate(std::span<const double>(mid));
    if (fm < 0.5 * fa + 0.5 * fb - 1e-9) v.fail(tag + ": concavity");
  }
  if (v.pass) v.detail = "1000 cases";
  return v;
}

// 8. mu_gradient against central differences for t = 0..144.
Verdict gradient() {
  Verdict v;
  const double th1 = 1.0;
  const double th2 = 0.2381;
  double worst = 0.0;
  for (int t = 0; t <= kHorizonHours; ++t) {
    const auto g = mu_gradient(t, th1, th2);
    const double h1 = 1e-6 * th1;
    const double h2 = 1e-6 * th2;
    const double fd[2] = {(mu(t, th1 + h1, th2) - mu(t, th1 - h1, th2)) / (2 * h1),
                          (mu(t, th1, th2 + h2) - mu(t, th1, th2 - h2)) / (2 * h2)};
    for (int j = 0; j < 2; ++j) {
      const double scale = std::max(std::abs(g[j]), std::abs(fd[j]));
      const double rel = scale == 0.0 ? 0.0 : std::abs(g[j] - fd[j]) / scale;
      worst = std::max(worst, rel);
      if (rel > 1e-6) v.fail("t=" + std::to_string(t) + " component " + std::to_string(j + 1));
    }
  }
  if (v.pass) v.detail = "145 hours, worst relative error " + fmt(worst);
  return v;
}

// 9. Fluoranthene designs are 0/1, within budget and keep the mandatory hours.
Verdict fluoranthene() {
  Verdict v;
  for (int s = 0; s < 168; ++s) {
    const std::string tag = "s=" + std::to_string(s);
    try {
      const DesignProblem p = fluoranthene_problem({.s = s});
      if (!is_feasible(p.base(), p)) v.fail(tag + ": base infeasible");
      const DCriterion phi(p);
      SearchConfig config;
      config.time_limit.reset();
      config.stall_limit = 2000;
      config.restarts = 2;
      config.seed = static_cast<std::uint64_t>(s);
      const RunResult r = run(p, phi, config);
      double cost = 0.0;
      for (std::size_t i = 0; i < p.points(); ++i) {
        if (r.best[i] != 0 && r.best[i] != 1) v.fail(tag + ": count above one");
        if (p.base()[i] != 0 && r.best[i] != 1) v.fail(tag + ": mandatory hour dropped");
        cost += p.constraints().a(0, i) * static_cast<double>(r.best[i]);
      }
      for (std::size_t i : {std::size_t{0}, std::size_t{72}, std::size_t{144}}) {
        if (r.best[i] != 1) v.fail(tag + ": mandatory hour missing");
      }
      if (cost > 13.0 + 1e-9) v.fail(tag + ": cost " + fmt(cost));
    } catch (const std::exception& e) {
      v.fail(tag + ": " + e.what());
    }
  }
  if (v.pass) v.detail = "168 starting hours";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"toy global optimum", toy_optimum},
      {"toy local-optima census", toy_local_optima},
      {"theoretical block optima", block_optima},
      {"Kirchhoff equivalence", kirchhoff},
      {"oracle agreement", oracle_agreement},
      {"constraint-geometry invariants", geometry},
      {"criterion properties", criterion_properties},
      {"gradient check", gradient},
      {"fluoranthene feasibility and shape", fluoranthene},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Verdict v;
    const auto t0 = Clock::now();
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    failures += v.pass ? 0 : 1;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << ": " << criteria[k].first
              << " (" << v.detail << "; " << fmt(seconds_since(t0)) << " s)" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
