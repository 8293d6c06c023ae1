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

#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "rcdesign/criteria.hpp"
#include "rcdesign/errors.hpp"
#include "rcdesign/heuristic.hpp"
#include "rcdesign/io.hpp"
#include "rcdesign/oracle.hpp"
#include "rcdesign/problems.hpp"

namespace rcdesign::cli {

namespace {

using nlohmann::json;

struct SearchFlags {
  double time_limit = 120.0;
  int back_max = 16;
  int n_round = 9;
  std::uint64_t seed = 0;
  int restarts = 10;
  std::int64_t stall_limit = 0;
  CLI::Option* stall_opt = nullptr;
  double target = 0.0;
  CLI::Option* target_opt = nullptr;
  std::string init = "random";
  int threads = 1;

  void attach(CLI::App& app) {
    app.add_option("--time-limit", time_limit, "Seconds per independent search")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app.add_option("--back-max", back_max, "Backward steps before an excursion fails")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--n-round", n_round, "Significant digits of the tabu attribute")
        ->capture_default_str()
        ->check(CLI::Range(1, 15));
    app.add_option("--seed", seed, "Random seed")->capture_default_str();
    app.add_option("--restarts", restarts, "Independent searches")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    stall_opt = app.add_option("--stall-limit", stall_limit,
                               "Stop a search after this many iterations without improvement")
                    ->check(CLI::NonNegativeNumber);
    target_opt = app.add_option("--target", target,
                                "Stop all searches once this criterion value is reached");
    app.add_option("--init", init, "Initial design: base, random or floor")
        ->capture_default_str()
        ->check(CLI::IsMember({"base", "random", "floor"}));
    app.add_option("--threads", threads, "Worker threads (0 = all cores)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
  }

  SearchConfig config(const ProblemFile& file) const {
    SearchConfig c;
    c.time_limit = time_limit;
    c.back_max = back_max;
    c.n_round = n_round;
    c.seed = seed;
    c.restarts = restarts;
    if (*stall_opt) c.stall_limit = stall_limit;
    if (*target_opt) c.target = target;
    c.threads = threads;
    if (init == "base") {
      c.init = InitStrategy::kBase;
    } else if (init == "floor") {
      c.init = InitStrategy::kFloorApproximate;
      if (!file.approximate) throw ParseError("--init floor needs \"approx\" weights in the problem file");
      c.approximate = file.approximate;
    } else {
      c.init = InitStrategy::kRandomWalk;
    }
    return c;
  }
};

void emit(const json& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << doc.dump(2) << '\n';
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  file << doc.dump(2) << '\n';
}

int solve(const std::string& path, const SearchFlags& flags, const std::string& trace_path,
          const std::string& out_path, std::ostream& out) {
  const ProblemFile file = parse_problem(std::filesystem::path(path));
  SearchConfig config = flags.config(file);
  config.record_trace = !trace_path.empty();
  const DCriterion criterion(file.problem);
  const RunResult result = run(file.problem, criterion, config);
  if (!trace_path.empty()) {
    std::ofstream trace(trace_path);
    if (!trace) throw std::runtime_error("cannot write " + trace_path);
    write_trace_csv(trace, result.trace);
  }
  emit(result_json(result, config, criterion), out_path, out);
  return kExitOk;
}

int verify(const std::string& path, double cap, bool compare, SearchFlags flags,
           const std::string& out_path, std::ostream& out) {
  const ProblemFile file = parse_problem(std::filesystem::path(path));
  const DCriterion criterion(file.problem);
  const EnumerationReport report = global_optimum(file.problem, criterion, cap);
  json doc = report_json(report);
  doc["enumeration_bound"] = enumeration_bound(file.problem);
  if (compare) {
    const SearchConfig config = flags.config(file);
    const RunResult result = run(file.problem, criterion, config);
    json cmp;
    cmp["heuristic"] = result_json(result, config, criterion);
    const double oracle = report.global_optima.empty() ? 0.0 : report.global_optima.front().phi;
    cmp["oracle_phi"] = oracle;
    cmp["efficiency"] = oracle > 0.0 ? json(result.phi / oracle) : json(nullptr);
    doc["compare"] = std::move(cmp);
  }
  emit(doc, out_path, out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Efficient exact experimental designs under resource constraints"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Run the tabu excursion heuristic");
  std::string solve_file;
  std::string trace_path;
  std::string solve_out;
  SearchFlags solve_flags;
  solve_cmd->add_option("problem", solve_file, "Problem file")->required()->check(CLI::ExistingFile);
  solve_flags.attach(*solve_cmd);
  solve_cmd->add_option("--trace", trace_path, "Write the search trace as CSV");
  solve_cmd->add_option("--out", solve_out, "Write the result here instead of stdout");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Enumerate all feasible designs (small problems)");
  std::string verify_file;
  std::string verify_out;
  double cap = kDefaultEnumerationCap;
  bool compare = false;
  SearchFlags verify_flags;
  verify_flags.time_limit = 60.0;
  verify_flags.restarts = 5;
  verify_cmd->add_option("problem", verify_file, "Problem file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--cap", cap, "Refuse enumeration beyond this many lattice nodes")
      ->capture_default_str();
  verify_cmd->add_flag("--compare", compare, "Also run the heuristic and report its efficiency");
  verify_flags.attach(*verify_cmd);
  verify_cmd->add_option("--out", verify_out, "Write the report here instead of stdout");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "Emit a benchmark problem file");
  std::string family;
  int v = 0;
  double blocks = 0.0;
  std::vector<double> treatment_limits;
  double budget = 0.0;
  int start_hour = 0;
  FluorantheneSpec fl;
  bool explicit_form = false;
  std::string gen_out;
  gen_cmd->add_option("family", family, "block, quadratic or fluoranthene")
      ->required()
      ->check(CLI::IsMember({"block", "quadratic", "fluoranthene"}));
  auto* v_opt = gen_cmd->add_option("--v", v, "Treatments (block)");
  auto* n_opt = gen_cmd->add_option("--N", blocks, "Block limit (block)");
  auto* tl_opt = gen_cmd->add_option("--treatment-limits", treatment_limits,
                                     "Per-treatment replication limits (block)");
  auto* budget_opt = gen_cmd->add_option("--budget", budget, "Cost limit (quadratic, fluoranthene)");
  auto* s_opt = gen_cmd->add_option("--s", start_hour, "Starting hour of week (fluoranthene)");
  auto* th1_opt = gen_cmd->add_option("--theta1", fl.theta1, "Nominal uptake rate (fluoranthene)");
  auto* th2_opt = gen_cmd->add_option("--theta2", fl.theta2, "Nominal elimination rate (fluoranthene)");
  gen_cmd->add_flag("--explicit", explicit_form, "Expand into explicit F, A, b, xi0 arrays");
  gen_cmd->add_option("--out", gen_out, "Write the file here instead of stdout");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*solve_cmd) return solve(solve_file, solve_flags, trace_path, solve_out, out);
    if (*verify_cmd) return verify(verify_file, cap, compare, verify_flags, verify_out, out);

    json doc;
    doc["family"] = family;
    if (family == "block") {
      if (!*v_opt) throw ParseError("gen block needs --v");
      doc["v"] = v;
      if (*n_opt) doc["N"] = blocks;
      if (*tl_opt) doc["treatment_limits"] = treatment_limits;
    } else if (family == "quadratic") {
      if (!*budget_opt) throw ParseError("gen quadratic needs --budget");
      doc["budget"] = budget;
    } else {
      if (!*s_opt) throw ParseError("gen fluoranthene needs --s");
      doc["s"] = start_hour;
      if (*budget_opt) doc["budget"] = budget;
      if (*th1_opt) doc["theta1"] = fl.theta1;
      if (*th2_opt) doc["theta2"] = fl.theta2;
    }
    // Building the problem validates the parameters.
    const ProblemFile file = parse_problem(doc);
    emit(explicit_form ? emit_problem(file.problem) : doc, gen_out, out);
    return kExitOk;
  } catch (const CapExceeded& e) {
    err << "refused: " << e.what() << '\n';
    return kExitCapRefused;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ValidationError& e) {
    err << "invalid problem: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ContractError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace rcdesign::cli
