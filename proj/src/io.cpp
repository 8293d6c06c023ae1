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

#include "rcdesign/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "rcdesign/problems.hpp"

namespace rcdesign {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("missing key \"") + key + "\"");
  return doc.at(key);
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  return v.get<double>();
}

Count as_count(const json& v, const std::string& where) {
  if (v.is_number_integer()) return v.get<Count>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<Count>(d);
  }
  throw ParseError(where + ": expected an integer");
}

int as_int(const json& v, const std::string& where) {
  return static_cast<int>(as_count(v, where));
}

std::vector<double> as_vector(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::vector<double>> as_matrix(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ParseError(where + ": expected a nonempty array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < v.size(); ++r) {
    rows.push_back(as_vector(v[r], where + "[" + std::to_string(r) + "]"));
    if (rows.back().size() != rows.front().size()) {
      throw ParseError(where + ": rows must all have the same length");
    }
  }
  if (rows.front().empty()) throw ParseError(where + ": rows must be nonempty");
  return rows;
}

DesignProblem parse_explicit(const json& doc) {
  const auto f_rows = as_matrix(require(doc, "F"), "F");
  const std::size_t m = f_rows.size();
  const std::size_t n = f_rows.front().size();
  Eigen::MatrixXd f(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      f(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = f_rows[r][c];
    }
  }

  const auto a_rows = as_matrix(require(doc, "A"), "A");
  if (a_rows.front().size() != n) {
    throw ParseError("A must have as many columns as F (" + std::to_string(n) + ")");
  }
  std::vector<double> b = as_vector(require(doc, "b"), "b");
  if (b.size() != a_rows.size()) throw ParseError("b must have one entry per row of A");

  std::vector<Count> xi0(n, 0);
  if (doc.contains("xi0")) {
    const json& base = doc.at("xi0");
    if (!base.is_array() || base.size() != n) {
      throw ParseError("xi0 must be an array of length " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      xi0[i] = as_count(base[i], "xi0[" + std::to_string(i) + "]");
      if (xi0[i] < 0) throw ParseError("xi0 entries must be nonnegative");
    }
  }

  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const json& l = doc.at("labels");
    if (!l.is_array() || l.size() != n) {
      throw ParseError("labels must be an array of length " + std::to_string(n));
    }
    for (const auto& s : l) {
      if (!s.is_string()) throw ParseError("labels must be strings");
      labels.push_back(s.get<std::string>());
    }
  }

  ResourceConstraints constraints(a_rows, std::move(b));
  return DesignProblem(std::move(f), std::move(constraints), ExactDesign(std::move(xi0)),
                       std::move(labels));
}

DesignProblem parse_family(const json& doc, const std::string& family) {
  if (family == "block") {
    BlockProblemSpec spec;
    spec.v = as_int(require(doc, "v"), "v");
    if (doc.contains("N")) spec.block_limit = as_number(doc.at("N"), "N");
    if (doc.contains("treatment_limits")) {
      spec.treatment_limits = as_vector(doc.at("treatment_limits"), "treatment_limits");
    }
    return block_problem(spec);
  }
  if (family == "quadratic") {
    return quadratic_problem(as_number(require(doc, "budget"), "budget"));
  }
  if (family == "fluoranthene") {
    FluorantheneSpec spec;
    spec.s = as_int(require(doc, "s"), "s");
    if (doc.contains("budget")) spec.budget = as_number(doc.at("budget"), "budget");
    if (doc.contains("theta2")) spec.theta2 = as_number(doc.at("theta2"), "theta2");
    if (doc.contains("theta1")) spec.theta1 = as_number(doc.at("theta1"), "theta1");
    return fluoranthene_problem(spec);
  }
  throw ParseError("unknown family \"" + family + "\" (expected block, quadratic or fluoranthene)");
}

}  // namespace

ProblemFile parse_problem(const json& doc) {
  if (!doc.is_object()) throw ParseError("problem file must be a JSON object");
  std::string family = "explicit";
  if (doc.contains("family")) {
    if (!doc.at("family").is_string()) throw ParseError("family must be a string");
    family = doc.at("family").get<std::string>();
  }
  try {
    DesignProblem problem = family == "explicit" ? parse_explicit(doc) : parse_family(doc, family);
    std::optional<ApproximateDesign> approx;
    if (doc.contains("approx")) {
      std::vector<double> w = as_vector(doc.at("approx"), "approx");
      if (w.size() != problem.points()) {
        throw ParseError("approx must have one weight per design point");
      }
      approx = ApproximateDesign(std::move(w));
    }
    return {std::move(problem), std::move(approx)};
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

ProblemFile parse_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return parse_problem(doc);
}

json emit_problem(const DesignProblem& problem,
                  const std::optional<ApproximateDesign>& approximate) {
  json doc;
  doc["family"] = "explicit";
  const auto& f = problem.regressors();
  json frows = json::array();
  for (Eigen::Index r = 0; r < f.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < f.cols(); ++c) row.push_back(f(r, c));
    frows.push_back(std::move(row));
  }
  doc["F"] = std::move(frows);

  const auto& c = problem.constraints();
  json arows = json::array();
  for (std::size_t r = 0; r < c.rows(); ++r) {
    const auto row = c.row(r);
    arows.push_back(json(std::vector<double>(row.begin(), row.end())));
  }
  doc["A"] = std::move(arows);
  doc["b"] = std::vector<double>(c.limits().begin(), c.limits().end());
  doc["xi0"] = std::vector<Count>(problem.base().counts().begin(), problem.base().counts().end());
  if (!problem.labels().empty()) doc["labels"] = problem.labels();
  if (approximate) {
    doc["approx"] =
        std::vector<double>(approximate->weights().begin(), approximate->weights().end());
  }
  return doc;
}

json sparse_design(const ExactDesign& design) {
  json out = json::array();
  for (std::size_t i = 0; i < design.size(); ++i) {
    if (design[i] != 0) out.push_back(json::array({i + 1, design[i]}));
  }
  return out;
}

ExactDesign dense_design(const json& sparse, std::size_t n) {
  if (!sparse.is_array()) throw ParseError("design must be an array of [index, count] pairs");
  std::vector<Count> counts(n, 0);
  for (const auto& pair : sparse) {
    if (!pair.is_array() || pair.size() != 2) {
      throw ParseError("design entries must be [index, count] pairs");
    }
    const Count idx = as_count(pair[0], "design index");
    if (idx < 1 || static_cast<std::size_t>(idx) > n) throw ParseError("design index out of range");
    counts[static_cast<std::size_t>(idx - 1)] = as_count(pair[1], "design count");
  }
  return ExactDesign(std::move(counts));
}

json config_json(const SearchConfig& config) {
  json c;
  c["time_limit"] = config.time_limit ? json(*config.time_limit) : json(nullptr);
  c["stall_limit"] = config.stall_limit ? json(*config.stall_limit) : json(nullptr);
  c["back_max"] = config.back_max;
  c["n_round"] = config.n_round;
  c["seed"] = config.seed;
  c["restarts"] = config.restarts;
  c["threads"] = config.threads;
  switch (config.init) {
    case InitStrategy::kBase: c["init"] = "base"; break;
    case InitStrategy::kRandomWalk: c["init"] = "random"; break;
    case InitStrategy::kFloorApproximate: c["init"] = "floor"; break;
  }
  c["target"] = config.target ? json(*config.target) : json(nullptr);
  return c;
}

json result_json(const RunResult& result, const SearchConfig& config,
                 const Criterion& criterion) {
  json out;
  out["criterion"] = std::string(criterion.name());
  out["points"] = result.best.size();
  out["design"] = sparse_design(result.best);
  out["trials"] = result.best.total();
  out["phi"] = result.phi;
  out["attribute"] = {{"mantissa", result.attribute.mantissa},
                      {"exponent", result.attribute.exponent}};
  out["elapsed_s"] = result.elapsed;
  out["iterations"] = result.iterations;
  out["restarts"] = result.restarts;
  out["best_restart"] = result.best_restart;
  out["seed"] = config.seed;
  out["config"] = config_json(config);
  return out;
}

json report_json(const EnumerationReport& report) {
  auto scored = [](const std::vector<ScoredDesign>& list) {
    json arr = json::array();
    for (const auto& s : list) arr.push_back({{"design", sparse_design(s.design)}, {"phi", s.phi}});
    return arr;
  };
  json out;
  out["feasible_count"] = report.feasible_count;
  out["maximal_count"] = report.maximal_designs.size();
  out["global_optima"] = scored(report.global_optima);
  out["local_optima"] = scored(report.local_optima);
  out["local_optima_count"] = report.local_optima.size();
  return out;
}

void write_trace_csv(std::ostream& out, const SearchTrace& trace) {
  out << "step_kind,phi,elapsed_s,restart,iteration,mantissa,exponent\n";
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (const auto& e : trace.events) {
    out << to_string(e.kind) << ',' << e.phi << ',' << e.elapsed << ',' << e.restart << ','
        << e.iteration << ',' << e.attribute.mantissa << ',' << e.attribute.exponent << '\n';
  }
  out.precision(old_precision);
}

}  // namespace rcdesign
