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

// Problem files, run results and traces. The grammar is documented in
// docs/file-format.md.

#ifndef RCDESIGN_IO_HPP_
#define RCDESIGN_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "rcdesign/design.hpp"
#include "rcdesign/heuristic.hpp"
#include "rcdesign/oracle.hpp"

namespace rcdesign {

// Malformed problem file: unreadable, not JSON, wrong shapes or types.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemFile {
  DesignProblem problem;
  // Optional weights for floor initialisation ("approx").
  std::optional<ApproximateDesign> approximate;
};

// Throws ParseError for malformed input and ValidationError (from the design
// core) when the data violates a modelling assumption.
ProblemFile parse_problem(const nlohmann::json& doc);
ProblemFile parse_problem(const std::filesystem::path& path);

// Explicit form (F, A, b, xi0, labels, approx).
nlohmann::json emit_problem(const DesignProblem& problem,
                            const std::optional<ApproximateDesign>& approximate = {});

// [[index, count], ...] with one-based indices and zero counts omitted.
nlohmann::json sparse_design(const ExactDesign& design);
ExactDesign dense_design(const nlohmann::json& sparse, std::size_t n);

nlohmann::json config_json(const SearchConfig& config);
nlohmann::json result_json(const RunResult& result, const SearchConfig& config,
                           const Criterion& criterion);
nlohmann::json report_json(const EnumerationReport& report);

// One event per line: step_kind,phi,elapsed_s,restart,iteration,mantissa,exponent
void write_trace_csv(std::ostream& out, const SearchTrace& trace);

}  // namespace rcdesign

#endif  // RCDESIGN_IO_HPP_
