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

#ifndef RCDESIGN_ERRORS_HPP_
#define RCDESIGN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rcdesign {

// A caller broke a precondition (dimension mismatch, index order, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Problem data violates one of the modelling assumptions. `assumption()` is a
// short tag such as "C1", "C2", "C3", "base-feasible" or "base-not-maximal".
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string assumption, const std::string& what)
      : std::runtime_error("[" + assumption + "] " + what),
        assumption_(std::move(assumption)) {}

  const std::string& assumption() const noexcept { return assumption_; }

 private:
  std::string assumption_;
};

// Brute-force routine refused to run because its size bound was exceeded.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(double bound, double cap, const std::string& what)
      : std::runtime_error(what), bound_(bound), cap_(cap) {}

  double bound() const noexcept { return bound_; }
  double cap() const noexcept { return cap_; }

 private:
  double bound_;
  double cap_;
};

}  // namespace rcdesign

#endif  // RCDESIGN_ERRORS_HPP_
