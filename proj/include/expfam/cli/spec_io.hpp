// Copyright 2026 The expfam Authors
//
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

#pragma once

#include "expfam/control.hpp"
#include "expfam/family.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace expfam::cli {

inline constexpr int kFormatVersion = 1;

// Malformed document: bad JSON syntax, missing or mistyped fields, ragged
// statistic rows, inconsistent lengths. The message names the line (for
// syntax errors) or the field.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Family specification document:
///
///   {"format_version": 1, "labels": [...], "base": [...],
///    "statistic": [[phi_1(y)...phi_d(y)], ...]}
ExponentialFamily parse_family(const std::string& text);
std::string serialize_family(const ExponentialFamily& family);

/// Reward problem document: a family document with `reward` (one real per
/// label) in place of `statistic`, plus an optional positive `beta`.
struct ProblemSpec {
  std::vector<std::string> labels;
  Eigen::VectorXd base;
  Eigen::VectorXd reward;
  std::optional<double> beta;
};
ProblemSpec parse_problem(const std::string& text);

std::string read_file(const std::string& path);

// "sha256:<hex>" content digest.
std::string content_digest(const std::string& bytes);

}  // namespace expfam::cli
