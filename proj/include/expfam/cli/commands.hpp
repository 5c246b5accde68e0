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

#include <iosfwd>
#include <string>
#include <vector>

namespace expfam::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitParseError = 2,
  kExitValidationError = 3,
  kExitDimensionError = 4,
  kExitInfeasible = 5,
  kExitMaxIterations = 6,
};

// Runs `expfam <subcommand> [flags]`; args excludes the program name.
// Human-readable output goes to `out`, diagnostics to `err`; the
// machine-readable report is written to the --out path when given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace expfam::cli
