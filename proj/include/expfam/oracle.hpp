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

// Brute-force verifiers. Nothing here shares an evaluation path with the
// closed forms it is used to check: KL is summed naively in probability
// space, gradients come from finite differences, and competitors for the
// optimality certificates are sampled rather than derived.

#include "expfam/divergences.hpp"
#include "expfam/family.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace expfam::oracle {

// sum_y q(y) log(q(y) / p(y)) over q(y) > 0; +inf if some such p(y) is 0.
double kl_direct(const Distribution& q, const Distribution& p);

// Max over coordinates of |fd_j - mu_j| / max(1, |mu_j|), where fd_j is the
// central difference of A with step 1e-5 * (1 + |lambda_j|).
double grad_check(const ExponentialFamily& family, const NaturalParameter& lambda);

// Normalized i.i.d. standard-exponential draws: uniform on the simplex.
std::vector<Distribution> random_simplex(Index n, int count, std::uint64_t seed);

// Distributions q != p_{lambda*} with mu_q = mu_{lambda*}, built by moving
// p_{lambda*} along the null space of [phi^T; 1^T]. When that null space is
// trivial, the moment slice is the single point p_{lambda*} and that is all
// that is returned (for count >= 1).
std::vector<Distribution> mean_preserving_peers(const ExponentialFamily& family,
                                                const NaturalParameter& lambda_star, int count,
                                                std::uint64_t seed);

// Random instance generators shared by the verification suite and tests.
using Rng = std::mt19937_64;

Distribution random_distribution(Rng& rng, Index n);
NaturalParameter random_parameter(Rng& rng, Index d, double bound);
// Exponential-spacing base and standard-normal statistic.
ExponentialFamily random_family(Rng& rng, Index n, Index d);

// Stable 64-bit mix used to derive per-instance seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);
std::uint64_t instance_seed(std::uint64_t suite_seed, const std::string& check, int instance);

struct VerificationSuite {
  std::uint64_t seed = 20260101;
  std::map<std::string, int> instance_counts;
  std::map<std::string, Tolerance> tolerances;

  // Every known check with `count` instances and its default tolerance.
  static VerificationSuite standard(std::uint64_t seed, int count);
  static const std::vector<std::string>& check_names();
};

struct CheckOutcome {
  std::string check;
  int instance = 0;
  std::uint64_t instance_seed = 0;
  IdentityReport report;
  // Inputs that reproduce the instance (q, lambda1, ...).
  std::vector<std::pair<std::string, Eigen::VectorXd>> inputs;
};

// Runs every check in the suite on `family`. Results are ordered by check
// name, then instance index, and depend only on (family, suite).
std::vector<CheckOutcome> run_suite(const ExponentialFamily& family,
                                    const VerificationSuite& suite);

// One instance of one check, for reproduction from an echoed seed.
CheckOutcome run_check(const ExponentialFamily& family, const std::string& check, int instance,
                       std::uint64_t instance_seed, const Tolerance& tolerance);

}  // namespace expfam::oracle
