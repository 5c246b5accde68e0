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

#include "expfam/family.hpp"

#include <span>
#include <string>
#include <vector>

namespace expfam {

/// KL-regularized reward maximization: maximize E_q[r] - beta KL(q || a).
///
/// Internally this is the one-dimensional family with phi = r evaluated at
/// natural parameter 1 / beta.
class RewardProblem {
 public:
  RewardProblem(std::vector<std::string> labels, Eigen::VectorXd base, Eigen::VectorXd reward,
                double beta);

  const ExponentialFamily& family() const { return family_; }
  const Eigen::VectorXd& reward() const { return reward_; }
  const Eigen::VectorXd& base() const { return family_.base(); }
  const std::vector<std::string>& labels() const { return family_.labels(); }
  double beta() const { return beta_; }

  RewardProblem with_beta(double beta) const;

 private:
  ExponentialFamily family_;
  Eigen::VectorXd reward_;
  double beta_;
};

// q*(y) proportional to a(y) exp(r(y) / beta).
Distribution boltzmann(const RewardProblem& problem);

// beta * A(1 / beta), the optimal regularized objective.
double regularized_value(const RewardProblem& problem);

// E_q[r] - beta KL(q || a).
double objective_eval(const RewardProblem& problem, const Distribution& q);

struct SweepPoint {
  double beta;
  double value;
  Distribution optimum;
};

std::vector<SweepPoint> beta_sweep(const RewardProblem& problem, std::span<const double> betas);

}  // namespace expfam
