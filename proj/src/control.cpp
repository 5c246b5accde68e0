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

#include "expfam/control.hpp"

#include "expfam/divergences.hpp"
#include "expfam/errors.hpp"

#include <cmath>
#include <sstream>

namespace expfam {
namespace {

double checked_beta(double beta) {
  if (!std::isfinite(beta) || !(beta > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "temperature beta must be positive and finite, got " << beta;
    throw ValidationError(msg.str());
  }
  return beta;
}

NaturalParameter inverse_temperature(const RewardProblem& problem) {
  return NaturalParameter(Eigen::VectorXd::Constant(1, 1.0 / problem.beta()));
}

}  // namespace

RewardProblem::RewardProblem(std::vector<std::string> labels, Eigen::VectorXd base,
                             Eigen::VectorXd reward, double beta)
    : family_(std::move(labels), std::move(base), Eigen::MatrixXd(reward)),
      reward_(std::move(reward)),
      beta_(checked_beta(beta)) {}

RewardProblem RewardProblem::with_beta(double beta) const {
  RewardProblem copy = *this;
  copy.beta_ = checked_beta(beta);
  return copy;
}

Distribution boltzmann(const RewardProblem& problem) {
  return member(problem.family(), inverse_temperature(problem));
}

double regularized_value(const RewardProblem& problem) {
  return problem.beta() * log_partition(problem.family(), inverse_temperature(problem));
}

double objective_eval(const RewardProblem& problem, const Distribution& q) {
  if (q.size() != problem.family().support_size()) {
    throw ContractViolation("distribution does not match the reward support");
  }
  return q.probs().dot(problem.reward()) -
         problem.beta() * kl(q, problem.family().base_distribution());
}

std::vector<SweepPoint> beta_sweep(const RewardProblem& problem, std::span<const double> betas) {
  std::vector<SweepPoint> points;
  points.reserve(betas.size());
  for (double beta : betas) {
    const RewardProblem at = problem.with_beta(beta);
    points.push_back({beta, regularized_value(at), boltzmann(at)});
  }
  return points;
}

}  // namespace expfam
