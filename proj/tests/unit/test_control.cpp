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
#include "expfam/logspace.hpp"
#include "expfam/oracle.hpp"
#include "expfam/projection.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace expfam;
using namespace expfam::testing;

namespace {

RewardProblem make(const Eigen::VectorXd& base, const Eigen::VectorXd& reward, double beta) {
  return RewardProblem(labels(base.size()), base, reward, beta);
}

}  // namespace

TEST_CASE("two-point Boltzmann") {
  const RewardProblem p = make(vec({0.5, 0.5}), vec({1.0, 0.0}), 1.0);
  const Distribution q = boltzmann(p);
  CHECK(q[0] == doctest::Approx(0.7310585786300049).epsilon(1e-15));
  CHECK(q[1] == doctest::Approx(0.2689414213699951).epsilon(1e-15));
  CHECK(regularized_value(p) == doctest::Approx(std::log((std::exp(1.0) + 1.0) / 2.0)).epsilon(1e-15));
}

TEST_CASE("constant reward") {
  const Eigen::VectorXd base = vec({0.1, 0.2, 0.3, 0.4});
  const RewardProblem p = make(base, vec({2.5, 2.5, 2.5, 2.5}), 0.3);
  CHECK(max_abs_diff(boltzmann(p).probs(), base) <= 1e-15);
  CHECK(regularized_value(p) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(objective_eval(p, Distribution(base)) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("uniform base reduces to softmax and LSE") {
  oracle::Rng rng(41);
  std::uniform_real_distribution<double> unit(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Index k = 2 + static_cast<Index>(rng() % 15);
    Eigen::VectorXd r(k);
    for (Index i = 0; i < k; ++i) {
      r[i] = unit(rng);
    }
    const double beta = 0.05 + std::abs(unit(rng));
    const RewardProblem p = make(Distribution::uniform(k).probs(), r, beta);
    CHECK(max_abs_diff(boltzmann(p).probs(), softmax(r / beta).probs()) <= 1e-12);
    const double closed = beta * lse(r / beta) - beta * std::log(static_cast<double>(k));
    CHECK(std::abs(regularized_value(p) - closed) <= 1e-12 * (1 + std::abs(closed)));
    const Distribution q = oracle::random_distribution(rng, k);
    const double maxent = q.probs().dot(r) + beta * entropy(q) - beta * std::log(static_cast<double>(k));
    CHECK(std::abs(objective_eval(p, q) - maxent) <= 1e-12);
  }
}

TEST_CASE("optimality, uniqueness and shift covariance") {
  oracle::Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = 2 + static_cast<Index>(rng() % 10);
    const ExponentialFamily shape = oracle::random_family(rng, n, 1);
    const Eigen::VectorXd r = shape.statistic().col(0);
    const double beta = 0.2 + 0.3 * trial;
    const RewardProblem p = make(shape.base(), r, beta);
    const Distribution star = boltzmann(p);
    const double value = regularized_value(p);
    CHECK(std::abs(objective_eval(p, star) - value) <= 1e-12 * (1 + std::abs(value)) * 10);
    for (const Distribution& q : oracle::random_simplex(n, 1000, 500 + trial)) {
      const double obj = objective_eval(p, q);
      CHECK(obj <= value + 1e-10);
      if (obj >= value - 1e-12) {
        CHECK(max_abs_diff(q.probs(), star.probs()) <= 1e-5);
      }
    }

    const RewardProblem shifted = make(shape.base(), (r.array() + 1.75).matrix(), beta);
    CHECK(max_abs_diff(boltzmann(shifted).probs(), star.probs()) <= 1e-12);
    CHECK(std::abs(regularized_value(shifted) - value - 1.75) <= 1e-12 * 10);

    CHECK(max_abs_diff(star.probs(), member(p.family(), param({1.0 / beta})).probs()) <= 1e-12);
  }
}

TEST_CASE("extreme reward over temperature stays finite") {
  const RewardProblem p = make(vec({0.5, 0.5}), vec({800.0, 0.0}), 1e-3);
  const Distribution q = boltzmann(p);
  CHECK(q[0] == doctest::Approx(1.0));
  CHECK(std::isfinite(regularized_value(p)));
  CHECK(regularized_value(p) == doctest::Approx(800.0 - 1e-3 * std::log(2.0)));
}

TEST_CASE("beta sweep") {
  const Eigen::VectorXd base = vec({0.4, 0.3, 0.2, 0.1});
  const Eigen::VectorXd r = vec({0.3, -1.0, 2.0, 0.5});
  const RewardProblem p = make(base, r, 1.0);

  const std::vector<double> one{0.7};
  const auto single = beta_sweep(p, one);
  REQUIRE(single.size() == 1);
  CHECK(single[0].beta == 0.7);
  CHECK(single[0].value == regularized_value(p.with_beta(0.7)));
  CHECK(max_abs_diff(single[0].optimum.probs(), boltzmann(p.with_beta(0.7)).probs()) == 0.0);

  const std::vector<double> betas{1e3, 1.0, 1e-2};
  const auto sweep = beta_sweep(p, betas);
  REQUIRE(sweep.size() == 3);
  CHECK(0.5 * (sweep[0].optimum.probs() - base).lpNorm<1>() <= 1e-3);
  CHECK(sweep[2].optimum[2] > 0.99);
  Index top = 0;
  sweep[2].optimum.probs().maxCoeff(&top);
  CHECK(top == 2);

  const std::vector<double> bad{1.0, -0.5};
  CHECK_THROWS_AS(beta_sweep(p, bad), ValidationError);
}

TEST_CASE("problem validation") {
  CHECK_THROWS_AS(make(vec({0.5, 0.5}), vec({1.0, 0.0}), 0.0), ValidationError);
  CHECK_THROWS_AS(make(vec({0.5, 0.5}), vec({1.0, 0.0}), -1.0), ValidationError);
  CHECK_THROWS_AS(make(vec({0.5, 0.5}), vec({1.0, NAN}), 1.0), ValidationError);
  CHECK_THROWS_AS(make(vec({0.5, 0.5}), vec({1.0, 0.0, 2.0}), 1.0), ContractViolation);
  CHECK_THROWS_AS(make(vec({0.5, 0.6}), vec({1.0, 0.0}), 1.0), ValidationError);
  const RewardProblem p = make(vec({0.5, 0.5}), vec({1.0, 0.0}), 1.0);
  CHECK_THROWS_AS(objective_eval(p, Distribution::uniform(3)), ContractViolation);
  CHECK_THROWS_AS(p.with_beta(std::nan("")), ValidationError);
}
