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

#include "expfam/divergences.hpp"
#include "expfam/oracle.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace expfam;
using namespace expfam::testing;

TEST_CASE("kl_direct") {
  const Distribution q(vec({0.3, 0.7}));
  CHECK(oracle::kl_direct(q, q) == 0.0);
  CHECK(oracle::kl_direct(Distribution::point_mass(2, 0), Distribution::uniform(2)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(oracle::kl_direct(Distribution::uniform(2), Distribution::point_mass(2, 1)) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("kl_direct agrees with kl") {
  oracle::Rng rng(51);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 40);
    const Distribution q = oracle::random_distribution(rng, n);
    const Distribution p = oracle::random_distribution(rng, n);
    CHECK(std::abs(oracle::kl_direct(q, p) - kl(q, p)) <= 1e-12);
  }
}

TEST_CASE("grad_check") {
  const ExponentialFamily two = ExponentialFamily::categorical(2);
  CHECK(oracle::grad_check(two, NaturalParameter::zero(2)) <= 1e-8);
  CHECK(moment_map(two, NaturalParameter::zero(2))[0] == 0.5);

  const ExponentialFamily line = scalar_family(vec({0.5, 0.5}), vec({0.0, 1.0}));
  CHECK(moment_map(line, param({0.0}))[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(oracle::grad_check(line, param({0.0})) <= 1e-8);

  oracle::Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 50);
    const Index d = 1 + static_cast<Index>(rng() % 8);
    CHECK(oracle::grad_check(oracle::random_family(rng, n, d), oracle::random_parameter(rng, d, 3.0)) <=
          1e-6);
  }
}

TEST_CASE("random_simplex") {
  const auto ones = oracle::random_simplex(1, 5, 3);
  REQUIRE(ones.size() == 5);
  for (const Distribution& q : ones) {
    CHECK(q[0] == 1.0);
  }
  const auto a = oracle::random_simplex(7, 20, 99);
  const auto b = oracle::random_simplex(7, 20, 99);
  const auto c = oracle::random_simplex(7, 20, 100);
  REQUIRE(a.size() == 20);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].probs() == b[i].probs());
    CHECK(std::abs(a[i].probs().sum() - 1.0) <= 1e-12);
    CHECK(a[i].probs().minCoeff() >= 0.0);
    differs = differs || a[i].probs() != c[i].probs();
  }
  CHECK(differs);
}

TEST_CASE("mean_preserving_peers") {
  oracle::Rng rng(53);
  const ExponentialFamily fam = oracle::random_family(rng, 20, 3);
  const NaturalParameter lam = oracle::random_parameter(rng, 3, 2.0);
  CHECK(oracle::mean_preserving_peers(fam, lam, 0, 1).empty());

  const MomentVector mu = moment_map(fam, lam);
  const Distribution p = member(fam, lam);
  const auto peers = oracle::mean_preserving_peers(fam, lam, 100, 7);
  REQUIRE(peers.size() == 100);
  for (const Distribution& q : peers) {
    CHECK(max_abs_diff(moment_of(fam, q).values(), mu.values()) <= 1e-9);
    CHECK(q.probs().minCoeff() >= 1e-12);
    CHECK(max_abs_diff(q.probs(), p.probs()) > 0.0);
  }
  const auto again = oracle::mean_preserving_peers(fam, lam, 100, 7);
  CHECK(again[42].probs() == peers[42].probs());

  const ExponentialFamily cat = ExponentialFamily::categorical(5);
  const NaturalParameter lc = oracle::random_parameter(rng, 5, 2.0);
  const auto pinned = oracle::mean_preserving_peers(cat, lc, 10, 8);
  REQUIRE(pinned.size() == 1);
  CHECK(max_abs_diff(pinned[0].probs(), member(cat, lc).probs()) == 0.0);
}

TEST_CASE("generators") {
  oracle::Rng rng(54);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 200);
    const Index d = 1 + static_cast<Index>(rng() % 10);
    const ExponentialFamily fam = oracle::random_family(rng, n, d);
    CHECK(fam.support_size() == n);
    CHECK(fam.dim() == d);
    CHECK(fam.base().minCoeff() > 0.0);
    CHECK(oracle::random_parameter(rng, d, 3.0).values().lpNorm<Eigen::Infinity>() <= 3.0);
  }
  CHECK(oracle::instance_seed(1, "elbo", 0) == oracle::instance_seed(1, "elbo", 0));
  CHECK(oracle::instance_seed(1, "elbo", 0) != oracle::instance_seed(1, "elbo", 1));
  CHECK(oracle::instance_seed(1, "elbo", 0) != oracle::instance_seed(1, "bregman", 0));
  CHECK(oracle::instance_seed(1, "elbo", 0) != oracle::instance_seed(2, "elbo", 0));
}

TEST_CASE("verification suite") {
  oracle::Rng rng(55);
  const ExponentialFamily fam = oracle::random_family(rng, 12, 2);
  const oracle::VerificationSuite suite = oracle::VerificationSuite::standard(17, 5);
  CHECK(suite.instance_counts.size() == oracle::VerificationSuite::check_names().size());
  const auto outcomes = oracle::run_suite(fam, suite);
  CHECK(outcomes.size() == 5 * suite.instance_counts.size());
  for (std::size_t i = 1; i < outcomes.size(); ++i) {
    const auto& a = outcomes[i - 1];
    const auto& b = outcomes[i];
    CHECK((a.check < b.check || (a.check == b.check && a.instance < b.instance)));
  }
  for (const auto& o : outcomes) {
    CHECK_MESSAGE(o.report.pass, o.check << " #" << o.instance);
    const auto again = oracle::run_check(fam, o.check, o.instance, o.instance_seed,
                                         suite.tolerances.at(o.check));
    const bool same = again.report.residual == o.report.residual ||
                      (std::isnan(again.report.residual) && std::isnan(o.report.residual));
    CHECK(same);
  }
}
