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

#include "expfam/oracle.hpp"

#include "expfam/errors.hpp"
#include "expfam/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace expfam::oracle {

double kl_direct(const Distribution& q, const Distribution& p) {
  if (q.size() != p.size()) {
    throw ContractViolation("KL operands live on supports of different sizes");
  }
  double total = 0.0;
  for (Index y = 0; y < q.size(); ++y) {
    const double qy = q[y];
    if (qy > 0.0) {
      if (p[y] == 0.0) {
        return std::numeric_limits<double>::infinity();
      }
      total += qy * std::log(qy / p[y]);
    }
  }
  return total;
}

double grad_check(const ExponentialFamily& family, const NaturalParameter& lambda) {
  const MomentVector mu = moment_map(family, lambda);
  double worst = 0.0;
  for (Index j = 0; j < lambda.dim(); ++j) {
    const double h = 1e-5 * (1.0 + std::abs(lambda[j]));
    Eigen::VectorXd up = lambda.values();
    Eigen::VectorXd down = lambda.values();
    up[j] += h;
    down[j] -= h;
    const double fd = (log_partition(family, NaturalParameter(up)) -
                       log_partition(family, NaturalParameter(down))) /
                      (up[j] - down[j]);
    worst = std::max(worst, std::abs(fd - mu[j]) / std::max(1.0, std::abs(mu[j])));
  }
  return worst;
}

Distribution random_distribution(Rng& rng, Index n) {
  std::exponential_distribution<double> spacing(1.0);
  Eigen::VectorXd w(n);
  for (Index y = 0; y < n; ++y) {
    w[y] = spacing(rng);
  }
  const double total = w.sum();
  if (!(total > 0.0)) {
    return Distribution::uniform(n);
  }
  w /= total;
  return Distribution(std::move(w));
}

std::vector<Distribution> random_simplex(Index n, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Distribution> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    out.push_back(random_distribution(rng, n));
  }
  return out;
}

NaturalParameter random_parameter(Rng& rng, Index d, double bound) {
  std::uniform_real_distribution<double> coord(-bound, bound);
  Eigen::VectorXd v(d);
  for (Index j = 0; j < d; ++j) {
    v[j] = coord(rng);
  }
  return NaturalParameter(std::move(v));
}

ExponentialFamily random_family(Rng& rng, Index n, Index d) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (Index y = 0; y < n; ++y) {
    labels.push_back("y" + std::to_string(y));
  }
  Eigen::VectorXd base = random_distribution(rng, n).probs();
  // Exponential spacing can produce a base entry of exactly zero only with
  // probability zero, but strict positivity is an invariant, so guard it.
  base = base.cwiseMax(1e-300);
  base /= base.sum();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd phi(n, d);
  for (Index y = 0; y < n; ++y) {
    for (Index j = 0; j < d; ++j) {
      phi(y, j) = gauss(rng);
    }
  }
  return ExponentialFamily(std::move(labels), std::move(base), std::move(phi));
}

std::vector<Distribution> mean_preserving_peers(const ExponentialFamily& family,
                                                const NaturalParameter& lambda_star, int count,
                                                std::uint64_t seed) {
  std::vector<Distribution> out;
  if (count <= 0) {
    return out;
  }
  const Distribution p = member(family, lambda_star);
  const Index n = family.support_size();

  // Columns of the constraint transpose: phi_1..phi_d and the all-ones vector.
  Eigen::MatrixXd constraints(n, family.dim() + 1);
  constraints.leftCols(family.dim()) = family.statistic();
  constraints.col(family.dim()).setOnes();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(constraints);
  const Index rank = qr.rank();
  if (rank >= n) {
    out.push_back(p);
    return out;
  }
  const Eigen::MatrixXd q_full = qr.householderQ();
  const Eigen::MatrixXd null_space = q_full.rightCols(n - rank);

  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> fraction(0.05, 1.0);
  const double cap = 0.5 * p.probs().minCoeff();
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    Eigen::VectorXd w(null_space.cols());
    for (Index k = 0; k < w.size(); ++k) {
      w[k] = gauss(rng);
    }
    Eigen::VectorXd z = null_space * w;
    const double size = z.lpNorm<Eigen::Infinity>();
    if (!(size > 0.0)) {
      continue;
    }
    z *= fraction(rng) * cap / size;
    out.emplace_back(p.probs() + z);
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t instance_seed(std::uint64_t suite_seed, const std::string& check, int instance) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : check) {
    h = (h ^ c) * 0x100000001b3ULL;
  }
  return mix_seed(mix_seed(suite_seed, h), static_cast<std::uint64_t>(instance));
}

namespace {

constexpr double kParameterBound = 3.0;
constexpr double kMatchedParameterBound = 2.0;

struct CheckSpec {
  const char* name;
  Tolerance tolerance;
};

const std::vector<CheckSpec>& check_specs() {
  static const std::vector<CheckSpec> specs = {
      {"bregman", {}},
      {"elbo", {}},
      {"fenchel_equality", {1e-10, 0.0}},
      {"fenchel_inequality", {1e-12, 0.0}},
      {"gibbs_bound", {1e-12, 0.0}},
      {"gradient", {1e-6, 0.0}},
      {"i_projection", {1e-9, 0.0}},
      {"i_projection_optimality", {1e-10, 0.0}},
      {"kl_difference", {}},
      {"kl_within_family", {}},
      {"legendre_dual", {}},
      {"pythagorean", {1e-9, 0.0}},
      {"reverse_projection_optimality", {1e-10, 0.0}},
      {"supporting_hyperplane", {1e-12, 0.0}},
      {"three_point", {}},
  };
  return specs;
}

IdentityReport failed_solve(const SolveReport& report) {
  IdentityReport r;
  r.lhs = report.moment_residual;
  r.rhs = 0.0;
  r.residual = std::numeric_limits<double>::quiet_NaN();
  r.tolerance = 0.0;
  r.pass = false;
  return r;
}

double total_variation(const Distribution& p, const Distribution& q) {
  return 0.5 * (p.probs() - q.probs()).lpNorm<1>();
}

}  // namespace

const std::vector<std::string>& VerificationSuite::check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& spec : check_specs()) {
      out.emplace_back(spec.name);
    }
    return out;
  }();
  return names;
}

VerificationSuite VerificationSuite::standard(std::uint64_t seed, int count) {
  VerificationSuite suite;
  suite.seed = seed;
  for (const auto& spec : check_specs()) {
    suite.instance_counts[spec.name] = count;
    suite.tolerances[spec.name] = spec.tolerance;
  }
  return suite;
}

CheckOutcome run_check(const ExponentialFamily& family, const std::string& check, int instance,
                       std::uint64_t seed, const Tolerance& tol) {
  const Index n = family.support_size();
  const Index d = family.dim();
  Rng rng(seed);
  CheckOutcome out;
  out.check = check;
  out.instance = instance;
  out.instance_seed = seed;
  auto record = [&out](const char* name, const Eigen::VectorXd& v) {
    out.inputs.emplace_back(name, v);
  };

  if (check == "kl_difference" || check == "three_point") {
    const Distribution q = random_distribution(rng, n);
    const NaturalParameter l1 = random_parameter(rng, d, kParameterBound);
    const NaturalParameter l2 = random_parameter(rng, d, kParameterBound);
    record("q", q.probs());
    record("lambda1", l1.values());
    record("lambda2", l2.values());
    const double kl2 = kl_direct(q, member(family, l2));
    const double kl1 = kl_direct(q, member(family, l1));
    if (check == "kl_difference") {
      out.report = IdentityReport::equality(kl2 - kl1, kl_difference_rhs(family, q, l1, l2),
                                            tol.scaled({kl2, kl1}));
    } else {
      const double kl12 = kl_within_family(family, l1, l2);
      const double cross = (moment_of(family, q).values() - moment_map(family, l1).values())
                               .dot(l1.values() - l2.values());
      out.report =
          IdentityReport::equality(kl2, kl1 + kl12 + cross, tol.scaled({kl2, kl1, kl12, cross}));
    }
  } else if (check == "kl_within_family" || check == "bregman" ||
             check == "supporting_hyperplane") {
    const NaturalParameter l1 = random_parameter(rng, d, kParameterBound);
    const NaturalParameter l2 = random_parameter(rng, d, kParameterBound);
    record("lambda1", l1.values());
    record("lambda2", l2.values());
    const Distribution p1 = member(family, l1);
    const Distribution p2 = member(family, l2);
    if (check == "supporting_hyperplane") {
      const double gap = bregman(family, l2, l1);
      // Members that differ visibly must be separated by a visible gap.
      out.report = total_variation(p1, p2) > 1e-8
                       ? IdentityReport::lower_bound(gap, 1e-10, 0.0)
                       : IdentityReport::lower_bound(gap, 0.0, tol.atol);
    } else {
      const double oracle_kl = kl_direct(p1, p2);
      const double closed = check == "bregman" ? bregman(family, l2, l1)
                                               : kl_within_family(family, l1, l2);
      out.report = IdentityReport::equality(closed, oracle_kl, tol.scaled({closed, oracle_kl}));
    }
  } else if (check == "elbo" || check == "gibbs_bound") {
    const Distribution q = random_distribution(rng, n);
    const NaturalParameter lambda = random_parameter(rng, d, kParameterBound);
    record("q", q.probs());
    record("lambda", lambda.values());
    const ElboSplit split = elbo(family, q, lambda);
    const double a = log_partition(family, lambda);
    if (check == "elbo") {
      const double gap = kl_direct(q, member(family, lambda));
      out.report = IdentityReport::equality(split.elbo + gap, a, tol.scaled({split.elbo, gap, a}));
    } else {
      out.report = IdentityReport::lower_bound(a, split.elbo, tol.scaled(0.0));
    }
  } else if (check == "gradient") {
    const NaturalParameter lambda = random_parameter(rng, d, kParameterBound);
    record("lambda", lambda.values());
    out.report = IdentityReport::equality(grad_check(family, lambda), 0.0, tol.scaled(0.0));
  } else if (check == "pythagorean" || check == "reverse_projection_optimality") {
    const Distribution q = random_distribution(rng, n);
    const NaturalParameter l2 = random_parameter(rng, d, kParameterBound);
    record("q", q.probs());
    record("lambda2", l2.values());
    const SolveReport solve = moment_match(family, moment_of(family, q));
    if (!solve.converged()) {
      out.report = failed_solve(solve);
      return out;
    }
    record("lambda_star", solve.lambda_star.values());
    const Distribution p_star = member(family, solve.lambda_star);
    const double kl_q2 = kl_direct(q, member(family, l2));
    const double kl_qs = kl_direct(q, p_star);
    if (check == "pythagorean") {
      const double kl_s2 = kl_within_family(family, solve.lambda_star, l2);
      out.report = IdentityReport::equality(kl_q2, kl_qs + kl_s2, tol.scaled({kl_q2, kl_qs, kl_s2}));
    } else {
      out.report = IdentityReport::lower_bound(kl_q2, kl_qs, tol.scaled(0.0));
    }
  } else if (check == "i_projection" || check == "i_projection_optimality") {
    const NaturalParameter l0 = random_parameter(rng, d, kMatchedParameterBound);
    record("lambda0", l0.values());
    const MomentVector mu = moment_map(family, l0);
    const SolveReport solve = moment_match(family, mu);
    if (!solve.converged()) {
      out.report = failed_solve(solve);
      return out;
    }
    record("lambda_star", solve.lambda_star.values());
    const Distribution p_star = member(family, solve.lambda_star);
    const Distribution q = mean_preserving_peers(family, solve.lambda_star, 1, rng()).front();
    record("q", q.probs());
    const Distribution a = family.base_distribution();
    const double kl_qa = kl_direct(q, a);
    const double kl_sa = kl_direct(p_star, a);
    if (check == "i_projection") {
      const double kl_qs = kl_direct(q, p_star);
      out.report = IdentityReport::equality(kl_qa, kl_qs + kl_sa, tol.scaled({kl_qa, kl_qs, kl_sa}));
    } else {
      out.report = IdentityReport::lower_bound(kl_qa, kl_sa, tol.scaled(0.0));
    }
  } else if (check == "legendre_dual" || check == "fenchel_equality" ||
             check == "fenchel_inequality") {
    const NaturalParameter l0 = random_parameter(rng, d, kMatchedParameterBound);
    record("lambda0", l0.values());
    const MomentVector mu = moment_map(family, l0);
    const SolveReport solve = moment_match(family, mu);
    if (!solve.converged()) {
      out.report = failed_solve(solve);
      return out;
    }
    record("lambda_star", solve.lambda_star.values());
    const double dual = kl_within_family(family, solve.lambda_star, NaturalParameter::zero(d));
    if (check == "legendre_dual") {
      const double direct = kl_direct(member(family, solve.lambda_star), family.base_distribution());
      out.report = IdentityReport::equality(dual, direct, tol.scaled({dual, direct}));
    } else if (check == "fenchel_equality") {
      const double a = log_partition(family, solve.lambda_star);
      out.report = IdentityReport::equality(a + dual, solve.lambda_star.values().dot(mu.values()),
                                            tol.scaled(0.0));
    } else {
      const NaturalParameter probe = random_parameter(rng, d, kParameterBound);
      record("probe", probe.values());
      out.report = IdentityReport::lower_bound(log_partition(family, probe) + dual,
                                               probe.values().dot(mu.values()), tol.scaled(0.0));
    }
  } else {
    throw ContractViolation("unknown verification check: " + check);
  }
  return out;
}

std::vector<CheckOutcome> run_suite(const ExponentialFamily& family,
                                    const VerificationSuite& suite) {
  std::vector<CheckOutcome> outcomes;
  // std::map iterates in name order, which fixes the report order.
  for (const auto& [check, count] : suite.instance_counts) {
    const auto tol_it = suite.tolerances.find(check);
    const Tolerance tol = tol_it != suite.tolerances.end() ? tol_it->second : Tolerance{};
    for (int i = 0; i < count; ++i) {
      outcomes.push_back(run_check(family, check, i, instance_seed(suite.seed, check, i), tol));
    }
  }
  return outcomes;
}

}  // namespace expfam::oracle
