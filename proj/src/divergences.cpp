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

#include "expfam/errors.hpp"

#include <cmath>
#include <limits>

namespace expfam {
namespace {

void require_same_support(const Distribution& q, const Distribution& p) {
  if (q.size() != p.size()) {
    throw ContractViolation("KL operands live on supports of different sizes");
  }
}

void require_support(const ExponentialFamily& family, const Distribution& q) {
  if (q.size() != family.support_size()) {
    throw ContractViolation("distribution does not match the family support");
  }
}

double x_log_x_over(double qy, double log_py) { return qy * (std::log(qy) - log_py); }

}  // namespace

double Tolerance::scaled(std::initializer_list<double> terms) const {
  double magnitude = 0.0;
  for (double t : terms) {
    magnitude += std::abs(t);
  }
  return scaled(magnitude);
}

IdentityReport IdentityReport::equality(double lhs, double rhs, double tolerance) {
  IdentityReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = lhs - rhs;
  r.tolerance = tolerance;
  r.relation = Relation::Equal;
  r.pass = std::abs(r.residual) <= tolerance;
  return r;
}

IdentityReport IdentityReport::lower_bound(double lhs, double rhs, double tolerance) {
  IdentityReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = lhs - rhs;
  r.tolerance = tolerance;
  r.relation = Relation::GreaterEqual;
  r.pass = r.residual >= -tolerance;
  return r;
}

double kl(const Distribution& q, const Distribution& p) {
  require_same_support(q, p);
  double total = 0.0;
  for (Index y = 0; y < q.size(); ++y) {
    if (q[y] == 0.0) {
      continue;
    }
    if (p[y] == 0.0) {
      return std::numeric_limits<double>::infinity();
    }
    total += x_log_x_over(q[y], std::log(p[y]));
  }
  return total;
}

double kl_to_member(const ExponentialFamily& family, const Distribution& q,
                    const NaturalParameter& lambda) {
  require_support(family, q);
  const Eigen::VectorXd log_p = log_member(family, lambda);
  double total = 0.0;
  for (Index y = 0; y < q.size(); ++y) {
    if (q[y] > 0.0) {
      total += x_log_x_over(q[y], log_p[y]);
    }
  }
  return total;
}

double kl_difference_rhs(const ExponentialFamily& family, const Distribution& q,
                         const NaturalParameter& lambda1, const NaturalParameter& lambda2) {
  const MomentVector mu_q = moment_of(family, q);
  return log_partition(family, lambda2) - log_partition(family, lambda1) +
         mu_q.values().dot(lambda1.values() - lambda2.values());
}

double kl_within_family(const ExponentialFamily& family, const NaturalParameter& lambda1,
                        const NaturalParameter& lambda2) {
  const MomentVector mu1 = moment_map(family, lambda1);
  return log_partition(family, lambda2) - log_partition(family, lambda1) +
         mu1.values().dot(lambda1.values() - lambda2.values());
}

double bregman(const ExponentialFamily& family, const NaturalParameter& lambda2,
               const NaturalParameter& lambda1) {
  const MomentVector grad = moment_map(family, lambda1);
  return log_partition(family, lambda2) - log_partition(family, lambda1) -
         grad.values().dot(lambda2.values() - lambda1.values());
}

ElboSplit elbo(const ExponentialFamily& family, const Distribution& q,
               const NaturalParameter& lambda) {
  const MomentVector mu_q = moment_of(family, q);
  if (lambda.dim() != family.dim()) {
    throw ContractViolation("natural parameter does not match the family dimension");
  }
  ElboSplit split;
  split.elbo = lambda.values().dot(mu_q.values()) - kl(q, family.base_distribution());
  split.kl_gap = kl_to_member(family, q, lambda);
  return split;
}

IdentityReport kl_difference_residual(const ExponentialFamily& family, const Distribution& q,
                                      const NaturalParameter& lambda1,
                                      const NaturalParameter& lambda2, const Tolerance& tol) {
  const double kl2 = kl_to_member(family, q, lambda2);
  const double kl1 = kl_to_member(family, q, lambda1);
  return IdentityReport::equality(kl2 - kl1, kl_difference_rhs(family, q, lambda1, lambda2),
                                  tol.scaled({kl2, kl1}));
}

IdentityReport three_point_residual(const ExponentialFamily& family, const Distribution& q,
                                    const NaturalParameter& lambda1,
                                    const NaturalParameter& lambda2, const Tolerance& tol) {
  const double lhs = kl_to_member(family, q, lambda2);
  const double kl_q1 = kl_to_member(family, q, lambda1);
  const double kl_12 = kl_within_family(family, lambda1, lambda2);
  const Eigen::VectorXd mismatch =
      moment_of(family, q).values() - moment_map(family, lambda1).values();
  const double cross = mismatch.dot(lambda1.values() - lambda2.values());
  return IdentityReport::equality(lhs, kl_q1 + kl_12 + cross,
                                  tol.scaled({lhs, kl_q1, kl_12, cross}));
}

IdentityReport pythagorean_residual(const ExponentialFamily& family, const Distribution& q,
                                    const NaturalParameter& lambda1,
                                    const NaturalParameter& lambda2, const Tolerance& tol) {
  const double lhs = kl_to_member(family, q, lambda2);
  const double kl_q1 = kl_to_member(family, q, lambda1);
  const double kl_12 = kl_within_family(family, lambda1, lambda2);
  return IdentityReport::equality(lhs, kl_q1 + kl_12, tol.scaled({lhs, kl_q1, kl_12}));
}

IdentityReport elbo_residual(const ExponentialFamily& family, const Distribution& q,
                             const NaturalParameter& lambda, const Tolerance& tol) {
  const ElboSplit split = elbo(family, q, lambda);
  const double a = log_partition(family, lambda);
  return IdentityReport::equality(split.elbo + split.kl_gap, a,
                                  tol.scaled({split.elbo, split.kl_gap, a}));
}

IdentityReport bregman_residual(const ExponentialFamily& family, const NaturalParameter& lambda2,
                                const NaturalParameter& lambda1, const Tolerance& tol) {
  const double b = bregman(family, lambda2, lambda1);
  const double direct = kl(member(family, lambda1), member(family, lambda2));
  return IdentityReport::equality(b, direct, tol.scaled({b, direct}));
}

IdentityReport supporting_hyperplane(const ExponentialFamily& family,
                                     const NaturalParameter& lambda1,
                                     const NaturalParameter& lambda2, double slack) {
  return IdentityReport::lower_bound(bregman(family, lambda2, lambda1), 0.0, slack);
}

}  // namespace expfam
