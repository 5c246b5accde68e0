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

#include <initializer_list>

namespace expfam {

/// Default slack for identity checks: atol + rtol * (1 + magnitude of terms).
struct Tolerance {
  double atol = 1e-12;
  double rtol = 1e-10;

  double scaled(double magnitude) const { return atol + rtol * (1.0 + magnitude); }
  double scaled(std::initializer_list<double> terms) const;
};

enum class Relation { Equal, GreaterEqual };

/// Outcome of certifying one displayed relation numerically.
///
/// residual is lhs - rhs as computed. For Relation::Equal, pass iff
/// |residual| <= tolerance; for Relation::GreaterEqual, pass iff
/// residual >= -tolerance.
struct IdentityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  Relation relation = Relation::Equal;

  static IdentityReport equality(double lhs, double rhs, double tolerance);
  static IdentityReport lower_bound(double lhs, double rhs, double tolerance);
};

// KL(q || p) = sum_{q(y) > 0} q(y) (log q(y) - log p(y)). Returns +inf when
// p(y) = 0 for some y with q(y) > 0.
double kl(const Distribution& q, const Distribution& p);

// KL(q || p_lambda) using log p_lambda directly, so no probability of the
// member is ever materialized.
double kl_to_member(const ExponentialFamily& family, const Distribution& q,
                    const NaturalParameter& lambda);

// A(l2) - A(l1) + mu_q . (l1 - l2)
double kl_difference_rhs(const ExponentialFamily& family, const Distribution& q,
                         const NaturalParameter& lambda1, const NaturalParameter& lambda2);

// KL(p_l1 || p_l2) in closed form: A(l2) - A(l1) + mu_l1 . (l1 - l2).
double kl_within_family(const ExponentialFamily& family, const NaturalParameter& lambda1,
                        const NaturalParameter& lambda2);

// A(l2) - A(l1) - mu_l1 . (l2 - l1), the Bregman divergence of A.
double bregman(const ExponentialFamily& family, const NaturalParameter& lambda2,
               const NaturalParameter& lambda1);

struct ElboSplit {
  double elbo = 0.0;
  double kl_gap = 0.0;
};

// elbo = lambda . mu_q - KL(q || a), kl_gap = KL(q || p_lambda).
ElboSplit elbo(const ExponentialFamily& family, const Distribution& q,
               const NaturalParameter& lambda);

// Residual reports. Each compares the KL-sum side against the closed form
// built from log-partition values and moments.

IdentityReport kl_difference_residual(const ExponentialFamily& family, const Distribution& q,
                                      const NaturalParameter& lambda1,
                                      const NaturalParameter& lambda2,
                                      const Tolerance& tol = {});

// lhs = KL(q||p_l2); rhs = KL(q||p_l1) + KL(p_l1||p_l2) + (mu_q - mu_l1).(l1 - l2).
IdentityReport three_point_residual(const ExponentialFamily& family, const Distribution& q,
                                    const NaturalParameter& lambda1,
                                    const NaturalParameter& lambda2,
                                    const Tolerance& tol = {});

// Three-point identity without the inner-product term. Holds when
// mu_{lambda1} = mu_q, i.e. p_l1 is the reverse projection of q.
IdentityReport pythagorean_residual(const ExponentialFamily& family, const Distribution& q,
                                    const NaturalParameter& lambda1,
                                    const NaturalParameter& lambda2,
                                    const Tolerance& tol = {});

// elbo + kl_gap against A(lambda).
IdentityReport elbo_residual(const ExponentialFamily& family, const Distribution& q,
                             const NaturalParameter& lambda, const Tolerance& tol = {});

// Bregman form against the explicit KL(p_l1 || p_l2) sum.
IdentityReport bregman_residual(const ExponentialFamily& family, const NaturalParameter& lambda2,
                                const NaturalParameter& lambda1, const Tolerance& tol = {});

// A(l2) >= A(l1) + mu_l1 . (l2 - l1), reported as a lower bound on the gap.
IdentityReport supporting_hyperplane(const ExponentialFamily& family,
                                     const NaturalParameter& lambda1,
                                     const NaturalParameter& lambda2, double slack = 1e-12);

}  // namespace expfam
