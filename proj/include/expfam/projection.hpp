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

#include <stdexcept>
#include <string>
#include <vector>

namespace expfam {

enum class Verdict { Converged, InfeasibleBoundary, MaxIterations };

const char* to_string(Verdict v);

struct SolveOptions {
  // Converged when ||mu_lambda - mu||_inf <= tol_moment * (1 + ||mu||_inf)
  // and the Newton step has settled.
  double tol_moment = 1e-10;
  // Settled when ||newton step||_inf <= tol_step * (1 + ||lambda||_inf).
  double tol_step = 1e-6;
  int max_iter = 200;
  // Runaway threshold on ||lambda||_2, scaled by (1 + ||lambda_0||_2).
  double divergence_bound = 1e3;
  double armijo_c1 = 1e-4;
  double backtrack_shrink = 0.5;
  int max_backtracks = 60;
  // Iterations allowed with the gradient inside tolerance but the Newton
  // step still O(1) before the target is declared a boundary point.
  int stall_limit = 5;
};

struct TraceEntry {
  int iteration = 0;
  double objective = 0.0;
  double gradient_norm = 0.0;
  double step_size = 0.0;
};

/// Outcome of minimizing f(lambda) = A(lambda) - lambda . mu.
///
/// Trace objectives are accumulated from line-search decrements, which are
/// evaluated in a cancellation-free form, so they are non-increasing even once
/// f stops changing in its leading digits. `objective` is f evaluated
/// directly at lambda_star.
struct SolveReport {
  NaturalParameter lambda_star = NaturalParameter::zero(0);
  double moment_residual = 0.0;
  double objective = 0.0;
  int iterations = 0;
  Verdict verdict = Verdict::MaxIterations;
  std::vector<TraceEntry> trace;

  bool converged() const { return verdict == Verdict::Converged; }
};

/// Thrown by the projection helpers when the moment-matching solve does not
/// converge. Carries the solver report.
class SolveFailure : public std::runtime_error {
 public:
  explicit SolveFailure(SolveReport report);
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

/// Finds lambda* with mu_{lambda*} = mu by damped Newton on
/// f(lambda) = A(lambda) - lambda . mu, starting from lambda = 0.
///
/// Directions that the statistic cannot resolve (phi . v constant over the
/// support) are projected out, so lambda* is the minimum-norm solution in
/// those directions. Targets off the affine hull of phi(Y), targets outside
/// [min phi, max phi] for d = 1, and targets whose Newton iterates run to
/// infinity are reported as InfeasibleBoundary.
SolveReport moment_match(const ExponentialFamily& family, const MomentVector& mu,
                         const SolveOptions& options = {});

struct Projection {
  Distribution distribution;
  SolveReport report;
};

// Minimizer of KL(q || a) over {q : mu_q = mu}. Throws SolveFailure when the
// target is not matched.
Projection i_projection(const ExponentialFamily& family, const MomentVector& mu,
                        const SolveOptions& options = {});

// Family member closest to q in KL(q || .). Throws SolveFailure when mu_q is
// on the boundary of the moment polytope.
Projection reverse_i_projection(const ExponentialFamily& family, const Distribution& q,
                                const SolveOptions& options = {});

// A*(mu) = KL(p_{lambda*} || a) at the moment-matched lambda*. Throws
// SolveFailure when mu is not matched.
double legendre_dual(const ExponentialFamily& family, const MomentVector& mu,
                     const SolveOptions& options = {});

}  // namespace expfam
