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

#include "expfam/projection.hpp"

#include "expfam/divergences.hpp"
#include "expfam/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace expfam {
namespace {

constexpr int kPolishSteps = 3;

// Orthonormal split of R^d into directions the statistic resolves (phi . v
// varies over the support) and directions it does not.
struct DirectionSplit {
  Eigen::MatrixXd identifiable;
  Eigen::MatrixXd unresolved;
};

DirectionSplit split_directions(const ExponentialFamily& family) {
  const Eigen::MatrixXd& phi = family.statistic();
  const Eigen::VectorXd center = phi.transpose() * family.base();
  const Eigen::MatrixXd centered = phi.rowwise() - center.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = (sigma.size() > 0 ? sigma[0] : 0.0) *
                        static_cast<double>(std::max(phi.rows(), phi.cols())) *
                        std::numeric_limits<double>::epsilon();
  Index rank = 0;
  while (rank < sigma.size() && sigma[rank] > cutoff) {
    ++rank;
  }
  DirectionSplit split;
  split.identifiable = svd.matrixV().leftCols(rank);
  split.unresolved = svd.matrixV().rightCols(phi.cols() - rank);
  return split;
}

// Everything the solver needs about the current iterate.
struct Iterate {
  Eigen::VectorXd lambda;
  Eigen::VectorXd probs;
  Eigen::VectorXd gradient;
  double log_partition = 0.0;
};

Iterate evaluate(const ExponentialFamily& family, const MomentVector& mu, Eigen::VectorXd lambda) {
  Iterate it;
  const NaturalParameter param(lambda);
  it.probs = member(family, param).probs();
  it.log_partition = log_partition(family, param);
  it.gradient = family.statistic().transpose() * it.probs - mu.values();
  it.lambda = std::move(lambda);
  return it;
}

// f(lambda + t * step) - f(lambda) = log E_p[exp(t * step . (phi - mu))],
// evaluated without forming the two f values.
double objective_change(const ExponentialFamily& family, const MomentVector& mu,
                        const Iterate& at, const Eigen::VectorXd& step, double t) {
  const Eigen::ArrayXd shift =
      t * ((family.statistic() * step).array() - step.dot(mu.values()));
  const Eigen::ArrayXd& p = at.probs.array();
  const double mass = p.sum();
  const double largest = shift.abs().maxCoeff();
  if (largest <= 0.5) {
    const Eigen::ArrayXd em1 = shift.unaryExpr([](double s) { return std::expm1(s); });
    return std::log1p((p * em1).sum() / mass);
  }
  const double top = shift.maxCoeff();
  return top + std::log((p * (shift - top).exp()).sum()) - std::log(mass);
}

Eigen::VectorXd newton_direction(const ExponentialFamily& family, const Iterate& at,
                                 const Eigen::MatrixXd& basis) {
  const Eigen::VectorXd projected = basis.transpose() * at.gradient;
  const Eigen::VectorXd steepest = -(basis * projected);
  const Index r = basis.cols();
  if (r == 0) {
    return Eigen::VectorXd::Zero(at.lambda.size());
  }
  const Eigen::MatrixXd centered =
      family.statistic().rowwise() - (family.statistic().transpose() * at.probs).transpose();
  const Eigen::MatrixXd reduced_basis = centered * basis;
  Eigen::MatrixXd hessian = reduced_basis.transpose() * at.probs.asDiagonal() * reduced_basis;
  const double ridge = 1e-10 * hessian.trace() / static_cast<double>(r);
  hessian.diagonal().array() += ridge;
  Eigen::LLT<Eigen::MatrixXd> llt(hessian);
  if (llt.info() != Eigen::Success || !(ridge > 0.0)) {
    return steepest;
  }
  Eigen::VectorXd step = basis * llt.solve(-projected);
  if (!step.allFinite() || !(at.gradient.dot(step) < 0.0)) {
    return steepest;
  }
  return step;
}

SolveReport finish(const MomentVector& mu, const Iterate& at,
                   int iterations, Verdict verdict, std::vector<TraceEntry> trace) {
  SolveReport report;
  report.lambda_star = NaturalParameter(at.lambda);
  report.moment_residual = at.gradient.lpNorm<Eigen::Infinity>();
  report.objective = at.log_partition - at.lambda.dot(mu.values());
  report.iterations = iterations;
  report.verdict = verdict;
  report.trace = std::move(trace);
  return report;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged:
      return "Converged";
    case Verdict::InfeasibleBoundary:
      return "InfeasibleBoundary";
    case Verdict::MaxIterations:
      return "MaxIterations";
  }
  return "Unknown";
}

SolveFailure::SolveFailure(SolveReport report)
    : std::runtime_error(std::string("moment matching did not converge: ") +
                         to_string(report.verdict)),
      report_(std::move(report)) {}

SolveReport moment_match(const ExponentialFamily& family, const MomentVector& mu,
                         const SolveOptions& options) {
  if (mu.dim() != family.dim()) {
    std::ostringstream msg;
    msg << "target moment has dimension " << mu.dim() << ", family has d = " << family.dim();
    throw ContractViolation(msg.str());
  }
  const double tol = options.tol_moment * (1.0 + mu.values().lpNorm<Eigen::Infinity>());
  const Index d = family.dim();

  Iterate at = evaluate(family, mu, Eigen::VectorXd::Zero(d));
  double objective = at.log_partition;
  std::vector<TraceEntry> trace{{0, objective, at.gradient.lpNorm<Eigen::Infinity>(), 0.0}};

  if (d == 1) {
    const double lo = family.statistic().col(0).minCoeff();
    const double hi = family.statistic().col(0).maxCoeff();
    const bool degenerate_match = lo == hi && mu[0] == lo;
    if (!degenerate_match && !(lo < mu[0] && mu[0] < hi)) {
      return finish(mu, at, 0, Verdict::InfeasibleBoundary, std::move(trace));
    }
  }

  const DirectionSplit split = split_directions(family);
  if (split.unresolved.cols() > 0) {
    const Eigen::VectorXd off_hull = split.unresolved.transpose() * at.gradient;
    if (off_hull.lpNorm<Eigen::Infinity>() > tol) {
      return finish(mu, at, 0, Verdict::InfeasibleBoundary, std::move(trace));
    }
  }

  const double runaway = options.divergence_bound * (1.0 + at.lambda.norm());
  int stalled = 0;
  for (int iteration = 1; iteration <= options.max_iter; ++iteration) {
    const Eigen::VectorXd step = newton_direction(family, at, split.identifiable);
    const double grad_norm = at.gradient.lpNorm<Eigen::Infinity>();
    if (grad_norm <= tol) {
      const double settle =
          options.tol_step * (1.0 + at.lambda.lpNorm<Eigen::Infinity>());
      if (step.lpNorm<Eigen::Infinity>() <= settle) {
        // Inside the quadratic basin a few full steps take the residual down to
        // rounding level; keep each one only while it still helps.
        int done = iteration - 1;
        Eigen::VectorXd polish = step;
        for (int k = 0; k < kPolishSteps && done < options.max_iter; ++k) {
          const double change = objective_change(family, mu, at, polish, 1.0);
          Iterate next = evaluate(family, mu, at.lambda + polish);
          const double g = next.gradient.lpNorm<Eigen::Infinity>();
          if (!(g < at.gradient.lpNorm<Eigen::Infinity>()) || !(change <= 0.0)) {
            break;
          }
          at = std::move(next);
          objective += change;
          trace.push_back({++done, objective, g, 1.0});
          polish = newton_direction(family, at, split.identifiable);
        }
        return finish(mu, at, done, Verdict::Converged, std::move(trace));
      }
      if (++stalled > options.stall_limit) {
        return finish(mu, at, iteration - 1, Verdict::InfeasibleBoundary,
                      std::move(trace));
      }
    } else {
      stalled = 0;
    }

    const double slope = at.gradient.dot(step);
    double t = 1.0;
    double decrease = 0.0;
    bool accepted = false;
    for (int k = 0; k <= options.max_backtracks; ++k) {
      decrease = objective_change(family, mu, at, step, t);
      if (std::isfinite(decrease) && decrease <= options.armijo_c1 * t * slope) {
        accepted = true;
        break;
      }
      t *= options.backtrack_shrink;
    }
    if (!accepted) {
      const Verdict v = grad_norm <= tol ? Verdict::Converged : Verdict::MaxIterations;
      return finish(mu, at, iteration - 1, v, std::move(trace));
    }

    at = evaluate(family, mu, at.lambda + t * step);
    objective += decrease;
    const double new_grad = at.gradient.lpNorm<Eigen::Infinity>();
    trace.push_back({iteration, objective, new_grad, t});
    // Interior targets have bounded minimizers; a run past the bound means the
    // objective keeps decreasing toward a face of the moment polytope.
    if (at.lambda.norm() > runaway) {
      return finish(mu, at, iteration, Verdict::InfeasibleBoundary, std::move(trace));
    }
  }
  return finish(mu, at, options.max_iter, Verdict::MaxIterations, std::move(trace));
}

Projection i_projection(const ExponentialFamily& family, const MomentVector& mu,
                        const SolveOptions& options) {
  SolveReport report = moment_match(family, mu, options);
  if (!report.converged()) {
    throw SolveFailure(std::move(report));
  }
  Distribution p = member(family, report.lambda_star);
  return Projection{std::move(p), std::move(report)};
}

Projection reverse_i_projection(const ExponentialFamily& family, const Distribution& q,
                                const SolveOptions& options) {
  return i_projection(family, moment_of(family, q), options);
}

double legendre_dual(const ExponentialFamily& family, const MomentVector& mu,
                     const SolveOptions& options) {
  const SolveReport report = moment_match(family, mu, options);
  if (!report.converged()) {
    throw SolveFailure(report);
  }
  return kl_within_family(family, report.lambda_star, NaturalParameter::zero(family.dim()));
}

}  // namespace expfam
