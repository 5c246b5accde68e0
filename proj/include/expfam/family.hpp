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

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace expfam {

using Index = Eigen::Index;

/// Natural parameter of a family member. Entries are finite.
class NaturalParameter {
 public:
  explicit NaturalParameter(Eigen::VectorXd values);
  static NaturalParameter zero(Index dim) { return NaturalParameter(Eigen::VectorXd::Zero(dim)); }

  const Eigen::VectorXd& values() const { return values_; }
  Index dim() const { return values_.size(); }
  double operator[](Index j) const { return values_[j]; }

 private:
  Eigen::VectorXd values_;
};

/// Expected sufficient statistic. Entries are finite.
class MomentVector {
 public:
  explicit MomentVector(Eigen::VectorXd values);

  const Eigen::VectorXd& values() const { return values_; }
  Index dim() const { return values_.size(); }
  double operator[](Index j) const { return values_[j]; }

 private:
  Eigen::VectorXd values_;
};

/// Probability vector over a finite support.
///
/// Entries lie in [0, 1] and sum to one within kSumTolerance. Zero entries are
/// allowed; family members are strictly positive except where exp underflows.
class Distribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit Distribution(Eigen::VectorXd probs);
  static Distribution uniform(Index n);
  static Distribution point_mass(Index n, Index at);

  const Eigen::VectorXd& probs() const { return probs_; }
  Index size() const { return probs_.size(); }
  double operator[](Index y) const { return probs_[y]; }

 private:
  Eigen::VectorXd probs_;
};

/// Finite exponential family: support labels, strictly positive base
/// distribution and an n x d sufficient-statistic matrix (row y is phi(y)).
///
/// The base is validated at construction. A sum that deviates from one by at
/// most kRenormalizeTolerance is treated as rounding noise and renormalized;
/// anything larger is rejected.
class ExponentialFamily {
 public:
  static constexpr double kRenormalizeTolerance = 1e-9;

  ExponentialFamily(std::vector<std::string> labels, Eigen::VectorXd base,
                    Eigen::MatrixXd statistic);

  /// Uniform base with phi(y) = e_y (softmax family) on k outcomes.
  static ExponentialFamily categorical(Index k);

  const std::vector<std::string>& labels() const { return labels_; }
  const Eigen::VectorXd& base() const { return base_; }
  const Eigen::VectorXd& log_base() const { return log_base_; }
  const Eigen::MatrixXd& statistic() const { return statistic_; }
  Index support_size() const { return statistic_.rows(); }
  Index dim() const { return statistic_.cols(); }

  Distribution base_distribution() const { return Distribution(base_); }

  friend bool operator==(const ExponentialFamily& lhs, const ExponentialFamily& rhs);

 private:
  std::vector<std::string> labels_;
  Eigen::VectorXd base_;
  Eigen::VectorXd log_base_;
  Eigen::MatrixXd statistic_;
};

// A(lambda) = log sum_y a(y) exp(lambda . phi(y)), evaluated with a max-shift.
double log_partition(const ExponentialFamily& family, const NaturalParameter& lambda);

// Z_lambda = exp(A(lambda)); overflows to +inf for extreme parameters.
double partition(const ExponentialFamily& family, const NaturalParameter& lambda);

// log p_lambda(y) for every y, computed without forming probabilities.
Eigen::VectorXd log_member(const ExponentialFamily& family, const NaturalParameter& lambda);

Distribution member(const ExponentialFamily& family, const NaturalParameter& lambda);

MomentVector moment_of(const ExponentialFamily& family, const Distribution& q);

// mu_lambda, the gradient of A at lambda.
MomentVector moment_map(const ExponentialFamily& family, const NaturalParameter& lambda);

// Covariance of phi under p_lambda, the Hessian of A at lambda.
Eigen::MatrixXd statistic_covariance(const ExponentialFamily& family,
                                     const NaturalParameter& lambda);

}  // namespace expfam
