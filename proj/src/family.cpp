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

#include "expfam/family.hpp"

#include "expfam/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace expfam {
namespace {

void require_finite(const Eigen::Ref<const Eigen::MatrixXd>& m, const char* what) {
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + " has non-finite entries");
  }
}

void require_dim(const ExponentialFamily& family, Index got, const char* what) {
  if (got != family.dim()) {
    std::ostringstream msg;
    msg << what << " has dimension " << got << ", family has d = " << family.dim();
    throw ContractViolation(msg.str());
  }
}

// lambda . phi(y) for every y.
Eigen::VectorXd scores(const ExponentialFamily& family, const NaturalParameter& lambda) {
  require_dim(family, lambda.dim(), "natural parameter");
  return family.statistic() * lambda.values();
}

}  // namespace

NaturalParameter::NaturalParameter(Eigen::VectorXd values) : values_(std::move(values)) {
  require_finite(values_, "natural parameter");
}

MomentVector::MomentVector(Eigen::VectorXd values) : values_(std::move(values)) {
  require_finite(values_, "moment vector");
}

Distribution::Distribution(Eigen::VectorXd probs) : probs_(std::move(probs)) {
  if (probs_.size() == 0) {
    throw ValidationError("distribution over an empty support");
  }
  require_finite(probs_, "distribution");
  if ((probs_.array() < 0.0).any() || (probs_.array() > 1.0).any()) {
    throw ValidationError("distribution entries must lie in [0, 1]");
  }
  const double total = probs_.sum();
  if (std::abs(total - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "distribution sums to " << total << ", not 1";
    throw ValidationError(msg.str());
  }
}

Distribution Distribution::uniform(Index n) {
  return Distribution(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

Distribution Distribution::point_mass(Index n, Index at) {
  if (at < 0 || at >= n) {
    throw ContractViolation("point mass index outside the support");
  }
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  p[at] = 1.0;
  return Distribution(std::move(p));
}

ExponentialFamily::ExponentialFamily(std::vector<std::string> labels, Eigen::VectorXd base,
                                     Eigen::MatrixXd statistic)
    : labels_(std::move(labels)), base_(std::move(base)), statistic_(std::move(statistic)) {
  const auto n = static_cast<Index>(labels_.size());
  if (n < 1) {
    throw ValidationError("family needs at least one support point");
  }
  if (base_.size() != n || statistic_.rows() != n) {
    std::ostringstream msg;
    msg << "inconsistent support sizes: " << n << " labels, " << base_.size()
        << " base entries, " << statistic_.rows() << " statistic rows";
    throw ContractViolation(msg.str());
  }
  if (statistic_.cols() < 1) {
    throw ValidationError("sufficient statistic needs at least one column");
  }
  require_finite(base_, "base distribution");
  require_finite(statistic_, "sufficient statistic");
  for (Index y = 0; y < n; ++y) {
    if (!(base_[y] > 0.0)) {
      std::ostringstream msg;
      msg << "base entry " << y << " (" << labels_[y] << ") is not strictly positive";
      throw ValidationError(msg.str());
    }
  }
  const double total = base_.sum();
  if (std::abs(total - 1.0) > kRenormalizeTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "base distribution sums to " << total << ", not 1";
    throw ValidationError(msg.str());
  }
  // Deviations at the rounding level of the sum itself are left alone so that
  // rebuilding a family from its own base is the identity.
  const double rounding = 4.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  if (std::abs(total - 1.0) > rounding) {
    base_ /= total;
  }
  log_base_ = base_.array().log();
}

ExponentialFamily ExponentialFamily::categorical(Index k) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(k));
  for (Index y = 0; y < k; ++y) {
    labels.push_back(std::to_string(y + 1));
  }
  return ExponentialFamily(std::move(labels),
                           Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k)),
                           Eigen::MatrixXd::Identity(k, k));
}

bool operator==(const ExponentialFamily& lhs, const ExponentialFamily& rhs) {
  return lhs.labels_ == rhs.labels_ && lhs.base_.size() == rhs.base_.size() &&
         lhs.base_ == rhs.base_ && lhs.statistic_.rows() == rhs.statistic_.rows() &&
         lhs.statistic_.cols() == rhs.statistic_.cols() && lhs.statistic_ == rhs.statistic_;
}

double log_partition(const ExponentialFamily& family, const NaturalParameter& lambda) {
  const Eigen::VectorXd s = scores(family, lambda);
  const double shift = s.maxCoeff();
  const double sum = (family.base().array() * (s.array() - shift).exp()).sum();
  return shift + std::log(sum);
}

double partition(const ExponentialFamily& family, const NaturalParameter& lambda) {
  return std::exp(log_partition(family, lambda));
}

Eigen::VectorXd log_member(const ExponentialFamily& family, const NaturalParameter& lambda) {
  const Eigen::VectorXd s = scores(family, lambda);
  const double shift = s.maxCoeff();
  const double sum = (family.base().array() * (s.array() - shift).exp()).sum();
  const double a = shift + std::log(sum);
  return (family.log_base().array() + s.array() - a).matrix();
}

Distribution member(const ExponentialFamily& family, const NaturalParameter& lambda) {
  Eigen::VectorXd p = log_member(family, lambda).array().exp();
  // Removes the few-ulp drift left by exponentiating n log-probabilities.
  p /= p.sum();
  return Distribution(std::move(p));
}

MomentVector moment_of(const ExponentialFamily& family, const Distribution& q) {
  if (q.size() != family.support_size()) {
    std::ostringstream msg;
    msg << "distribution has " << q.size() << " entries, family support has "
        << family.support_size();
    throw ContractViolation(msg.str());
  }
  return MomentVector(family.statistic().transpose() * q.probs());
}

MomentVector moment_map(const ExponentialFamily& family, const NaturalParameter& lambda) {
  return moment_of(family, member(family, lambda));
}

Eigen::MatrixXd statistic_covariance(const ExponentialFamily& family,
                                     const NaturalParameter& lambda) {
  const Distribution p = member(family, lambda);
  const Eigen::VectorXd mu = family.statistic().transpose() * p.probs();
  const Eigen::MatrixXd centered = family.statistic().rowwise() - mu.transpose();
  return centered.transpose() * p.probs().asDiagonal() * centered;
}

}  // namespace expfam
