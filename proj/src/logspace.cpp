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

#include "expfam/logspace.hpp"

#include "expfam/errors.hpp"
#include "expfam/family.hpp"

#include <cmath>

namespace expfam {

double lse(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() == 0) {
    throw ContractViolation("log-sum-exp of an empty vector");
  }
  if (!v.allFinite()) {
    throw ValidationError("log-sum-exp input has non-finite entries");
  }
  const double shift = v.maxCoeff();
  return shift + std::log((v.array() - shift).exp().sum());
}

Distribution softmax(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double total = lse(v);
  Eigen::VectorXd p = (v.array() - total).exp();
  p /= p.sum();
  return Distribution(std::move(p));
}

double entropy(const Distribution& q) {
  double h = 0.0;
  for (Index y = 0; y < q.size(); ++y) {
    if (q[y] > 0.0) {
      h -= q[y] * std::log(q[y]);
    }
  }
  return h;
}

}  // namespace expfam
