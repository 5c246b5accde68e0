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

namespace expfam {

class Distribution;

// log(sum_i exp(v_i)) with a single max-shift. Throws ContractViolation on
// empty input and ValidationError on non-finite entries.
double lse(const Eigen::Ref<const Eigen::VectorXd>& v);

// softmax(v)_i = exp(v_i - lse(v)).
Distribution softmax(const Eigen::Ref<const Eigen::VectorXd>& v);

// Shannon entropy in nats with 0 log 0 = 0.
double entropy(const Distribution& q);

}  // namespace expfam
