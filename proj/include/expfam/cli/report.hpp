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

#include <json.hpp>

#include <string>

namespace expfam::cli {

using Json = nlohmann::ordered_json;

// 17 significant digits in exponent form ("5.0000000000000000e-01"), which
// round-trips every finite double. Non-finite values become the strings
// "inf", "-inf" and "nan".
std::string format_real(double x);

// Pretty-printed JSON with every floating-point field written by
// format_real. Arrays of scalars stay on one line.
std::string dump_report(const Json& report);

}  // namespace expfam::cli
