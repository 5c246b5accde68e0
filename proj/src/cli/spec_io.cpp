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

#include "expfam/cli/spec_io.hpp"

#include "expfam/cli/report.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace expfam::cli {
namespace {

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream msg;
    msg << "line " << line << ", column " << column << ": invalid JSON (" << e.what() << ")";
    throw ParseError(msg.str());
  }
}

const Json& field(const Json& doc, const char* name) {
  if (!doc.is_object()) {
    throw ParseError("line 1: document must be a JSON object");
  }
  const auto it = doc.find(name);
  if (it == doc.end()) {
    throw ParseError(std::string("missing field '") + name + "'");
  }
  return *it;
}

double real_at(const Json& j, const std::string& where) {
  if (!j.is_number()) {
    throw ParseError("field '" + where + "': expected a number, got " + j.dump());
  }
  return j.get<double>();
}

Eigen::VectorXd real_list(const Json& j, const std::string& where) {
  if (!j.is_array()) {
    throw ParseError("field '" + where + "': expected a list of numbers");
  }
  Eigen::VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Index>(i)] = real_at(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

std::vector<std::string> label_list(const Json& j) {
  if (!j.is_array()) {
    throw ParseError("field 'labels': expected a list of strings");
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) {
      throw ParseError("field 'labels[" + std::to_string(i) + "]': expected a string");
    }
    labels.push_back(j[i].get<std::string>());
  }
  return labels;
}

void check_version(const Json& doc) {
  const Json& v = field(doc, "format_version");
  if (!v.is_number_integer() || v.get<long long>() != kFormatVersion) {
    throw ParseError("field 'format_version': expected " + std::to_string(kFormatVersion) +
                     ", got " + v.dump());
  }
}

void check_length(std::size_t got, std::size_t want, const char* name) {
  if (got != want) {
    std::ostringstream msg;
    msg << "field '" << name << "': has " << got << " entries, 'labels' has " << want;
    throw ParseError(msg.str());
  }
}

Json real_array(const Eigen::Ref<const Eigen::VectorXd>& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) {
    out.push_back(v[i]);
  }
  return out;
}

}  // namespace

ExponentialFamily parse_family(const std::string& text) {
  const Json doc = parse_json(text);
  check_version(doc);
  std::vector<std::string> labels = label_list(field(doc, "labels"));
  Eigen::VectorXd base = real_list(field(doc, "base"), "base");
  const Json& rows = field(doc, "statistic");
  if (!rows.is_array()) {
    throw ParseError("field 'statistic': expected a list of rows");
  }
  check_length(static_cast<std::size_t>(base.size()), labels.size(), "base");
  check_length(rows.size(), labels.size(), "statistic");
  if (rows.empty()) {
    throw ParseError("field 'labels': support must not be empty");
  }
  const std::size_t d = rows[0].is_array() ? rows[0].size() : 0;
  if (d == 0) {
    throw ParseError("field 'statistic[0]': expected a non-empty list of numbers");
  }
  Eigen::MatrixXd phi(static_cast<Index>(rows.size()), static_cast<Index>(d));
  for (std::size_t y = 0; y < rows.size(); ++y) {
    const std::string where = "statistic[" + std::to_string(y) + "]";
    const Eigen::VectorXd row = real_list(rows[y], where);
    if (static_cast<std::size_t>(row.size()) != d) {
      std::ostringstream msg;
      msg << "field '" << where << "': has " << row.size() << " entries, expected d = " << d;
      throw ParseError(msg.str());
    }
    phi.row(static_cast<Index>(y)) = row.transpose();
  }
  return ExponentialFamily(std::move(labels), std::move(base), std::move(phi));
}

std::string serialize_family(const ExponentialFamily& family) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["labels"] = family.labels();
  doc["base"] = real_array(family.base());
  Json rows = Json::array();
  for (Index y = 0; y < family.support_size(); ++y) {
    rows.push_back(real_array(family.statistic().row(y).transpose()));
  }
  doc["statistic"] = std::move(rows);
  return dump_report(doc);
}

ProblemSpec parse_problem(const std::string& text) {
  const Json doc = parse_json(text);
  check_version(doc);
  ProblemSpec spec;
  spec.labels = label_list(field(doc, "labels"));
  spec.base = real_list(field(doc, "base"), "base");
  spec.reward = real_list(field(doc, "reward"), "reward");
  check_length(static_cast<std::size_t>(spec.base.size()), spec.labels.size(), "base");
  check_length(static_cast<std::size_t>(spec.reward.size()), spec.labels.size(), "reward");
  if (spec.labels.empty()) {
    throw ParseError("field 'labels': support must not be empty");
  }
  if (const auto it = doc.find("beta"); it != doc.end()) {
    spec.beta = real_at(*it, "beta");
  }
  return spec;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string content_digest(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string hex = "sha256:";
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

}  // namespace expfam::cli
