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

#include "expfam/cli/commands.hpp"
#include "expfam/cli/report.hpp"
#include "expfam/cli/spec_io.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace expfam;
using namespace expfam::cli;
using namespace expfam::testing;

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "expfam_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch(name);
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

const char* kTwoPoint = R"({"format_version": 1, "labels": ["a", "b"], "base": [0.5, 0.5],
  "statistic": [[1, 0], [0, 1]]})";

const char* kLine = R"({"format_version": 1, "labels": ["lo", "mid", "hi"],
  "base": [0.25, 0.5, 0.25], "statistic": [[0], [1], [2]]})";

Json load(const std::string& path) {
  std::ifstream in(path);
  return Json::parse(in);
}

std::string strip_wall_time(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string kept;
  while (std::getline(in, line)) {
    if (line.find("\"wall_time_seconds\"") == std::string::npos) {
      kept += line + "\n";
    }
  }
  return kept;
}

}  // namespace

TEST_CASE("format_real") {
  CHECK(format_real(0.5) == "5.0000000000000000e-01");
  CHECK(format_real(INFINITY) == "inf");
  CHECK(format_real(-INFINITY) == "-inf");
  CHECK(format_real(NAN) == "nan");
  for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.2250738585072014e-308, 0.0}) {
    CHECK(std::stod(format_real(x)) == x);
  }
}

TEST_CASE("dump_report writes every real in full precision") {
  Json j;
  j["x"] = 0.1;
  j["v"] = Json::array({1.0, 2.0});
  j["n"] = 3;
  j["bad"] = NAN;
  const std::string s = dump_report(j);
  CHECK(s.find("1.0000000000000001e-01") != std::string::npos);
  CHECK(s.find("[1.0000000000000000e+00, 2.0000000000000000e+00]") != std::string::npos);
  CHECK(s.find("\"n\": 3") != std::string::npos);
  CHECK(s.find("\"bad\": \"nan\"") != std::string::npos);
  CHECK(s.back() == '\n');
  CHECK(Json::parse(s)["x"].get<double>() == 0.1);
}

TEST_CASE("family spec round trip") {
  const ExponentialFamily fam = parse_family(kLine);
  CHECK(fam.support_size() == 3);
  CHECK(fam.dim() == 1);
  const std::string once = serialize_family(fam);
  const ExponentialFamily again = parse_family(once);
  CHECK(again == fam);
  CHECK(serialize_family(again) == once);

  const ExponentialFamily odd(labels(3), vec({0.1, 0.2, 0.7}), Eigen::MatrixXd::Random(3, 4));
  CHECK(parse_family(serialize_family(odd)) == odd);
}

TEST_CASE("parse errors name the line or field") {
  try {
    parse_family("{\n  \"format_version\": 1,\n  \"labels\": [\"a\" \"b\"]\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  try {
    parse_family(R"({"format_version": 1, "labels": ["a", "b"], "base": [0.5, 0.5],
      "statistic": [[1, 0], [0]]})");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("statistic[1]") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_family(R"({"format_version": 2, "labels": [], "base": [], "statistic": []})"),
                  ParseError);
  CHECK_THROWS_AS(parse_family(R"({"format_version": 1, "labels": ["a"], "base": [1.0, 0.0],
      "statistic": [[1]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_family(R"({"format_version": 1, "labels": ["a"], "base": ["x"],
      "statistic": [[1]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_family("[1, 2]"), ParseError);
}

TEST_CASE("problem spec") {
  const ProblemSpec spec = parse_problem(R"({"format_version": 1, "labels": ["x", "y"],
    "base": [0.5, 0.5], "reward": [1, 0], "beta": 0.25})");
  CHECK(spec.reward[0] == 1.0);
  REQUIRE(spec.beta.has_value());
  CHECK(*spec.beta == 0.25);
  CHECK_FALSE(parse_problem(R"({"format_version": 1, "labels": ["x"], "base": [1], "reward": [3]})")
                  .beta.has_value());
  CHECK_THROWS_AS(parse_problem(R"({"format_version": 1, "labels": ["x"], "base": [1], "reward": [3, 4]})"),
                  ParseError);
}

TEST_CASE("content digest") {
  CHECK(content_digest("") ==
        "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(content_digest("abc") ==
        "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("eval") {
  const std::string spec = write("two.json", kTwoPoint);
  const std::string out = scratch("eval.json").string();
  const Outcome zero = invoke({"eval", "--spec", spec, "--out", out});
  CHECK(zero.code == kExitOk);
  Json r = load(out);
  CHECK(r["results"]["log_partition"].get<double>() == 0.0);
  CHECK(r["results"]["member"][0].get<double>() == 0.5);
  CHECK(r["input_digest"].get<std::string>().rfind("sha256:", 0) == 0);

  const Outcome shifted = invoke({"eval", "--spec", spec, "--lambda", "0.6931471805599453,0", "--out", out});
  CHECK(shifted.code == kExitOk);
  r = load(out);
  CHECK(r["results"]["log_partition"].get<double>() == doctest::Approx(std::log(1.5)).epsilon(1e-15));
  CHECK(r["results"]["member"][0].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(r["results"]["member"][1].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  CHECK(invoke({"eval", "--spec", spec, "--lambda", "1,2,3"}).code == kExitDimensionError);
}

TEST_CASE("error exit codes") {
  const std::string broken = write("broken.json", "{\"format_version\": 1,\n \"labels\": [");
  const Outcome parse = invoke({"eval", "--spec", broken});
  CHECK(parse.code == kExitParseError);
  CHECK(parse.err.find("line 2") != std::string::npos);

  const std::string negative = write("negative.json", R"({"format_version": 1, "labels": ["a", "b"],
    "base": [1.5, -0.5], "statistic": [[0], [1]]})");
  CHECK(invoke({"eval", "--spec", negative}).code == kExitValidationError);
  const Outcome verify = invoke({"verify", "--spec", negative});
  CHECK(verify.code == kExitValidationError);
  CHECK(verify.out.find("checks:") == std::string::npos);

  CHECK(invoke({"eval", "--spec", scratch("missing.json").string()}).code == kExitParseError);
  CHECK(invoke({"frobnicate"}).code == kExitParseError);
  CHECK(invoke({"eval"}).code == kExitParseError);
  CHECK(invoke({"--help"}).code == kExitOk);
}

TEST_CASE("project") {
  const std::string spec = write("line.json", kLine);
  const std::string out = scratch("project.json").string();

  const Outcome base = invoke({"project", "--spec", spec, "--mu", "1", "--out", out});
  CHECK(base.code == kExitOk);
  Json r = load(out);
  CHECK(r["solve"]["verdict"] == "Converged");
  CHECK(std::abs(r["solve"]["lambda_star"][0].get<double>()) <= 1e-10);

  CHECK(invoke({"project", "--spec", spec, "--mu", "2"}).code == kExitInfeasible);
  CHECK(invoke({"project", "--spec", spec, "--mu", "1.7", "--max-iter", "1"}).code == kExitMaxIterations);

  // q is the member at lambda = 1.
  const double e = std::exp(1.0);
  const double z = 0.25 + 0.5 * e + 0.25 * e * e;
  const std::string q = format_real(0.25 / z) + "," + format_real(0.5 * e / z) + "," +
                        format_real(0.25 * e * e / z);
  const Outcome member_q = invoke({"project", "--spec", spec, "--q", q, "--out", out});
  CHECK(member_q.code == kExitOk);
  r = load(out);
  CHECK(r["kl_to_projection"].get<double>() <= 1e-10);
  CHECK(r["solve"]["lambda_star"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-8));

  CHECK(invoke({"project", "--spec", spec, "--mu", "1", "--q", "0.2,0.5,0.3"}).code == kExitParseError);
  CHECK(invoke({"project", "--spec", spec}).code == kExitParseError);
  CHECK(invoke({"project", "--spec", spec, "--mu", "1,1"}).code == kExitDimensionError);
}

TEST_CASE("control") {
  const std::string spec = write("reward.json", R"({"format_version": 1, "labels": ["l", "r"],
    "base": [0.5, 0.5], "reward": [1, 0], "beta": 1})");
  const std::string out = scratch("control.json").string();
  const Outcome res = invoke({"control", "--spec", spec, "--out", out});
  CHECK(res.code == kExitOk);
  Json r = load(out);
  REQUIRE(r["results"].size() == 1);
  CHECK(r["results"][0]["optimum"][0].get<double>() == doctest::Approx(0.7310585786300049).epsilon(1e-15));
  CHECK(r["results"][0]["competitor_margin"].get<double>() >= -1e-10);
  CHECK(r["results"][0]["identity"]["pass"].get<bool>());

  const Outcome sweep = invoke({"control", "--spec", spec, "--beta", "0.5", "--beta", "2,4", "--out", out});
  CHECK(sweep.code == kExitOk);
  CHECK(load(out)["results"].size() == 3);

  const std::string flat = write("flat.json", R"({"format_version": 1, "labels": ["l", "m", "r"],
    "base": [0.2, 0.3, 0.5], "reward": [2, 2, 2]})");
  CHECK(invoke({"control", "--spec", flat, "--beta", "0.1,10", "--out", out}).code == kExitOk);
  for (const auto& point : load(out)["results"]) {
    CHECK(point["optimum"][2].get<double>() == doctest::Approx(0.5).epsilon(1e-14));
  }

  CHECK(invoke({"control", "--spec", spec, "--beta", "0"}).code == kExitDimensionError);
  CHECK(invoke({"control", "--spec", spec, "--beta=-1"}).code == kExitDimensionError);
  CHECK(invoke({"control", "--spec", flat}).code == kExitParseError);
}

TEST_CASE("verify") {
  const std::string spec = write("verify_spec.json", kLine);
  const std::string path = scratch("verify.json").string();
  const std::vector<std::string> args{"verify", "--spec", spec, "--seed", "5", "--count", "10",
                                      "--out", path};
  const Outcome first = invoke(args);
  CHECK(first.code == kExitOk);
  CHECK(first.out.find("checks: 150/150") != std::string::npos);
  const std::string a = read_file(path);
  CHECK(invoke(args).code == kExitOk);
  const std::string b = read_file(path);
  CHECK(a != b);  // wall time differs
  CHECK(strip_wall_time(a) == strip_wall_time(b));
  CHECK(load(path)["seed"].get<std::uint64_t>() == 5);

  const Outcome empty = invoke({"verify", "--spec", spec, "--count", "0"});
  CHECK(empty.code == kExitOk);
  CHECK(empty.err.find("warning") != std::string::npos);
  CHECK(empty.out.find("checks: 0/0") != std::string::npos);
}
