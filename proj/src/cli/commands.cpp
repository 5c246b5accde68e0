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
#include "expfam/control.hpp"
#include "expfam/divergences.hpp"
#include "expfam/errors.hpp"
#include "expfam/oracle.hpp"
#include "expfam/projection.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>

namespace expfam::cli {
namespace {

constexpr std::uint64_t kDefaultSeed = 20260101;
constexpr int kDefaultVerifyCount = 100;
constexpr int kDefaultControlCount = 1000;
constexpr double kControlMargin = 1e-10;

using Clock = std::chrono::steady_clock;

Json real_array(const Eigen::Ref<const Eigen::VectorXd>& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) {
    out.push_back(v[i]);
  }
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

std::string join_command(const std::vector<std::string>& args) {
  std::string s = "expfam";
  for (const auto& a : args) {
    s += ' ';
    s += a;
  }
  return s;
}

std::string inline_vector(const Eigen::Ref<const Eigen::VectorXd>& v) {
  std::string s = "[";
  for (Index i = 0; i < v.size(); ++i) {
    if (i > 0) {
      s += ", ";
    }
    s += format_real(v[i]);
  }
  return s + "]";
}

// Shared report header; wall time is appended last by `emit`.
Json report_header(const std::vector<std::string>& args, const std::string& spec_bytes,
                   std::optional<std::uint64_t> seed) {
  Json r;
  r["command"] = join_command(args);
  r["input_digest"] = content_digest(spec_bytes);
  r["seed"] = seed ? Json(*seed) : Json(nullptr);
  return r;
}

void emit(Json& report, Clock::time_point start, const std::string& out_path) {
  report["wall_time_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
  if (out_path.empty()) {
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot write report to '" + out_path + "'");
  }
  f << dump_report(report);
}

Json solve_json(const SolveReport& s) {
  Json j;
  j["verdict"] = to_string(s.verdict);
  j["lambda_star"] = real_array(s.lambda_star.values());
  j["moment_residual"] = s.moment_residual;
  j["objective"] = s.objective;
  j["iterations"] = s.iterations;
  Json trace = Json::array();
  for (const auto& t : s.trace) {
    Json e;
    e["iteration"] = t.iteration;
    e["objective"] = t.objective;
    e["gradient_norm"] = t.gradient_norm;
    e["step_size"] = t.step_size;
    trace.push_back(std::move(e));
  }
  j["trace"] = std::move(trace);
  return j;
}

Json identity_json(const IdentityReport& r) {
  Json j;
  j["relation"] = r.relation == Relation::Equal ? "equal" : "greater_equal";
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["residual"] = r.residual;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  return j;
}

struct Common {
  std::string spec_path;
  std::string out_path;
};

int cmd_eval(const std::vector<std::string>& args, const Common& common,
             const std::vector<double>& lambda_in, std::ostream& out) {
  const auto start = Clock::now();
  const std::string bytes = read_file(common.spec_path);
  const ExponentialFamily family = parse_family(bytes);
  const NaturalParameter lambda =
      lambda_in.empty() ? NaturalParameter::zero(family.dim()) : NaturalParameter(to_vector(lambda_in));

  const double a = log_partition(family, lambda);
  const double z = partition(family, lambda);
  const Distribution p = member(family, lambda);
  const MomentVector mu = moment_map(family, lambda);

  Json report = report_header(args, bytes, std::nullopt);
  Json results;
  results["lambda"] = real_array(lambda.values());
  results["log_partition"] = a;
  results["partition"] = z;
  results["member"] = real_array(p.probs());
  results["moments"] = real_array(mu.values());
  report["results"] = std::move(results);

  out << "log_partition = " << format_real(a) << "\n";
  out << "partition = " << format_real(z) << "\n";
  for (Index y = 0; y < p.size(); ++y) {
    out << "p(" << family.labels()[static_cast<std::size_t>(y)] << ") = " << format_real(p[y])
        << "\n";
  }
  out << "moments = " << inline_vector(mu.values()) << "\n";
  emit(report, start, common.out_path);
  return kExitOk;
}

int cmd_project(const std::vector<std::string>& args, const Common& common,
                const std::vector<double>& mu_in, const std::vector<double>& q_in,
                const SolveOptions& options, std::ostream& out) {
  const auto start = Clock::now();
  const std::string bytes = read_file(common.spec_path);
  const ExponentialFamily family = parse_family(bytes);

  std::optional<Distribution> q;
  MomentVector mu = MomentVector(Eigen::VectorXd::Zero(0));
  if (!q_in.empty()) {
    q.emplace(to_vector(q_in));
    mu = moment_of(family, *q);
  } else {
    mu = MomentVector(to_vector(mu_in));
  }
  const SolveReport solve = moment_match(family, mu, options);

  Json report = report_header(args, bytes, std::nullopt);
  report["mode"] = q ? "q" : "mu";
  report["target_moments"] = real_array(mu.values());
  report["solve"] = solve_json(solve);
  out << "verdict = " << to_string(solve.verdict) << "\n";
  out << "iterations = " << solve.iterations << "\n";
  out << "moment_residual = " << format_real(solve.moment_residual) << "\n";
  out << "lambda_star = " << inline_vector(solve.lambda_star.values()) << "\n";
  if (solve.converged()) {
    const Distribution p = member(family, solve.lambda_star);
    report["distribution"] = real_array(p.probs());
    out << "distribution = " << inline_vector(p.probs()) << "\n";
    if (q) {
      // KL(q || p*), the distance from q to the family.
      const double gap = kl(*q, p);
      report["kl_to_projection"] = gap;
      out << "kl_to_projection = " << format_real(gap) << "\n";
    }
  }
  emit(report, start, common.out_path);
  switch (solve.verdict) {
    case Verdict::Converged:
      return kExitOk;
    case Verdict::InfeasibleBoundary:
      return kExitInfeasible;
    case Verdict::MaxIterations:
      return kExitMaxIterations;
  }
  return kExitMaxIterations;
}

int cmd_control(const std::vector<std::string>& args, const Common& common,
                const std::vector<double>& betas_in, std::uint64_t seed, int count,
                std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const std::string bytes = read_file(common.spec_path);
  const ProblemSpec spec = parse_problem(bytes);
  std::vector<double> betas = betas_in;
  if (betas.empty() && spec.beta) {
    betas.push_back(*spec.beta);
  }
  if (betas.empty()) {
    throw ParseError("no temperature given: set 'beta' in the problem file or pass --beta");
  }
  for (double b : betas) {
    if (!std::isfinite(b) || !(b > 0.0)) {
      err << "error: beta must be positive and finite, got " << format_real(b) << "\n";
      return kExitDimensionError;
    }
  }
  const RewardProblem problem(spec.labels, spec.base, spec.reward, betas.front());
  const std::vector<SweepPoint> sweep = beta_sweep(problem, betas);
  const std::vector<Distribution> competitors =
      oracle::random_simplex(problem.family().support_size(), count, seed);

  Json report = report_header(args, bytes, seed);
  report["competitors"] = count;
  Json results = Json::array();
  bool ok = true;
  for (const SweepPoint& point : sweep) {
    const RewardProblem at = problem.with_beta(point.beta);
    const double at_optimum = objective_eval(at, point.optimum);
    const IdentityReport identity = IdentityReport::equality(
        point.value, at_optimum, Tolerance{0.0, 1e-10}.scaled(std::abs(point.value)));
    double best_competitor = -std::numeric_limits<double>::infinity();
    for (const Distribution& q : competitors) {
      best_competitor = std::max(best_competitor, objective_eval(at, q));
    }
    const double margin = competitors.empty() ? 0.0 : point.value - best_competitor;
    const bool point_ok = identity.pass && margin >= -kControlMargin;
    ok = ok && point_ok;

    Json r;
    r["beta"] = point.beta;
    r["value"] = point.value;
    r["optimum"] = real_array(point.optimum.probs());
    r["objective_at_optimum"] = at_optimum;
    r["identity"] = identity_json(identity);
    r["best_competitor_objective"] = best_competitor;
    r["competitor_margin"] = margin;
    r["pass"] = point_ok;
    results.push_back(std::move(r));

    out << "beta = " << format_real(point.beta) << "  value = " << format_real(point.value)
        << "  margin = " << format_real(margin) << (point_ok ? "  ok" : "  FAIL") << "\n";
    out << "  q* = " << inline_vector(point.optimum.probs()) << "\n";
  }
  report["results"] = std::move(results);
  emit(report, start, common.out_path);
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const std::vector<std::string>& args, const Common& common, std::uint64_t seed,
               int count, std::ostream& out, std::ostream& err) {
  const auto start = Clock::now();
  const std::string bytes = read_file(common.spec_path);
  const ExponentialFamily family = parse_family(bytes);
  if (count == 0) {
    err << "warning: --count 0 runs no checks; the suite passes vacuously\n";
  }
  const auto suite = oracle::VerificationSuite::standard(seed, count);
  const std::vector<oracle::CheckOutcome> outcomes = oracle::run_suite(family, suite);

  Json report = report_header(args, bytes, seed);
  report["count"] = count;
  Json checks = Json::array();
  std::map<std::string, std::pair<int, int>> tally;
  int passed = 0;
  for (const auto& o : outcomes) {
    Json c;
    c["check"] = o.check;
    c["instance"] = o.instance;
    c["instance_seed"] = o.instance_seed;
    const Json fields = identity_json(o.report);
    for (const auto& [k, v] : fields.items()) {
      c[k] = v;
    }
    auto& [ok_count, total] = tally[o.check];
    ++total;
    if (o.report.pass) {
      ++ok_count;
      ++passed;
    } else {
      Json inputs;
      err << "FAIL " << o.check << " instance " << o.instance << " seed " << o.instance_seed
          << " residual " << format_real(o.report.residual) << " tolerance "
          << format_real(o.report.tolerance) << "\n";
      for (const auto& [name, v] : o.inputs) {
        inputs[name] = real_array(v);
        err << "  " << name << " = " << inline_vector(v) << "\n";
      }
      c["inputs"] = std::move(inputs);
    }
    checks.push_back(std::move(c));
  }
  for (const auto& [name, t] : tally) {
    out << name << ": " << t.first << "/" << t.second << "\n";
  }
  const int total = static_cast<int>(outcomes.size());
  out << "checks: " << passed << "/" << total << "\n";
  report["checks"] = std::move(checks);
  report["summary"] = Json{{"passed", passed}, {"total", total}};
  emit(report, start, common.out_path);
  return passed == total ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite exponential family toolkit: evaluators, projections, control, verification",
              "expfam"};
  app.require_subcommand(1);
  Common common;

  std::vector<double> lambda;
  auto* eval = app.add_subcommand("eval", "Evaluate A, Z, p and mu at a natural parameter");
  eval->add_option("--spec", common.spec_path, "Family specification file")->required();
  eval->add_option("--lambda", lambda, "Natural parameter (comma-separated)")->delimiter(',');
  eval->add_option("--out", common.out_path, "Write the JSON report here");

  std::vector<double> mu;
  std::vector<double> q;
  SolveOptions options;
  auto* project = app.add_subcommand("project", "Moment matching / (reverse) I-projection");
  project->add_option("--spec", common.spec_path, "Family specification file")->required();
  auto* mu_opt = project->add_option("--mu", mu, "Target moments (comma-separated)")->delimiter(',');
  auto* q_opt =
      project->add_option("--q", q, "Distribution to project onto the family")->delimiter(',');
  mu_opt->excludes(q_opt);
  project->add_option("--tol-moment", options.tol_moment, "Relative moment tolerance");
  project->add_option("--max-iter", options.max_iter, "Newton iteration cap");
  project->add_option("--out", common.out_path, "Write the JSON report here");

  std::vector<double> betas;
  std::uint64_t seed = kDefaultSeed;
  int control_count = kDefaultControlCount;
  auto* control = app.add_subcommand("control", "KL-regularized reward maximization");
  control->add_option("--spec", common.spec_path, "Reward problem file")->required();
  control->add_option("--beta", betas, "Temperature (repeat for a sweep)")->delimiter(',');
  control->add_option("--seed", seed, "Seed for the random competitors");
  control->add_option("--count", control_count, "Number of random competitors")
      ->check(CLI::NonNegativeNumber);
  control->add_option("--out", common.out_path, "Write the JSON report here");

  int verify_count = kDefaultVerifyCount;
  auto* verify = app.add_subcommand("verify", "Run the identity verification suite");
  verify->add_option("--spec", common.spec_path, "Family specification file")->required();
  verify->add_option("--seed", seed, "Suite seed");
  verify->add_option("--count", verify_count, "Instances per check")->check(CLI::NonNegativeNumber);
  verify->add_option("--out", common.out_path, "Write the JSON report here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitParseError;
  }

  try {
    if (*eval) {
      return cmd_eval(args, common, lambda, out);
    }
    if (*project) {
      if (mu.empty() && q.empty()) {
        err << "usage error: project needs --mu or --q\n";
        return kExitParseError;
      }
      return cmd_project(args, common, mu, q, options, out);
    }
    if (*control) {
      return cmd_control(args, common, betas, seed, control_count, out, err);
    }
    return cmd_verify(args, common, seed, verify_count, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << common.spec_path << ": " << e.what() << "\n";
    return kExitParseError;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidationError;
  } catch (const ContractViolation& e) {
    err << "dimension error: " << e.what() << "\n";
    return kExitDimensionError;
  }
}

}  // namespace expfam::cli
