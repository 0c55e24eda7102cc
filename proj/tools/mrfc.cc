// Copyright 2026 The MRFC Authors
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


// mrfc: generate networks, run the Newton or subgradient solver, and check
// invariants. Exit codes: 0 success, 1 convergence failure, 2 invalid input,
// 3 internal invariant violation.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mrfc/errors.hpp"
#include "mrfc/generator.hpp"
#include "mrfc/network_io.hpp"
#include "mrfc/objective.hpp"
#include "mrfc/solver.hpp"
#include "mrfc/subgradient.hpp"
#include "mrfc/trace_io.hpp"
#include "mrfc/validation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitInvalidInput = 2;
constexpr int kExitInvariant = 3;

struct GeneratorFlags {
  mrfc::GeneratorParams params;

  void attach(CLI::App* cmd) {
    cmd->add_option("--nodes", params.nodes, "Number of nodes")->capture_default_str();
    cmd->add_option("--sessions", params.sessions, "Number of sessions")
        ->capture_default_str();
    cmd->add_option("--seed", params.seed, "Generator seed")->capture_default_str();
    cmd->add_option("--region", params.region, "Side of the square region, meters")
        ->capture_default_str();
    cmd->add_option("--link-range", params.link_range, "Maximum link length, meters")
        ->capture_default_str();
    cmd->add_option("--power", params.power, "Transmit power, watts")->capture_default_str();
    cmd->add_option("--path-loss", params.path_loss, "Path-loss exponent")
        ->capture_default_str();
    cmd->add_option("--noise", params.noise, "Noise power, watts")->capture_default_str();
  }
};

// Every run-config key as an optional flag of the same name ('-' for '_').
struct ConfigFlags {
  std::optional<std::string> config_file;
  std::vector<std::pair<std::string, std::optional<double>>> numbers{
      {"alpha", {}},       {"inner_tol", {}},   {"inner_reduction", {}},
      {"t0", {}},          {"mu", {}},          {"gap_tol", {}},
      {"eps_lambda", {}},  {"eta", {}},         {"sigma", {}},
      {"beta", {}},        {"fraction_to_boundary", {}},
      {"init_rate", {}},   {"sg_step_a", {}},   {"sg_step_b", {}},
      {"sg_initial_price", {}}, {"sg_s_max", {}}, {"sg_rel_tol", {}}};
  std::vector<std::pair<std::string, std::optional<int>>> integers{
      {"max_inner", {}},        {"max_newton_per_stage", {}}, {"max_iterations", {}},
      {"fixed_iterations", {}}, {"sg_max_iterations", {}},    {"sg_window", {}},
      {"sg_record_every", {}}};
  std::optional<std::string> mode;
  bool sg_constant_step = false;

  static std::string flag(const std::string& key) {
    std::string f = "--" + key;
    for (char& c : f)
      if (c == '_') c = '-';
    return f;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_file, "JSON run configuration; flags override it");
    for (auto& [key, value] : numbers) cmd->add_option(flag(key), value);
    for (auto& [key, value] : integers) cmd->add_option(flag(key), value);
    cmd->add_option("--mode", mode, "distributed or centralized");
    cmd->add_flag("--sg-constant-step", sg_constant_step, "Constant subgradient step");
  }

  mrfc::RunConfig resolve() const {
    mrfc::RunConfig base;
    if (config_file) base = mrfc::read_run_config(*config_file);
    json overrides = json::object();
    for (const auto& [key, value] : numbers)
      if (value) overrides[key] = *value;
    for (const auto& [key, value] : integers)
      if (value) overrides[key] = *value;
    if (mode) overrides["mode"] = *mode;
    if (sg_constant_step) overrides["sg_constant_step"] = true;
    return mrfc::run_config_from_json(overrides, base);
  }
};

struct InstanceSource {
  std::optional<std::string> input;
  GeneratorFlags generator;

  void attach(CLI::App* cmd) {
    cmd->add_option("--input", input, "Network file; without it one is generated");
    generator.attach(cmd);
  }

  mrfc::Instance load() const {
    if (input) return mrfc::read_instance(*input);
    return mrfc::generate_random_network(generator.params).instance;
  }
};

int run_generate(const GeneratorFlags& flags, int count, const std::string& out) {
  flags.params.validate();
  if (count < 1) throw mrfc::InvalidInputError("--count must be >= 1");
  // Build everything first so a failing seed leaves no files behind.
  std::vector<std::pair<fs::path, std::string>> files;
  for (int k = 0; k < count; ++k) {
    mrfc::GeneratorParams p = flags.params;
    p.seed = flags.params.seed + static_cast<std::uint64_t>(k);
    const mrfc::GeneratedInstance g = mrfc::generate_random_network(p);
    const fs::path path = count == 1 ? fs::path(out)
                                     : fs::path(out) / ("network_seed" +
                                                        std::to_string(p.seed) + ".json");
    files.push_back({path, mrfc::instance_to_json(g.instance).dump(2) + "\n"});
  }
  if (count > 1) fs::create_directories(out);
  for (const auto& [path, content] : files) mrfc::write_file_atomically(path, content);
  std::printf("wrote %d network file%s\n", count, count == 1 ? "" : "s");
  return 0;
}

int run_solve(const mrfc::Instance& instance, const mrfc::RunConfig& config,
              const std::string& solver, const std::string& out) {
  const bool newton = solver == "newton" || solver == "both";
  const bool subgradient = solver == "subgradient" || solver == "both";
  if (!newton && !subgradient)
    throw mrfc::InvalidInputError("--solver must be newton, subgradient or both");

  std::vector<std::pair<fs::path, std::string>> files;
  json summary = {{"solver", solver}};
  double newton_utility = 0.0;
  double newton_bound = 0.0;
  int newton_iterations = 0;
  if (newton) {
    const mrfc::SolveResult r = mrfc::barrier_solve(instance, config.solver);
    newton_utility = mrfc::total_utility(instance, r.solution.y.rates());
    newton_iterations = r.solution.iterations;
    // The barrier's duality bound: the optimum is at most U + m / t.
    newton_bound = newton_utility + mrfc::inequality_count(instance) / r.solution.t;
    files.push_back({fs::path(out) / "newton_trace.csv", mrfc::trace_to_csv(r.trace)});
    files.push_back({fs::path(out) / "newton_solution.json",
                     mrfc::solution_to_json(instance, r.solution, "converged").dump(2) + "\n"});
    summary["newton"] = {{"iterations", newton_iterations},
                         {"stages", r.solution.stages},
                         {"utility", newton_utility},
                         {"lambda", r.solution.decrement},
                         {"t", r.solution.t},
                         {"upper_bound", newton_bound},
                         {"locality_violations", r.locality.violations.size()}};
    std::printf("newton: %d iterations, %d stages, utility %.10g, lambda %.3g\n",
                newton_iterations, r.solution.stages, newton_utility, r.solution.decrement);
  }
  if (subgradient) {
    mrfc::SubgradientConfig sg = config.subgradient;
    // In comparison mode the subgradient run stops once its dual value
    // certifies the same accuracy as the Newton run's bound.
    if (newton) sg.target_dual = newton_bound;
    const mrfc::SubgradientResult r = mrfc::subgradient_solve(instance, sg);
    files.push_back({fs::path(out) / "subgradient_trace.csv", mrfc::trace_to_csv(r.trace)});
    files.push_back({fs::path(out) / "subgradient_solution.json",
                     mrfc::subgradient_solution_to_json(instance, r).dump(2) + "\n"});
    const bool reached = !sg.target_dual || r.best_dual <= *sg.target_dual;
    summary["subgradient"] = {{"iterations", r.iterations},
                              {"best_dual", r.best_dual},
                              {"best_iteration", r.best_iteration},
                              {"reached_target", reached}};
    std::printf("subgradient: %d iterations, best dual %.10g%s\n", r.iterations, r.best_dual,
                reached ? "" : " (iteration cap reached before the target)");
    if (newton) {
      const double ratio = static_cast<double>(r.iterations) / newton_iterations;
      summary["comparison"] = {
          {"target_dual", newton_bound},
          {"newton_iterations", newton_iterations},
          {"subgradient_iterations", r.iterations},
          {"ratio", ratio},
          {"ratio_is_lower_bound", !reached},
          {"utility_relative_difference",
           std::abs(r.best_dual - newton_utility) / std::max(1.0, std::abs(newton_utility))}};
      std::printf("ratio subgradient/newton: %s%.1f\n", reached ? "" : ">= ", ratio);
    }
  }
  summary["config"] = mrfc::run_config_to_json(config);
  files.push_back({fs::path(out) / "summary.json", summary.dump(2) + "\n"});
  fs::create_directories(out);
  for (const auto& [path, content] : files) mrfc::write_file_atomically(path, content);
  return 0;
}

int run_validate(const mrfc::Instance& instance, const mrfc::RunConfig& config,
                 std::uint64_t seed, int points) {
  mrfc::ValidationOptions opt;
  opt.alpha = config.solver.split.alpha;
  opt.t = config.solver.barrier.t;
  opt.seed = seed;
  opt.random_points = points;
  int failed = 0;
  for (const mrfc::CheckResult& r : mrfc::validate_instance(instance, opt)) {
    std::printf("%s %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    if (!r.passed) ++failed;
  }
  if (failed > 0) {
    std::printf("%d check%s failed\n", failed, failed == 1 ? "" : "s");
    return kExitInvariant;
  }
  std::printf("all checks passed\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint multi-path routing and rate control solvers"};
  app.require_subcommand(1);

  GeneratorFlags gen_flags;
  int gen_count = 1;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("generate", "Write random network files");
  gen_flags.attach(gen);
  gen->add_option("--count", gen_count, "Number of consecutive seeds (batch mode)")
      ->capture_default_str();
  gen->add_option("--out", gen_out, "Output file, or directory when --count > 1")
      ->required();

  InstanceSource solve_src;
  ConfigFlags solve_cfg;
  std::string solver = "newton";
  std::string solve_out = "mrfc_out";
  CLI::App* solve = app.add_subcommand("solve", "Run a solver and write traces");
  solve_src.attach(solve);
  solve_cfg.attach(solve);
  solve->add_option("--solver", solver, "newton, subgradient or both")->capture_default_str();
  solve->add_option("--out", solve_out, "Output directory")->capture_default_str();

  InstanceSource val_src;
  ConfigFlags val_cfg;
  int val_points = 20;
  CLI::App* val = app.add_subcommand("validate", "Run the invariant checks on an instance");
  val_src.attach(val);
  val_cfg.attach(val);
  val->add_option("--points", val_points, "Random interior points per check")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalidInput;
  }

  try {
    if (*gen) return run_generate(gen_flags, gen_count, gen_out);
    if (*solve) {
      const mrfc::RunConfig config = solve_cfg.resolve();
      return run_solve(solve_src.load(), config, solver, solve_out);
    }
    if (*val) {
      const mrfc::RunConfig config = val_cfg.resolve();
      return run_validate(val_src.load(), config, val_src.generator.params.seed, val_points);
    }
  } catch (const mrfc::Error& e) {
    const char* kind = e.kind() == mrfc::ErrorKind::kConvergence    ? "convergence failure"
                       : e.kind() == mrfc::ErrorKind::kInvalidInput ? "invalid input"
                                                                    : "invariant violation";
    std::fprintf(stderr, "mrfc: %s: %s\n", kind, e.what());
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mrfc: invariant violation: %s\n", e.what());
    return kExitInvariant;
  }
  return kExitInvariant;
}
