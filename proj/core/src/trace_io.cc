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

#include "mrfc/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mrfc/errors.hpp"
#include "mrfc/network_io.hpp"

namespace mrfc {

using nlohmann::json;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string trace_to_csv(const RunTrace& trace) {
  std::string out = std::string(kTraceHeader) + "\n" + kTraceColumns + "\n";
  for (const IterationRecord& r : trace.records) {
    out += std::to_string(r.iteration) + "," + std::to_string(r.stage) + "," + num(r.t) +
           "," + num(r.objective) + "," + num(r.utility) + "," + num(r.decrement) + "," +
           num(r.step) + "," + std::to_string(r.inner_iterations) + "," +
           num(r.balance_residual) + "," + num(r.min_slack) + "\n";
  }
  return out;
}

void write_trace(const std::filesystem::path& path, const RunTrace& trace) {
  write_file_atomically(path, trace_to_csv(trace));
}

std::string dual_trace_to_csv(std::span<const double> residuals, double alpha) {
  std::string out = "# mrfc-dual-trace v1\niteration,residual,alpha\n";
  for (std::size_t i = 0; i < residuals.size(); ++i)
    out += std::to_string(i + 1) + "," + num(residuals[i]) + "," + num(alpha) + "\n";
  return out;
}

namespace {

json flows_json(const Instance& instance, const PrimalPoint& y) {
  json x = json::array();
  for (int l = 0; l < instance.link_count(); ++l) {
    const auto flows = y.link_flows(l);
    x.push_back(std::vector<double>(flows.begin(), flows.end()));
  }
  return x;
}

}  // namespace

json solution_to_json(const Instance& instance, const Solution& solution,
                      const std::string& status) {
  json w = json::array();
  for (int n = 0; n < instance.node_count(); ++n) {
    std::vector<double> row(instance.session_count());
    for (int f = 0; f < instance.session_count(); ++f) row[f] = solution.w(n, f);
    w.push_back(row);
  }
  return json{{"format", "mrfc-solution"},
              {"version", 1},
              {"solver", "newton"},
              {"status", status},
              {"s", std::vector<double>(solution.y.rates().begin(),
                                        solution.y.rates().end())},
              {"x", flows_json(instance, solution.y)},
              {"w", std::move(w)},
              {"lambda", solution.decrement},
              {"t", solution.t},
              {"iterations", solution.iterations},
              {"stages", solution.stages},
              {"utility", total_utility(instance, solution.y.rates())}};
}

json subgradient_solution_to_json(const Instance& instance,
                                  const SubgradientResult& result) {
  const int sessions = instance.session_count();
  json u = json::array();
  for (int n = 0; n < instance.node_count(); ++n)
    u.push_back(std::vector<double>(result.u.begin() + n * sessions,
                                    result.u.begin() + (n + 1) * sessions));
  bool positive = true;
  for (double s : result.average.rates()) positive = positive && s > 0.0;
  return json{{"format", "mrfc-solution"},
              {"version", 1},
              {"solver", "subgradient"},
              {"status", "finished"},
              {"s", std::vector<double>(result.average.rates().begin(),
                                        result.average.rates().end())},
              {"x", flows_json(instance, result.average)},
              {"u", std::move(u)},
              {"iterations", result.iterations},
              {"best_dual", result.best_dual},
              {"utility", positive ? json(total_utility(instance, result.average.rates()))
                                   : json(nullptr)}};
}

namespace {

template <typename T>
void take(const json& doc, const char* key, T& target) {
  auto it = doc.find(key);
  if (it == doc.end()) return;
  try {
    target = it->get<T>();
  } catch (const json::exception&) {
    throw InvalidInputError(std::string("config: key \"") + key + "\" has the wrong type");
  }
}

}  // namespace

RunConfig run_config_from_json(const json& doc, RunConfig base) {
  if (!doc.is_object()) throw InvalidInputError("config: top level must be an object");
  reject_unknown_keys(
      doc,
      {"alpha", "inner_tol", "max_inner", "inner_reduction", "t0", "mu", "gap_tol", "eps_lambda", "eta",
       "sigma", "beta", "fraction_to_boundary", "max_newton_per_stage", "max_iterations",
       "fixed_iterations", "mode", "init_rate", "sg_step_a", "sg_step_b",
       "sg_constant_step", "sg_initial_price", "sg_s_max", "sg_max_iterations",
       "sg_rel_tol", "sg_window", "sg_record_every"},
      "config");
  SolverConfig& s = base.solver;
  take(doc, "alpha", s.split.alpha);
  take(doc, "inner_tol", s.split.inner_tol);
  take(doc, "max_inner", s.split.max_inner);
  take(doc, "inner_reduction", s.split.reduction);
  take(doc, "t0", s.barrier.t);
  take(doc, "mu", s.barrier.mu);
  take(doc, "gap_tol", s.barrier.gap_tol);
  take(doc, "eps_lambda", s.eps_lambda);
  take(doc, "eta", s.line_search.eta);
  take(doc, "sigma", s.line_search.sigma);
  take(doc, "beta", s.line_search.beta);
  take(doc, "fraction_to_boundary", s.line_search.fraction_to_boundary);
  take(doc, "max_newton_per_stage", s.max_newton_per_stage);
  take(doc, "max_iterations", s.max_iterations);
  take(doc, "fixed_iterations", s.fixed_iterations);
  take(doc, "init_rate", s.init_rate);
  if (doc.contains("mode")) {
    std::string mode;
    take(doc, "mode", mode);
    if (mode == "distributed") s.mode = ExecutionMode::kDistributed;
    else if (mode == "centralized") s.mode = ExecutionMode::kCentralized;
    else throw InvalidInputError("config: mode must be distributed or centralized");
  }
  SubgradientConfig& g = base.subgradient;
  take(doc, "sg_step_a", g.step_a);
  take(doc, "sg_step_b", g.step_b);
  take(doc, "sg_constant_step", g.constant_step);
  take(doc, "sg_initial_price", g.initial_price);
  take(doc, "sg_s_max", g.s_max);
  take(doc, "sg_max_iterations", g.max_iterations);
  take(doc, "sg_rel_tol", g.rel_tol);
  take(doc, "sg_window", g.window);
  take(doc, "sg_record_every", g.record_every);
  s.validate();
  g.validate();
  return base;
}

json run_config_to_json(const RunConfig& c) {
  const SolverConfig& s = c.solver;
  const SubgradientConfig& g = c.subgradient;
  return json{{"alpha", s.split.alpha},
              {"inner_tol", s.split.inner_tol},
              {"max_inner", s.split.max_inner},
              {"inner_reduction", s.split.reduction},
              {"t0", s.barrier.t},
              {"mu", s.barrier.mu},
              {"gap_tol", s.barrier.gap_tol},
              {"eps_lambda", s.eps_lambda},
              {"eta", s.line_search.eta},
              {"sigma", s.line_search.sigma},
              {"beta", s.line_search.beta},
              {"fraction_to_boundary", s.line_search.fraction_to_boundary},
              {"max_newton_per_stage", s.max_newton_per_stage},
              {"max_iterations", s.max_iterations},
              {"fixed_iterations", s.fixed_iterations},
              {"mode", s.mode == ExecutionMode::kDistributed ? "distributed" : "centralized"},
              {"init_rate", s.init_rate},
              {"sg_step_a", g.step_a},
              {"sg_step_b", g.step_b},
              {"sg_constant_step", g.constant_step},
              {"sg_initial_price", g.initial_price},
              {"sg_s_max", g.s_max},
              {"sg_max_iterations", g.max_iterations},
              {"sg_rel_tol", g.rel_tol},
              {"sg_window", g.window},
              {"sg_record_every", g.record_every}};
}

RunConfig read_run_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInputError(path.string() + ": " + e.what());
  }
  return run_config_from_json(doc, std::move(base));
}

}  // namespace mrfc
