/*
 * Copyright 2026 ctpkit contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ctpkit/alm.hpp"
#include "ctpkit/cq.hpp"
#include "ctpkit/node_table.hpp"
#include "ctpkit/problems.hpp"
#include "ctpkit/run_report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoKkt = 2;
constexpr int kExitIterationCap = 3;
constexpr int kExitUnbounded = 4;

struct CommonOptions {
  std::string problem = "tracking";
  int nodes = 200;
  std::string out;
  std::string format = "json";
  bool timing = false;
};

void emit(const ctp::RunReport& report, const CommonOptions& opts) {
  const std::string text =
      opts.format == "csv" ? ctp::to_csv(report) : ctp::to_json(report);
  if (opts.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(opts.out, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot open '" + opts.out + "' for writing");
  }
  file << text;
  if (!file) {
    throw std::runtime_error("write to '" + opts.out + "' failed");
  }
  std::cout << "report written to " << opts.out << " (status "
            << report.status << ", " << report.iterations.size()
            << " iterations)\n";
}

void reject_odd_nodes(ctp::BuiltinProblemId id, int nodes) {
  if (id == ctp::BuiltinProblemId::example2 && nodes % 2 != 0) {
    throw std::invalid_argument(
        "--nodes must be even for example2: an odd count places a node at "
        "t = 1/2 where its multipliers are singular");
  }
  if (nodes < 1) {
    throw std::invalid_argument("--nodes must be >= 1");
  }
}

int exit_code_for(ctp::SolverStatus status) {
  switch (status) {
    case ctp::SolverStatus::converged_kkt:
      return kExitOk;
    case ctp::SolverStatus::akkt_no_kkt_progress:
    case ctp::SolverStatus::penalty_cap_reached:
      return kExitNoKkt;
    case ctp::SolverStatus::iteration_cap_reached:
      return kExitIterationCap;
    case ctp::SolverStatus::unbounded_below_suspected:
      return kExitUnbounded;
  }
  return kExitUsage;
}

int run_solve(const CommonOptions& opts, const ctp::AlmConfig& base_config) {
  const ctp::BuiltinProblemId id = ctp::parse_problem_id(opts.problem);
  reject_odd_nodes(id, opts.nodes);
  const ctp::CtpProblem problem = ctp::build(id);

  ctp::AlmConfig config = base_config;
  config.initial_trajectory = ctp::Trajectory::zeros(
      ctp::make_uniform_grid(problem.horizon, opts.nodes),
      problem.state_dim);

  const auto start = std::chrono::steady_clock::now();
  const ctp::SolverTrace trace = ctp::solve(problem, config);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  ctp::RunReport report;
  report.command = "solve";
  report.problem = problem.name;
  report.horizon = problem.horizon;
  report.n_nodes = opts.nodes;
  report.status = ctp::to_string(trace.status);
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    const ctp::SolverIterate& iterate = trace.iterates[k];
    report.iterations.push_back(ctp::IterationRow{
        static_cast<int>(k) + 1, iterate.rho, iterate.report,
        iterate.multiplier_sup, iterate.inner_iterations});
  }
  if (!trace.iterates.empty()) {
    report.cq = ctp::diagnose(problem, ctp::export_trace(trace));
  }
  report.notes = trace.notes;
  if (opts.timing) {
    report.wall_time_seconds = wall;
  }

  emit(report, opts);
  std::cerr << "wall time " << wall << " s\n";
  return exit_code_for(trace.status);
}

int run_sequence(const CommonOptions& opts, int k_max) {
  const ctp::BuiltinProblemId id = ctp::parse_problem_id(opts.problem);
  if (id == ctp::BuiltinProblemId::tracking) {
    throw std::invalid_argument(
        "sequence: the tracking problem has no closed-form iterate family; "
        "use example1 or example2");
  }
  reject_odd_nodes(id, opts.nodes);
  if (k_max < 1) {
    throw std::invalid_argument("--k-max must be >= 1");
  }
  const ctp::CtpProblem problem = ctp::build(id);
  const auto grid = ctp::make_uniform_grid(problem.horizon, opts.nodes);

  const auto start = std::chrono::steady_clock::now();
  std::vector<std::pair<ctp::Trajectory, ctp::MultiplierPath>> iterates;
  iterates.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    iterates.push_back(ctp::closed_form_iterate(id, k, grid));
  }
  const std::vector<ctp::ResidualReport> reports =
      ctp::akkt_sequence_report(problem, iterates);
  const ctp::CqReport cq = ctp::diagnose(problem, iterates);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  ctp::RunReport report;
  report.command = "sequence";
  report.problem = problem.name;
  report.horizon = problem.horizon;
  report.n_nodes = opts.nodes;
  report.status = "sequence_evaluated";
  for (int k = 1; k <= k_max; ++k) {
    report.iterations.push_back(ctp::IterationRow{
        k, std::numeric_limits<double>::quiet_NaN(),
        reports[static_cast<std::size_t>(k) - 1],
        iterates[static_cast<std::size_t>(k) - 1].second.sup_norm(), 0});
  }
  report.cq = cq;
  if (id == ctp::BuiltinProblemId::example2) {
    report.notes.push_back(
        "example2 multipliers are unbounded near t = 1/2; sampled values "
        "are finite only because even grids exclude the midpoint");
  }
  if (opts.timing) {
    report.wall_time_seconds = wall;
  }

  emit(report, opts);
  std::cerr << "wall time " << wall << " s\n";
  return kExitOk;
}

int count_rows(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("cannot open '" + path + "'");
  }
  int rows = 0;
  std::string line;
  while (std::getline(file, line)) {
    if (!line.empty()) {
      ++rows;
    }
  }
  return rows;
}

int run_residual(const std::string& problem_name, const std::string& x_path,
                 const std::string& mult_path) {
  const ctp::BuiltinProblemId id = ctp::parse_problem_id(problem_name);
  const ctp::CtpProblem problem = ctp::build(id);

  const int rows = count_rows(x_path);
  if (rows < 1) {
    throw std::runtime_error("'" + x_path + "' contains no node rows");
  }
  const auto grid = ctp::make_uniform_grid(problem.horizon, rows);
  const ctp::Trajectory x(
      grid, ctp::read_node_table(x_path, *grid, problem.state_dim));
  const Eigen::MatrixXd mult_values = ctp::read_node_table(
      mult_path, *grid, problem.eq_count + problem.ineq_count);
  const ctp::MultiplierPath mult(grid,
                                 mult_values.leftCols(problem.eq_count),
                                 mult_values.rightCols(problem.ineq_count));

  const ctp::ResidualReport report = ctp::kkt_residual(problem, x, mult);
  const ctp::StationarityDistance distance =
      ctp::min_kkt_stationarity(problem, x);

  std::cout << "stationarity_l1 " << ctp::format_double(report.stationarity_l1)
            << "\n";
  std::cout << "stationarity_weak_max "
            << ctp::format_double(report.stationarity_weak_max) << "\n";
  std::cout << "comp_sup " << ctp::format_double(report.comp_sup) << "\n";
  std::cout << "comp_l1 " << ctp::format_double(report.comp_l1) << "\n";
  std::cout << "feas_eq_sup " << ctp::format_double(report.feas_eq_sup)
            << "\n";
  std::cout << "feas_ineq_sup " << ctp::format_double(report.feas_ineq_sup)
            << "\n";
  std::cout << "sign_violation " << ctp::format_double(report.sign_violation)
            << "\n";
  std::cout << "min_kkt_stationarity " << ctp::format_double(distance.value)
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ctpkit: solve, measure, and diagnose continuous-time programming "
      "problems"};
  app.require_subcommand(1);

  CommonOptions solve_opts;
  ctp::AlmConfig alm_config;
  double safeguard = alm_config.u_safeguard;
  CLI::App* solve_cmd = app.add_subcommand(
      "solve", "run the augmented Lagrangian solver and diagnostics");
  solve_cmd->add_option("--problem", solve_opts.problem,
                        "problem id: example1, example2, tracking");
  solve_cmd->add_option("--nodes", solve_opts.nodes,
                        "number of midpoint grid nodes");
  solve_cmd->add_option("--tol", alm_config.stop_tol, "stopping tolerance");
  solve_cmd->add_option("--max-outer", alm_config.outer_max,
                        "outer iteration cap");
  solve_cmd->add_option("--rho0", alm_config.rho0, "initial penalty");
  solve_cmd->add_option("--rho-growth", alm_config.rho_growth,
                        "penalty growth factor");
  solve_cmd->add_option("--safeguard", safeguard,
                        "multiplier safeguard bound (both blocks)");
  solve_cmd->add_option("--out", solve_opts.out, "report file path");
  solve_cmd->add_option("--format", solve_opts.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  solve_cmd->add_flag("--timing", solve_opts.timing,
                      "include wall time in the report file");

  CommonOptions seq_opts;
  int k_max = 20;
  CLI::App* seq_cmd = app.add_subcommand(
      "sequence",
      "evaluate residuals along a built-in closed-form iterate family");
  seq_cmd->add_option("--problem", seq_opts.problem,
                      "problem id: example1 or example2");
  seq_cmd->add_option("--k-max", k_max, "largest iterate index");
  seq_cmd->add_option("--nodes", seq_opts.nodes,
                      "number of midpoint grid nodes");
  seq_cmd->add_option("--out", seq_opts.out, "report file path");
  seq_cmd->add_option("--format", seq_opts.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  seq_cmd->add_flag("--timing", seq_opts.timing,
                    "include wall time in the report file");

  std::string residual_problem = "tracking";
  std::string x_path;
  std::string mult_path;
  CLI::App* res_cmd = app.add_subcommand(
      "residual", "evaluate KKT residuals of trajectory/multiplier files");
  res_cmd->add_option("--problem", residual_problem, "problem id");
  res_cmd->add_option("--x", x_path, "trajectory node table")->required();
  res_cmd->add_option("--mult", mult_path, "multiplier node table")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) {
      alm_config.u_safeguard = safeguard;
      alm_config.v_safeguard = safeguard;
      return run_solve(solve_opts, alm_config);
    }
    if (seq_cmd->parsed()) {
      return run_sequence(seq_opts, k_max);
    }
    return run_residual(residual_problem, x_path, mult_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
