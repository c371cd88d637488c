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

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ctpkit/node_table.hpp"
#include "ctpkit/problems.hpp"
#include "ctpkit/run_report.hpp"

using namespace ctp;

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
  std::string errors;
};

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  std::ostringstream out;
  out << file.rdbuf();
  return out.str();
}

CommandResult run_cli(const std::string& args) {
  static int invocation = 0;
  ++invocation;
  const std::string out_path =
      temp_path("ctpkit_cli_out_" + std::to_string(invocation) + ".txt");
  const std::string err_path =
      temp_path("ctpkit_cli_err_" + std::to_string(invocation) + ".txt");
  const std::string command = std::string(CTPKIT_CLI_PATH) + " " + args +
                              " > " + out_path + " 2> " + err_path;
  const int raw = std::system(command.c_str());
  CommandResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  result.output = read_file(out_path);
  result.errors = read_file(err_path);
  std::filesystem::remove(out_path);
  std::filesystem::remove(err_path);
  return result;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

TEST_SUITE("cli_solve") {
  TEST_CASE("well-behaved problem exits zero with a certified report") {
    const std::string report_path = temp_path("ctpkit_solve_tracking.json");
    const CommandResult result = run_cli(
        "solve --problem tracking --nodes 80 --out " + report_path);
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("report written to") != std::string::npos);

    const RunReport report = parse_json(read_file(report_path));
    CHECK(report.command == "solve");
    CHECK(report.problem == "tracking");
    CHECK(report.n_nodes == 80);
    CHECK(report.status == "converged_kkt");
    REQUIRE(!report.iterations.empty());
    CHECK(report.iterations.back().report.stationarity_l1 <= 1e-6);
    CHECK(report.iterations.back().report.feas_ineq_sup <= 1e-6);
    REQUIRE(report.cq.has_value());
    CHECK(report.cq->promotion_certified);
    CHECK(!report.wall_time_seconds.has_value());
    std::filesystem::remove(report_path);
  }

  TEST_CASE("asymptotic-only problem exits two") {
    const std::string report_path = temp_path("ctpkit_solve_example2.json");
    const CommandResult result = run_cli(
        "solve --problem example2 --nodes 40 --out " + report_path);
    CHECK(result.exit_code == 2);
    const RunReport report = parse_json(read_file(report_path));
    CHECK((report.status == "akkt_no_kkt_progress" ||
           report.status == "penalty_cap_reached"));
    REQUIRE(report.cq.has_value());
    CHECK(!report.cq->promotion_certified);
    std::filesystem::remove(report_path);
  }

  TEST_CASE("unbounded inner problem exits four with an empty table") {
    const CommandResult result = run_cli("solve --problem example1");
    CHECK(result.exit_code == 4);
    const RunReport report = parse_json(result.output);
    CHECK(report.status == "unbounded_below_suspected");
    CHECK(report.iterations.empty());
    CHECK(!report.cq.has_value());
    REQUIRE(!report.notes.empty());
    CHECK(report.notes.front().find("below -1e12") != std::string::npos);
  }

  TEST_CASE("timing flag adds wall time to the report file") {
    const std::string report_path = temp_path("ctpkit_solve_timing.json");
    const CommandResult result = run_cli(
        "solve --problem tracking --nodes 20 --timing --out " + report_path);
    CHECK(result.exit_code == 0);
    const RunReport report = parse_json(read_file(report_path));
    REQUIRE(report.wall_time_seconds.has_value());
    CHECK(*report.wall_time_seconds >= 0.0);
    std::filesystem::remove(report_path);
  }

  TEST_CASE("csv format renders the metadata header") {
    const std::string report_path = temp_path("ctpkit_solve_tracking.csv");
    const CommandResult result =
        run_cli("solve --problem tracking --nodes 20 --format csv --out " +
                report_path);
    CHECK(result.exit_code == 0);
    const std::string text = read_file(report_path);
    CHECK(text.rfind("# command,solve\n", 0) == 0);
    CHECK(text.find("k,rho,stationarity_l1,") != std::string::npos);
    CHECK(text.find("# cq.promotion_certified,true") != std::string::npos);
    std::filesystem::remove(report_path);
  }

  TEST_CASE("repeated runs produce byte-identical reports") {
    const std::string first = temp_path("ctpkit_solve_repeat_1.json");
    const std::string second = temp_path("ctpkit_solve_repeat_2.json");
    CHECK(run_cli("solve --problem tracking --nodes 60 --out " + first)
              .exit_code == 0);
    CHECK(run_cli("solve --problem tracking --nodes 60 --out " + second)
              .exit_code == 0);
    const std::string a = read_file(first);
    const std::string b = read_file(second);
    CHECK(!a.empty());
    CHECK(a == b);
    std::filesystem::remove(first);
    std::filesystem::remove(second);
  }

  TEST_CASE("usage errors exit one") {
    CHECK(run_cli("solve --problem nope").exit_code == 1);
    CHECK(run_cli("solve --problem example2 --nodes 25").exit_code == 1);
    CHECK(run_cli("solve --nodes 0").exit_code == 1);
    CHECK(run_cli("solve --format yaml").exit_code == 1);
    CHECK(run_cli("frobnicate").exit_code == 1);
    CHECK(run_cli("").exit_code == 1);
    const CommandResult odd =
        run_cli("solve --problem example2 --nodes 25");
    CHECK(odd.errors.find("even") != std::string::npos);
  }
}

TEST_SUITE("cli_sequence") {
  TEST_CASE("closed-form family emits one row per index") {
    const std::string report_path = temp_path("ctpkit_sequence_ex1.json");
    const CommandResult result = run_cli(
        "sequence --problem example1 --k-max 7 --nodes 16 --out " +
        report_path);
    CHECK(result.exit_code == 0);
    const RunReport report = parse_json(read_file(report_path));
    CHECK(report.command == "sequence");
    CHECK(report.status == "sequence_evaluated");
    REQUIRE(report.iterations.size() == 7);
    for (int k = 1; k <= 7; ++k) {
      const IterationRow& row = report.iterations[k - 1];
      CHECK(row.k == k);
      CHECK(std::isnan(row.rho));
      CHECK(row.mult_sup == static_cast<double>(k));
      CHECK(row.report.stationarity_l1 <= 1e-12);
      CHECK(row.report.comp_sup == 0.0);
      CHECK(row.report.feas_eq_sup == 1.0 / k);
    }
    REQUIRE(report.cq.has_value());
    CHECK(!report.cq->promotion_certified);
    std::filesystem::remove(report_path);
  }

  TEST_CASE("midpoint-singular family notes its unboundedness") {
    const std::string report_path = temp_path("ctpkit_sequence_ex2.json");
    const CommandResult result = run_cli(
        "sequence --problem example2 --k-max 20 --nodes 16 --out " +
        report_path);
    CHECK(result.exit_code == 0);
    const RunReport report = parse_json(read_file(report_path));
    REQUIRE(report.cq.has_value());
    CHECK(report.cq->multiplier_bound.verdict == BoundVerdict::growing);
    bool found = false;
    for (const std::string& note : report.notes) {
      found = found || note.find("t = 1/2") != std::string::npos;
    }
    CHECK(found);
    std::filesystem::remove(report_path);
  }

  TEST_CASE("sequence argument errors exit one") {
    CHECK(run_cli("sequence --problem tracking").exit_code == 1);
    CHECK(run_cli("sequence --problem example2 --nodes 15").exit_code == 1);
    CHECK(run_cli("sequence --problem example1 --k-max 0").exit_code == 1);
  }
}

TEST_SUITE("cli_residual") {
  TEST_CASE("reference tables evaluate to exact stationarity") {
    const CtpProblem problem = build(BuiltinProblemId::tracking);
    const auto grid = make_uniform_grid(1.0, 10);
    const std::string x_path = temp_path("ctpkit_residual_x.txt");
    const std::string mult_path = temp_path("ctpkit_residual_mult.txt");
    write_node_table(x_path, *grid,
                     problem.reference_trajectory(grid).values());
    write_node_table(mult_path, *grid,
                     problem.reference_multipliers(grid).ineq());

    const CommandResult result = run_cli(
        "residual --problem tracking --x " + x_path + " --mult " + mult_path);
    CHECK(result.exit_code == 0);
    const std::vector<std::string> lines = split_lines(result.output);
    REQUIRE(lines.size() == 8);
    CHECK(lines[0] == "stationarity_l1 0");
    CHECK(lines[1] == "stationarity_weak_max 0");
    CHECK(lines[2] == "comp_sup 0");
    CHECK(lines[3] == "comp_l1 0");
    CHECK(lines[4] == "feas_eq_sup 0");
    CHECK(lines[5] == "feas_ineq_sup 0");
    CHECK(lines[6] == "sign_violation 0");
    REQUIRE(lines[7].rfind("min_kkt_stationarity ", 0) == 0);
    const double min_kkt =
        std::strtod(lines[7].substr(lines[7].find(' ') + 1).c_str(), nullptr);
    CHECK(min_kkt <= 1e-10);
    std::filesystem::remove(x_path);
    std::filesystem::remove(mult_path);
  }

  TEST_CASE("malformed tables exit one naming the offending row") {
    const CtpProblem problem = build(BuiltinProblemId::tracking);
    const auto grid = make_uniform_grid(1.0, 4);
    const std::string x_path = temp_path("ctpkit_residual_bad_x.txt");
    const std::string mult_path = temp_path("ctpkit_residual_bad_mult.txt");
    write_node_table(x_path, *grid,
                     problem.reference_trajectory(grid).values());
    {
      std::ofstream file(mult_path, std::ios::binary);
      file << "0.125 0\n0.375 oops\n0.625 0.125\n0.875 0.375\n";
    }
    const CommandResult result = run_cli(
        "residual --problem tracking --x " + x_path + " --mult " + mult_path);
    CHECK(result.exit_code == 1);
    CHECK(result.errors.find("row 2") != std::string::npos);
    std::filesystem::remove(x_path);
    std::filesystem::remove(mult_path);
  }

  TEST_CASE("missing required options exit one") {
    CHECK(run_cli("residual --problem tracking").exit_code == 1);
    CHECK(run_cli("residual --x a.txt").exit_code == 1);
  }
}
