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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ctpkit/node_table.hpp"
#include "ctpkit/run_report.hpp"
#include "ctpkit/time_grid.hpp"

using namespace ctp;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  file << content;
}

std::string thrown_message(const std::function<void()>& action) {
  try {
    action();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
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

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream stream(line);
  std::string field;
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  return fields;
}

RunReport sample_report(bool with_cq, bool with_wall_time) {
  RunReport report;
  report.command = "solve";
  report.problem = "tracking";
  report.horizon = 1.0;
  report.n_nodes = 200;
  report.status = "converged_kkt";
  for (int k = 1; k <= 3; ++k) {
    IterationRow row;
    row.k = k;
    row.rho = std::pow(10.0, k);
    row.report.stationarity_l1 = 1.0 / (3.0 * k);
    row.report.stationarity_weak_max = row.report.stationarity_l1;
    row.report.comp_sup = 7.25e-5 / k;
    row.report.comp_l1 = 3.5e-5 / k;
    row.report.feas_eq_sup = 0.0;
    row.report.feas_ineq_sup = 0.1 / k;
    row.report.sign_violation = 0.0;
    row.mult_sup = 0.49749961386455205;
    row.inner_iterations = 17 * k;
    report.iterations.push_back(row);
  }
  if (with_cq) {
    CqReport cq;
    cq.multiplier_bound.verdict = BoundVerdict::bounded;
    cq.multiplier_bound.sup_norms = {0.25, 0.375, 0.5};
    cq.multiplier_bound.eq_sup = 0.0;
    cq.multiplier_bound.ineq_sup = 0.5;
    cq.full_rank.holds = true;
    cq.full_rank.min_det = 1.0;
    cq.full_rank.threshold = 1e-6;
    cq.full_rank.note = "";
    cq.sigma_min.holds = true;
    cq.sigma_min.min_sigma = 1.0;
    cq.sigma_min.threshold = 1e-3;
    cq.sigma_min.psi_bound = std::numeric_limits<double>::quiet_NaN();
    cq.sigma_min.implied_multiplier_bound =
        std::numeric_limits<double>::infinity();
    cq.promotion_certified = true;
    cq.notes = {"candidate limit: problem reference solution",
                "psi bound measured along the trace: 0.4975"};
    report.cq = cq;
  }
  report.notes = {"grid: 200 midpoint nodes, weights 0.005"};
  if (with_wall_time) {
    report.wall_time_seconds = 0.123456789;
  }
  return report;
}

}  // namespace

TEST_SUITE("double_formatting") {
  TEST_CASE("shortest representations") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.5) == "-2.5");
    CHECK(format_double(100.0) == "100");
    CHECK(format_double(1e300) == "1e+300");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  }

  TEST_CASE("formatted strings parse back to the same bits") {
    std::vector<double> values = {0.0,    1.0,     -1.0,   1.0 / 3.0,
                                  0.1,    2.5e-8,  1e300,  1e-300,
                                  6.02e23, 3.141592653589793,
                                  0.49749961386455205, 1e-6};
    std::mt19937 gen(7001);
    std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
    std::uniform_int_distribution<int> exponent(-250, 250);
    for (int i = 0; i < 200; ++i) {
      values.push_back(mantissa(gen) * std::pow(10.0, exponent(gen)));
    }
    for (double v : values) {
      const std::string text = format_double(v);
      const double parsed = std::strtod(text.c_str(), nullptr);
      CHECK(parsed == v);
    }
  }
}

TEST_SUITE("node_tables") {
  TEST_CASE("format emits one time-prefixed line per node") {
    const auto grid = make_uniform_grid(1.0, 2);
    Eigen::MatrixXd values(2, 2);
    values << 1.0, 2.0, 3.0, 4.0;
    CHECK(format_node_table(*grid, values) == "0.25 1 2\n0.75 3 4\n");
    CHECK_THROWS_AS(format_node_table(*grid, Eigen::MatrixXd::Zero(3, 2)),
                    std::invalid_argument);
  }

  TEST_CASE("write and read round-trip bitwise") {
    const auto grid = make_uniform_grid(2.0, 12);
    std::mt19937 gen(7002);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    Eigen::MatrixXd values(12, 3);
    for (int i = 0; i < 12; ++i) {
      for (int j = 0; j < 3; ++j) {
        values(i, j) = dist(gen) * std::pow(10.0, (i + j) % 7 - 3);
      }
    }
    const std::string path = temp_path("ctpkit_table_roundtrip.txt");
    write_node_table(path, *grid, values);
    const Eigen::MatrixXd reread = read_node_table(path, *grid, 3);
    CHECK(reread == values);
    std::filesystem::remove(path);
  }

  TEST_CASE("blank lines are ignored") {
    const auto grid = make_uniform_grid(1.0, 2);
    const std::string path = temp_path("ctpkit_table_blanks.txt");
    write_text(path, "\n0.25 7\n\n0.75 8\n\n");
    const Eigen::MatrixXd values = read_node_table(path, *grid, 1);
    CHECK(values(0, 0) == 7.0);
    CHECK(values(1, 0) == 8.0);
    std::filesystem::remove(path);
  }

  TEST_CASE("errors name the offending one-based row") {
    const auto grid = make_uniform_grid(1.0, 2);
    const std::string path = temp_path("ctpkit_table_errors.txt");

    write_text(path, "0.25 1 2\n0.75 3 4\n");
    std::string message =
        thrown_message([&] { read_node_table(path, *grid, 3); });
    CHECK(message.find("row 1") != std::string::npos);
    CHECK(message.find("expected 4 columns") != std::string::npos);

    write_text(path, "0.25 1\n0.75 oops\n");
    message = thrown_message([&] { read_node_table(path, *grid, 1); });
    CHECK(message.find("row 2") != std::string::npos);
    CHECK(message.find("malformed real 'oops'") != std::string::npos);

    write_text(path, "0.3 1\n0.75 2\n");
    message = thrown_message([&] { read_node_table(path, *grid, 1); });
    CHECK(message.find("row 1") != std::string::npos);
    CHECK(message.find("does not match grid node") != std::string::npos);

    write_text(path, "0.25 1\n0.75 2\n1.25 3\n");
    message = thrown_message([&] { read_node_table(path, *grid, 1); });
    CHECK(message.find("more rows") != std::string::npos);

    write_text(path, "0.25 1\n");
    message = thrown_message([&] { read_node_table(path, *grid, 1); });
    CHECK(message.find("table ended") != std::string::npos);

    CHECK_THROWS_AS(
        read_node_table(temp_path("ctpkit_no_such_table.txt"), *grid, 1),
        std::runtime_error);
    std::filesystem::remove(path);
  }
}

TEST_SUITE("run_reports") {
  TEST_CASE("json serialization round-trips byte for byte") {
    for (bool with_cq : {false, true}) {
      for (bool with_wall : {false, true}) {
        const RunReport report = sample_report(with_cq, with_wall);
        const std::string text = to_json(report);
        const RunReport reparsed = parse_json(text);
        CHECK(to_json(reparsed) == text);
      }
    }
  }

  TEST_CASE("parsing recovers the exact field values") {
    const RunReport report = sample_report(true, true);
    const RunReport reparsed = parse_json(to_json(report));
    CHECK(reparsed.command == report.command);
    CHECK(reparsed.problem == report.problem);
    CHECK(reparsed.horizon == report.horizon);
    CHECK(reparsed.n_nodes == report.n_nodes);
    CHECK(reparsed.status == report.status);
    REQUIRE(reparsed.iterations.size() == report.iterations.size());
    for (std::size_t i = 0; i < report.iterations.size(); ++i) {
      const IterationRow& a = report.iterations[i];
      const IterationRow& b = reparsed.iterations[i];
      CHECK(b.k == a.k);
      CHECK(b.rho == a.rho);
      CHECK(b.report.stationarity_l1 == a.report.stationarity_l1);
      CHECK(b.report.stationarity_weak_max == a.report.stationarity_weak_max);
      CHECK(b.report.comp_sup == a.report.comp_sup);
      CHECK(b.report.comp_l1 == a.report.comp_l1);
      CHECK(b.report.feas_eq_sup == a.report.feas_eq_sup);
      CHECK(b.report.feas_ineq_sup == a.report.feas_ineq_sup);
      CHECK(b.report.sign_violation == a.report.sign_violation);
      CHECK(b.mult_sup == a.mult_sup);
      CHECK(b.inner_iterations == a.inner_iterations);
    }
    REQUIRE(reparsed.cq.has_value());
    CHECK(reparsed.cq->multiplier_bound.verdict == BoundVerdict::bounded);
    CHECK(reparsed.cq->multiplier_bound.sup_norms ==
          report.cq->multiplier_bound.sup_norms);
    CHECK(reparsed.cq->full_rank.min_det == 1.0);
    CHECK(std::isnan(reparsed.cq->sigma_min.psi_bound));
    CHECK(std::isinf(reparsed.cq->sigma_min.implied_multiplier_bound));
    CHECK(reparsed.cq->notes == report.cq->notes);
    CHECK(reparsed.notes == report.notes);
    REQUIRE(reparsed.wall_time_seconds.has_value());
    CHECK(*reparsed.wall_time_seconds == 0.123456789);
  }

  TEST_CASE("non-finite reals are encoded as strings") {
    RunReport report = sample_report(false, false);
    report.iterations[0].rho = std::numeric_limits<double>::infinity();
    report.iterations[0].report.comp_sup =
        std::numeric_limits<double>::quiet_NaN();
    report.iterations[0].mult_sup =
        -std::numeric_limits<double>::infinity();
    const std::string text = to_json(report);
    CHECK(text.find("\"rho\": \"inf\"") != std::string::npos);
    CHECK(text.find("\"comp_sup\": \"nan\"") != std::string::npos);
    CHECK(text.find("\"mult_sup\": \"-inf\"") != std::string::npos);
    const RunReport reparsed = parse_json(text);
    CHECK(std::isinf(reparsed.iterations[0].rho));
    CHECK(reparsed.iterations[0].rho > 0.0);
    CHECK(std::isnan(reparsed.iterations[0].report.comp_sup));
    CHECK(reparsed.iterations[0].mult_sup ==
          -std::numeric_limits<double>::infinity());
    CHECK(to_json(reparsed) == text);
  }

  TEST_CASE("a run without a qualification block serializes cq as null") {
    const RunReport report = sample_report(false, false);
    const std::string text = to_json(report);
    CHECK(text.find("\"cq\": null") != std::string::npos);
    CHECK(text.find("wall_time_seconds") == std::string::npos);
    CHECK(!parse_json(text).cq.has_value());
    CHECK(!parse_json(text).wall_time_seconds.has_value());
  }

  TEST_CASE("csv carries exactly the json numbers") {
    const RunReport report = sample_report(true, true);
    const std::vector<std::string> lines = split_lines(to_csv(report));
    REQUIRE(lines.size() >= 9);
    CHECK(lines[0] == "# command,solve");
    CHECK(lines[1] == "# problem,tracking");
    CHECK(lines[2] == "# horizon,1");
    CHECK(lines[3] == "# n_nodes,200");
    CHECK(lines[4] == "# status,converged_kkt");
    CHECK(lines[5] ==
          "k,rho,stationarity_l1,stationarity_weak_max,comp_sup,comp_l1,"
          "feas_eq_sup,feas_ineq_sup,sign_violation,mult_sup,"
          "inner_iterations");
    for (std::size_t i = 0; i < report.iterations.size(); ++i) {
      const IterationRow& row = report.iterations[i];
      const std::vector<std::string> fields = split_fields(lines[6 + i]);
      REQUIRE(fields.size() == 11);
      CHECK(std::stoi(fields[0]) == row.k);
      CHECK(std::strtod(fields[1].c_str(), nullptr) == row.rho);
      CHECK(std::strtod(fields[2].c_str(), nullptr) ==
            row.report.stationarity_l1);
      CHECK(std::strtod(fields[4].c_str(), nullptr) == row.report.comp_sup);
      CHECK(std::strtod(fields[9].c_str(), nullptr) == row.mult_sup);
      CHECK(std::stol(fields[10]) == row.inner_iterations);
    }
  }

  TEST_CASE("csv renders the qualification block and notes as comments") {
    const std::string text = to_csv(sample_report(true, true));
    CHECK(text.find("# cq.multiplier_bound.verdict,bounded") !=
          std::string::npos);
    CHECK(text.find("# cq.multiplier_bound.sup_norms,0.25,0.375,0.5") !=
          std::string::npos);
    CHECK(text.find("# cq.full_rank.holds,true") != std::string::npos);
    CHECK(text.find("# cq.sigma_min.psi_bound,nan") != std::string::npos);
    CHECK(text.find("# cq.sigma_min.implied_multiplier_bound,inf") !=
          std::string::npos);
    CHECK(text.find("# cq.promotion_certified,true") != std::string::npos);
    CHECK(text.find("# cq.note,candidate limit: problem reference solution") !=
          std::string::npos);
    CHECK(text.find("# note,grid: 200 midpoint nodes, weights 0.005") !=
          std::string::npos);
    CHECK(text.find("# wall_time_seconds,0.123456789") != std::string::npos);

    const std::string bare = to_csv(sample_report(false, false));
    CHECK(bare.find("# cq.") == std::string::npos);
    CHECK(bare.find("wall_time_seconds") == std::string::npos);
  }

  TEST_CASE("malformed documents are rejected") {
    CHECK_THROWS_AS(parse_json("{"), std::runtime_error);
    CHECK_THROWS_AS(parse_json("{}"), std::exception);
    std::string text = to_json(sample_report(false, false));
    const std::string needle = "\"horizon\": 1.0";
    REQUIRE(text.find(needle) != std::string::npos);
    text.replace(text.find(needle), needle.size(), "\"horizon\": \"oops\"");
    CHECK_THROWS_AS(parse_json(text), std::runtime_error);
  }
}
