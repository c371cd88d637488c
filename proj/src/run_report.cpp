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

#include "ctpkit/run_report.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "ctpkit/node_table.hpp"

namespace ctp {

namespace {

using Json = nlohmann::ordered_json;

// Non-finite reals have no JSON number representation; encode them as
// fixed strings so documents round-trip byte for byte.
Json encode_real(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  return value;
}

double decode_real(const Json& value) {
  if (value.is_string()) {
    const std::string& text = value.get_ref<const std::string&>();
    if (text == "nan") {
      return std::numeric_limits<double>::quiet_NaN();
    }
    if (text == "inf") {
      return std::numeric_limits<double>::infinity();
    }
    if (text == "-inf") {
      return -std::numeric_limits<double>::infinity();
    }
    throw std::runtime_error("run report: unrecognized real literal '" +
                             text + "'");
  }
  return value.get<double>();
}

Json encode_cq(const CqReport& cq) {
  Json j;
  Json mult;
  mult["verdict"] = to_string(cq.multiplier_bound.verdict);
  Json sup_norms = Json::array();
  for (double s : cq.multiplier_bound.sup_norms) {
    sup_norms.push_back(encode_real(s));
  }
  mult["sup_norms"] = std::move(sup_norms);
  mult["eq_sup"] = encode_real(cq.multiplier_bound.eq_sup);
  mult["ineq_sup"] = encode_real(cq.multiplier_bound.ineq_sup);
  j["multiplier_bound"] = std::move(mult);

  Json full_rank;
  full_rank["holds"] = cq.full_rank.holds;
  full_rank["min_det"] = encode_real(cq.full_rank.min_det);
  full_rank["threshold"] = encode_real(cq.full_rank.threshold);
  full_rank["note"] = cq.full_rank.note;
  j["full_rank"] = std::move(full_rank);

  Json sigma;
  sigma["holds"] = cq.sigma_min.holds;
  sigma["min_sigma"] = encode_real(cq.sigma_min.min_sigma);
  sigma["threshold"] = encode_real(cq.sigma_min.threshold);
  sigma["psi_bound"] = encode_real(cq.sigma_min.psi_bound);
  sigma["implied_multiplier_bound"] =
      encode_real(cq.sigma_min.implied_multiplier_bound);
  j["sigma_min"] = std::move(sigma);

  j["promotion_certified"] = cq.promotion_certified;
  j["notes"] = cq.notes;
  return j;
}

CqReport decode_cq(const Json& j) {
  CqReport cq;
  const Json& mult = j.at("multiplier_bound");
  const std::string verdict = mult.at("verdict").get<std::string>();
  if (verdict == "bounded") {
    cq.multiplier_bound.verdict = BoundVerdict::bounded;
  } else if (verdict == "growing") {
    cq.multiplier_bound.verdict = BoundVerdict::growing;
  } else {
    cq.multiplier_bound.verdict = BoundVerdict::inconclusive;
  }
  for (const Json& s : mult.at("sup_norms")) {
    cq.multiplier_bound.sup_norms.push_back(decode_real(s));
  }
  cq.multiplier_bound.eq_sup = decode_real(mult.at("eq_sup"));
  cq.multiplier_bound.ineq_sup = decode_real(mult.at("ineq_sup"));

  const Json& full_rank = j.at("full_rank");
  cq.full_rank.holds = full_rank.at("holds").get<bool>();
  cq.full_rank.min_det = decode_real(full_rank.at("min_det"));
  cq.full_rank.threshold = decode_real(full_rank.at("threshold"));
  cq.full_rank.note = full_rank.at("note").get<std::string>();

  const Json& sigma = j.at("sigma_min");
  cq.sigma_min.holds = sigma.at("holds").get<bool>();
  cq.sigma_min.min_sigma = decode_real(sigma.at("min_sigma"));
  cq.sigma_min.threshold = decode_real(sigma.at("threshold"));
  cq.sigma_min.psi_bound = decode_real(sigma.at("psi_bound"));
  cq.sigma_min.implied_multiplier_bound =
      decode_real(sigma.at("implied_multiplier_bound"));

  cq.promotion_certified = j.at("promotion_certified").get<bool>();
  cq.notes = j.at("notes").get<std::vector<std::string>>();
  return cq;
}

Json encode(const RunReport& report) {
  Json j;
  j["command"] = report.command;
  j["problem"] = report.problem;
  j["horizon"] = encode_real(report.horizon);
  j["n_nodes"] = report.n_nodes;
  j["status"] = report.status;
  Json rows = Json::array();
  for (const IterationRow& row : report.iterations) {
    Json r;
    r["k"] = row.k;
    r["rho"] = encode_real(row.rho);
    r["stationarity_l1"] = encode_real(row.report.stationarity_l1);
    r["stationarity_weak_max"] =
        encode_real(row.report.stationarity_weak_max);
    r["comp_sup"] = encode_real(row.report.comp_sup);
    r["comp_l1"] = encode_real(row.report.comp_l1);
    r["feas_eq_sup"] = encode_real(row.report.feas_eq_sup);
    r["feas_ineq_sup"] = encode_real(row.report.feas_ineq_sup);
    r["sign_violation"] = encode_real(row.report.sign_violation);
    r["mult_sup"] = encode_real(row.mult_sup);
    r["inner_iterations"] = row.inner_iterations;
    rows.push_back(std::move(r));
  }
  j["iterations"] = std::move(rows);
  j["cq"] = report.cq ? encode_cq(*report.cq) : Json(nullptr);
  j["notes"] = report.notes;
  if (report.wall_time_seconds) {
    j["wall_time_seconds"] = encode_real(*report.wall_time_seconds);
  }
  return j;
}

}  // namespace

std::string to_json(const RunReport& report) {
  return encode(report).dump(2) + "\n";
}

RunReport parse_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("run report: parse failure: ") +
                             e.what());
  }

  RunReport report;
  report.command = j.at("command").get<std::string>();
  report.problem = j.at("problem").get<std::string>();
  report.horizon = decode_real(j.at("horizon"));
  report.n_nodes = j.at("n_nodes").get<int>();
  report.status = j.at("status").get<std::string>();
  for (const Json& r : j.at("iterations")) {
    IterationRow row;
    row.k = r.at("k").get<int>();
    row.rho = decode_real(r.at("rho"));
    row.report.stationarity_l1 = decode_real(r.at("stationarity_l1"));
    row.report.stationarity_weak_max =
        decode_real(r.at("stationarity_weak_max"));
    row.report.comp_sup = decode_real(r.at("comp_sup"));
    row.report.comp_l1 = decode_real(r.at("comp_l1"));
    row.report.feas_eq_sup = decode_real(r.at("feas_eq_sup"));
    row.report.feas_ineq_sup = decode_real(r.at("feas_ineq_sup"));
    row.report.sign_violation = decode_real(r.at("sign_violation"));
    row.mult_sup = decode_real(r.at("mult_sup"));
    row.inner_iterations = r.at("inner_iterations").get<long>();
    report.iterations.push_back(std::move(row));
  }
  if (!j.at("cq").is_null()) {
    report.cq = decode_cq(j.at("cq"));
  }
  report.notes = j.at("notes").get<std::vector<std::string>>();
  if (j.contains("wall_time_seconds")) {
    report.wall_time_seconds = decode_real(j.at("wall_time_seconds"));
  }
  return report;
}

std::string to_csv(const RunReport& report) {
  std::string out;
  out += "# command," + report.command + "\n";
  out += "# problem," + report.problem + "\n";
  out += "# horizon," + format_double(report.horizon) + "\n";
  out += "# n_nodes," + std::to_string(report.n_nodes) + "\n";
  out += "# status," + report.status + "\n";
  out +=
      "k,rho,stationarity_l1,stationarity_weak_max,comp_sup,comp_l1,"
      "feas_eq_sup,feas_ineq_sup,sign_violation,mult_sup,inner_iterations\n";
  for (const IterationRow& row : report.iterations) {
    out += std::to_string(row.k);
    out += ',' + format_double(row.rho);
    out += ',' + format_double(row.report.stationarity_l1);
    out += ',' + format_double(row.report.stationarity_weak_max);
    out += ',' + format_double(row.report.comp_sup);
    out += ',' + format_double(row.report.comp_l1);
    out += ',' + format_double(row.report.feas_eq_sup);
    out += ',' + format_double(row.report.feas_ineq_sup);
    out += ',' + format_double(row.report.sign_violation);
    out += ',' + format_double(row.mult_sup);
    out += ',' + std::to_string(row.inner_iterations);
    out += '\n';
  }
  if (report.cq) {
    const CqReport& cq = *report.cq;
    out += "# cq.multiplier_bound.verdict," +
           to_string(cq.multiplier_bound.verdict) + "\n";
    out += "# cq.multiplier_bound.eq_sup," +
           format_double(cq.multiplier_bound.eq_sup) + "\n";
    out += "# cq.multiplier_bound.ineq_sup," +
           format_double(cq.multiplier_bound.ineq_sup) + "\n";
    out += "# cq.multiplier_bound.sup_norms";
    for (double s : cq.multiplier_bound.sup_norms) {
      out += ',' + format_double(s);
    }
    out += "\n";
    out += std::string("# cq.full_rank.holds,") +
           (cq.full_rank.holds ? "true" : "false") + "\n";
    out += "# cq.full_rank.min_det," + format_double(cq.full_rank.min_det) +
           "\n";
    out += "# cq.full_rank.threshold," +
           format_double(cq.full_rank.threshold) + "\n";
    out += "# cq.full_rank.note," + cq.full_rank.note + "\n";
    out += std::string("# cq.sigma_min.holds,") +
           (cq.sigma_min.holds ? "true" : "false") + "\n";
    out += "# cq.sigma_min.min_sigma," +
           format_double(cq.sigma_min.min_sigma) + "\n";
    out += "# cq.sigma_min.threshold," +
           format_double(cq.sigma_min.threshold) + "\n";
    out += "# cq.sigma_min.psi_bound," +
           format_double(cq.sigma_min.psi_bound) + "\n";
    out += "# cq.sigma_min.implied_multiplier_bound," +
           format_double(cq.sigma_min.implied_multiplier_bound) + "\n";
    out += std::string("# cq.promotion_certified,") +
           (cq.promotion_certified ? "true" : "false") + "\n";
    for (const std::string& note : cq.notes) {
      out += "# cq.note," + note + "\n";
    }
  }
  for (const std::string& note : report.notes) {
    out += "# note," + note + "\n";
  }
  if (report.wall_time_seconds) {
    out += "# wall_time_seconds," + format_double(*report.wall_time_seconds) +
           "\n";
  }
  return out;
}

}  // namespace ctp
