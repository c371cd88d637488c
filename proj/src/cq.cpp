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

#include "ctpkit/cq.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ctpkit/residuals.hpp"

namespace ctp {

namespace {

std::string brief(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

}  // namespace

JacobianStack jacobian_stack(const CtpProblem& problem,
                             const Eigen::VectorXd& x, double t) {
  JacobianStack stack;
  stack.t = t;
  stack.stacked.resize(problem.eq_count + problem.ineq_count,
                       problem.state_dim);
  if (problem.eq_count > 0) {
    stack.stacked.topRows(problem.eq_count) =
        problem.eval_equality_jacobian(x, t);
  }
  if (problem.ineq_count > 0) {
    stack.stacked.bottomRows(problem.ineq_count) =
        problem.eval_inequality_jacobian(x, t);
  }
  return stack;
}

Eigen::VectorXd stack_multiplier_image(const JacobianStack& stack,
                                       const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& v) {
  if (u.size() + v.size() != stack.stacked.rows()) {
    throw std::invalid_argument(
        "stack_multiplier_image: multiplier sizes do not match the stack");
  }
  Eigen::VectorXd mult(stack.stacked.rows());
  mult << u, v;
  return stack.stacked.transpose() * mult;
}

double smallest_stack_singular_value(const Eigen::MatrixXd& stacked) {
  if (stacked.rows() == 0) {
    return std::numeric_limits<double>::infinity();
  }
  const Eigen::MatrixXd gram = stacked * stacked.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(gram);
  return std::sqrt(std::max(eigen.eigenvalues().minCoeff(), 0.0));
}

std::string to_string(BoundVerdict verdict) {
  switch (verdict) {
    case BoundVerdict::bounded:
      return "bounded";
    case BoundVerdict::growing:
      return "growing";
    case BoundVerdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

MultiplierBoundCheck check_multiplier_bound(
    const std::vector<MultiplierPath>& paths, int window,
    double growth_factor) {
  if (paths.empty()) {
    throw std::invalid_argument("check_multiplier_bound: empty trace");
  }
  if (window < 2) {
    throw std::invalid_argument("check_multiplier_bound: window must be >= 2");
  }
  if (!(growth_factor > 1.0)) {
    throw std::invalid_argument(
        "check_multiplier_bound: growth_factor must be > 1");
  }

  MultiplierBoundCheck check;
  check.sup_norms.reserve(paths.size());
  for (const MultiplierPath& path : paths) {
    check.sup_norms.push_back(path.sup_norm());
    if (path.eq_count() > 0) {
      check.eq_sup = std::max(check.eq_sup, path.eq().cwiseAbs().maxCoeff());
    }
    if (path.ineq_count() > 0) {
      check.ineq_sup =
          std::max(check.ineq_sup, path.ineq().cwiseAbs().maxCoeff());
    }
  }

  const std::size_t count = check.sup_norms.size();
  if (count >= static_cast<std::size_t>(window)) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t k = count - static_cast<std::size_t>(window); k < count;
         ++k) {
      lo = std::min(lo, check.sup_norms[k]);
      hi = std::max(hi, check.sup_norms[k]);
    }
    if (hi <= 1.1 * lo || hi == 0.0) {
      check.verdict = BoundVerdict::bounded;
      return check;
    }
  }
  if (check.sup_norms.front() > 0.0 &&
      check.sup_norms.back() >= growth_factor * check.sup_norms.front()) {
    check.verdict = BoundVerdict::growing;
  }
  return check;
}

FullRankCheck check_full_rank(const CtpProblem& problem, const Trajectory& x,
                              double min_det_threshold) {
  if (!(min_det_threshold > 0.0)) {
    throw std::invalid_argument("check_full_rank: threshold must be > 0");
  }
  FullRankCheck check;
  check.threshold = min_det_threshold;

  const int rows = problem.eq_count + problem.ineq_count;
  if (rows == 0) {
    check.holds = true;
    check.note = "no constraints: vacuously full rank";
    return check;
  }
  if (rows > problem.state_dim) {
    check.note = "more constraint rows than states: the stacked Jacobian "
                 "cannot have full row rank";
  }

  const TimeGrid& grid = x.grid();
  int worst_node = -1;
  for (int i = 0; i < grid.n_nodes(); ++i) {
    const JacobianStack stack =
        jacobian_stack(problem, x.at(i), grid.node(i));
    const double det =
        std::max((stack.stacked * stack.stacked.transpose()).determinant(),
                 0.0);
    if (det < check.min_det) {
      check.min_det = det;
      worst_node = i;
    }
  }
  check.holds =
      rows <= problem.state_dim && check.min_det >= min_det_threshold;
  if (!check.holds && worst_node >= 0 && check.note.empty()) {
    check.note = "node " + std::to_string(worst_node) +
                 " (t = " + brief(grid.node(worst_node)) +
                 "): det = " + brief(check.min_det) + " below threshold " +
                 brief(min_det_threshold);
  }
  return check;
}

SigmaMinCheck check_sigma_min(const CtpProblem& problem,
                              const std::vector<Trajectory>& trajectories,
                              double sigma_threshold, double psi_bound) {
  if (!(sigma_threshold > 0.0)) {
    throw std::invalid_argument("check_sigma_min: threshold must be > 0");
  }
  if (trajectories.empty()) {
    throw std::invalid_argument("check_sigma_min: no trajectories supplied");
  }
  SigmaMinCheck check;
  check.threshold = sigma_threshold;
  check.psi_bound = psi_bound;

  for (const Trajectory& x : trajectories) {
    const TimeGrid& grid = x.grid();
    for (int i = 0; i < grid.n_nodes(); ++i) {
      const JacobianStack stack =
          jacobian_stack(problem, x.at(i), grid.node(i));
      check.min_sigma = std::min(
          check.min_sigma, smallest_stack_singular_value(stack.stacked));
    }
  }
  check.holds = check.min_sigma >= sigma_threshold;
  if (check.holds && std::isfinite(psi_bound) && check.min_sigma > 0.0) {
    check.implied_multiplier_bound = psi_bound / check.min_sigma;
  }
  return check;
}

bool promotion_from(const MultiplierBoundCheck& mult,
                    const FullRankCheck& full_rank,
                    const SigmaMinCheck& sigma) {
  return mult.verdict == BoundVerdict::bounded || full_rank.holds ||
         sigma.holds;
}

CqReport diagnose(
    const CtpProblem& problem,
    const std::vector<std::pair<Trajectory, MultiplierPath>>& trace,
    const CqThresholds& thresholds) {
  if (trace.empty()) {
    throw std::invalid_argument("diagnose: empty trace");
  }

  CqReport report;

  std::vector<MultiplierPath> paths;
  paths.reserve(trace.size());
  for (const auto& [x, mult] : trace) {
    paths.push_back(mult);
  }
  report.multiplier_bound = check_multiplier_bound(
      paths, thresholds.window, thresholds.growth_factor);

  // Degeneracy usually appears only at the limit, so the rank screens are
  // evaluated at the candidate limit as well as along the iterates.
  const bool use_reference = problem.has_reference();
  const Trajectory limit =
      use_reference
          ? problem.reference_trajectory(trace.front().first.grid_ptr())
          : trace.back().first;
  report.notes.push_back(use_reference
                             ? "candidate limit: problem reference solution"
                             : "candidate limit: final iterate");

  report.full_rank =
      check_full_rank(problem, limit, thresholds.full_rank_min_det);

  double psi_bound = thresholds.psi_bound;
  if (!std::isfinite(psi_bound)) {
    double measured = 0.0;
    for (const auto& [x, mult] : trace) {
      const TimeGrid& grid = x.grid();
      for (int i = 0; i < grid.n_nodes(); ++i) {
        const JacobianStack stack =
            jacobian_stack(problem, x.at(i), grid.node(i));
        measured = std::max(
            measured,
            stack_multiplier_image(stack, mult.eq_at(i), mult.ineq_at(i))
                .norm());
      }
    }
    psi_bound = measured;
    report.notes.push_back("psi bound measured along the trace: " +
                           brief(measured));
  }

  std::vector<Trajectory> trajectories;
  trajectories.reserve(trace.size() + 1);
  for (const auto& [x, mult] : trace) {
    trajectories.push_back(x);
  }
  trajectories.push_back(limit);
  report.sigma_min = check_sigma_min(problem, trajectories,
                                     thresholds.sigma_threshold, psi_bound);

  report.promotion_certified =
      promotion_from(report.multiplier_bound, report.full_rank,
                     report.sigma_min);

  if (report.promotion_certified) {
    const ResidualReport final_report =
        kkt_residual(problem, trace.back().first, trace.back().second);
    if (final_report.stationarity_weak_max <= thresholds.akkt_tol &&
        final_report.comp_sup <= thresholds.akkt_tol &&
        final_report.sign_violation == 0.0) {
      report.notes.push_back(
          "asymptotic residuals pass and a sufficient criterion holds: run "
          "min_kkt_stationarity at the final iterate to extract limit "
          "multipliers");
    }
  }
  return report;
}

}  // namespace ctp
