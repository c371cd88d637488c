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

#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctpkit/problem.hpp"
#include "ctpkit/residuals.hpp"

namespace ctp {

/// Safeguarded augmented-Lagrangian configuration. Defaults follow the
/// classical practical choices; validate() rejects nonsensical values
/// before any iteration is attempted.
struct AlmConfig {
  double rho0 = 1.0;
  double rho_growth = 10.0;
  double rho_max = 1e12;
  double tau_progress = 0.5;
  double u_safeguard = 1e8;
  double v_safeguard = 1e8;
  int outer_max = 50;
  int inner_max = 200;
  double stop_tol = 1e-6;
  int default_nodes = 200;

  /// Inner tolerance at outer iteration k (1-based). Empty means the
  /// default schedule max(10^-k, 1e-8).
  std::function<double(int)> inner_tol_schedule;

  /// Starting trajectory; also fixes the grid. Absent means all zeros on a
  /// uniform default_nodes grid.
  std::optional<Trajectory> initial_trajectory;

  double inner_tol(int outer_iteration) const;
  void validate() const;
};

struct AlEvaluation {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

/**
 * Powell-Hestenes-Rockafellar augmented Lagrangian at one node:
 *
 *   cost + sum_i (u_i h_i + (rho/2) h_i^2)
 *        + (1/(2 rho)) sum_j (max(0, v_j + rho g_j)^2 - v_j^2)
 *
 * together with its exact state gradient
 *
 *   grad cost + Jh^T (u + rho h) + Jg^T max(0, v + rho g).
 */
AlEvaluation augmented_lagrangian(const CtpProblem& problem,
                                  const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& u_bar,
                                  const Eigen::VectorXd& v_bar, double rho,
                                  double t);

enum class InnerStatus { converged, iteration_limit, unbounded };

struct InnerResult {
  Eigen::VectorXd x;
  double grad_norm = 0.0;
  int iterations = 0;
  InnerStatus status = InnerStatus::converged;
};

/**
 * Unconstrained minimization of the node augmented Lagrangian: damped
 * Newton on a finite-difference Hessian when the state is small, gradient
 * descent otherwise, both globalized by Armijo backtracking. Gradient steps
 * reseed the trial step from twice the last accepted one so descent rays
 * along which the model is unbounded are traversed in geometrically growing
 * strides. A value below -1e12 (or a non-finite one) reports
 * InnerStatus::unbounded.
 */
InnerResult inner_solve(const CtpProblem& problem, double t,
                        Eigen::VectorXd x0, const Eigen::VectorXd& u_bar,
                        const Eigen::VectorXd& v_bar, double rho, double tol,
                        int max_iterations);

enum class SolverStatus {
  converged_kkt,
  akkt_no_kkt_progress,
  penalty_cap_reached,
  iteration_cap_reached,
  unbounded_below_suspected
};

std::string to_string(SolverStatus status);

struct SolverIterate {
  Trajectory x;
  MultiplierPath multipliers;
  double rho = 0.0;
  ResidualReport report;
  long inner_iterations = 0;
  double multiplier_sup = 0.0;
  double progress_measure = 0.0;
  /// Largest |projected - unprojected| multiplier entry this iteration;
  /// nonzero means a safeguard was active and the dual estimate is not the
  /// one the update produced.
  double safeguard_clip = 0.0;
  bool ball_clipped = false;
};

struct SolverTrace {
  std::vector<SolverIterate> iterates;
  SolverStatus status = SolverStatus::iteration_cap_reached;
  std::vector<std::string> notes;

  const SolverIterate& final_iterate() const;
};

/**
 * Outer safeguarded augmented-Lagrangian loop over the time-decoupled node
 * subproblems. Produces one iterate record per outer iteration: primal
 * trajectory, safeguard-projected multiplier path, penalty in force, full
 * residual report.
 *
 * Termination, checked in this order after each outer iteration:
 * asymptotic-stationarity-without-convergent-multipliers (stationarity and
 * complementarity residuals below stop_tol while the multiplier sup norm
 * has grown by at least rho_growth since the first iterate without
 * stabilizing over the last three), full KKT residual below stop_tol,
 * penalty above rho_max, outer iteration cap. A node subproblem that drives
 * the augmented Lagrangian below -1e12 aborts with
 * unbounded_below_suspected.
 */
SolverTrace solve(const CtpProblem& problem, const AlmConfig& config = {});

/// Trace flattened to (trajectory, multiplier) pairs in iteration order,
/// ready for sequence-level residual and qualification analysis.
std::vector<std::pair<Trajectory, MultiplierPath>> export_trace(
    const SolverTrace& trace);

}  // namespace ctp
