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
#include <utility>
#include <vector>

#include "ctpkit/problem.hpp"

namespace ctp {

/**
 * Stationarity and feasibility residuals of a (trajectory, multiplier) pair.
 *
 * - stationarity_l1: quadrature over [0, T] of the 1-norm of the Lagrangian
 *   gradient, i.e. the L^1 norm of t -> grad_x L(x(t), u(t), v(t), t).
 * - stationarity_weak_max: largest |integral of <grad_x L, c>| over a
 *   dictionary of bounded test functions c (componentwise indicators of
 *   dyadic subintervals and the sign pattern of the gradient itself). This
 *   is the weak-convergence reading of stationarity; including the sign
 *   pattern makes it equal to stationarity_l1 whenever the dictionary is
 *   evaluated on the same grid.
 * - comp_sup / comp_l1: sup and quadrature over nodes of
 *   max_j |v_j * max(-g_j, 0)|, the complementarity products measured
 *   against constraint slack.
 * - feas_eq_sup / feas_ineq_sup: pointwise feasibility violations.
 * - sign_violation: sup over nodes of max_j max(-v_j, 0).
 */
struct ResidualReport {
  double stationarity_l1 = 0.0;
  double stationarity_weak_max = 0.0;
  double comp_sup = 0.0;
  double comp_l1 = 0.0;
  double feas_eq_sup = 0.0;
  double feas_ineq_sup = 0.0;
  double sign_violation = 0.0;
  Eigen::VectorXd per_node_stationarity;

  /// Largest of the scalar residuals; 0 exactly at a discretized KKT pair.
  double max_residual() const;
  bool is_kkt(double tol = 1e-6) const { return max_residual() <= tol; }
};

/// Componentwise negative part max(-g, 0) of the inequality values: the
/// slack of satisfied constraints, zero wherever g >= 0.
Eigen::VectorXd inequality_slack(const CtpProblem& problem,
                                 const Eigen::VectorXd& x, double t);

/// Pointwise Lagrangian gradient
/// grad cost + Jh^T u + Jg^T v evaluated at one node.
Eigen::VectorXd lagrangian_gradient(const CtpProblem& problem,
                                    const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& v, double t);

/// Full residual report for a pair on a common grid. Throws
/// std::invalid_argument on grid or dimension mismatch; callback failures
/// are rethrown with the node index attached.
ResidualReport kkt_residual(const CtpProblem& problem, const Trajectory& x,
                            const MultiplierPath& mult);

/**
 * Smallest attainable stationarity residual at a fixed trajectory:
 * at every node, minimize |grad cost + Jh^T u + Jg^T v| over free u and
 * v >= 0, with v_j pinned to zero for constraints whose slack exceeds
 * comp_tol (so the minimizing pair is complementarity-admissible by
 * construction). value is the quadrature of the per-node minima; the
 * minimizing multipliers are returned as a path.
 */
struct StationarityDistance {
  double value;
  Eigen::VectorXd per_node;
  MultiplierPath minimizer;
};

StationarityDistance min_kkt_stationarity(const CtpProblem& problem,
                                          const Trajectory& x,
                                          double comp_tol = 1e-8);

/// kkt_residual applied along a sequence of iterate pairs, one report per
/// iterate, in order.
std::vector<ResidualReport> akkt_sequence_report(
    const CtpProblem& problem,
    const std::vector<std::pair<Trajectory, MultiplierPath>>& iterates);

/**
 * Checks whether a sequence of iterate pairs witnesses asymptotic
 * stationarity toward a limit trajectory: residual trends (weak
 * stationarity, complementarity, multiplier signs) plus pointwise primal
 * convergence and, when the problem carries a finite locality radius and a
 * reference, containment of every iterate in the pointwise ball.
 */
struct AkktCertificate {
  bool weak_stationarity_ok = false;
  bool complementarity_ok = false;
  bool signs_ok = false;
  bool primal_converging = false;
  bool inside_locality = true;
  bool certified = false;
  double final_primal_gap = 0.0;
};

AkktCertificate certify_akkt(
    const CtpProblem& problem,
    const std::vector<std::pair<Trajectory, MultiplierPath>>& iterates,
    const Trajectory& limit, double tol = 1e-6);

}  // namespace ctp
