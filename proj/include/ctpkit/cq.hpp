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
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ctpkit/problem.hpp"

namespace ctp {

/// Stacked constraint Jacobian at one node: equality gradient rows first,
/// then inequality gradient rows ((eq_count + ineq_count) x state_dim).
struct JacobianStack {
  double t = 0.0;
  Eigen::MatrixXd stacked;
};

JacobianStack jacobian_stack(const CtpProblem& problem,
                             const Eigen::VectorXd& x, double t);

/// The multiplier image psi = stacked^T (u, v), i.e. the constraint part of
/// the Lagrangian gradient.
Eigen::VectorXd stack_multiplier_image(const JacobianStack& stack,
                                       const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& v);

/// sqrt of the smallest eigenvalue of stacked * stacked^T: the smallest
/// singular value of the transposed stack, i.e. the modulus rho in
/// rho * |(u, v)| <= |psi|. +inf for an empty stack.
double smallest_stack_singular_value(const Eigen::MatrixXd& stacked);

enum class BoundVerdict { bounded, growing, inconclusive };

std::string to_string(BoundVerdict verdict);

/**
 * Boundedness screen over a sequence of multiplier paths. sup_norms holds
 * one sup norm per path. The verdict is "bounded" when the last `window`
 * norms agree to within 10%, "growing" when the overall trace grew by at
 * least growth_factor, otherwise "inconclusive". eq_sup and ineq_sup are
 * the observed sup norms of the equality and inequality blocks across the
 * whole sequence: the empirical candidates for uniform multiplier bounds.
 */
struct MultiplierBoundCheck {
  BoundVerdict verdict = BoundVerdict::inconclusive;
  std::vector<double> sup_norms;
  double eq_sup = 0.0;
  double ineq_sup = 0.0;
};

MultiplierBoundCheck check_multiplier_bound(
    const std::vector<MultiplierPath>& paths, int window = 3,
    double growth_factor = 10.0);

/**
 * Uniform full-rank screen along one trajectory: at every node the full
 * stack must satisfy det(stack * stack^T) >= min_det_threshold. min_det is
 * the smallest determinant seen; an unconstrained problem contributes +inf
 * (vacuously holds). More constraint rows than states makes a nonzero
 * determinant impossible, so that fails outright with a note; holds also
 * flips to false as soon as one node dips below the threshold, and note
 * names that node.
 */
struct FullRankCheck {
  bool holds = false;
  double min_det = std::numeric_limits<double>::infinity();
  double threshold = 0.0;
  std::string note;
};

FullRankCheck check_full_rank(const CtpProblem& problem, const Trajectory& x,
                              double min_det_threshold = 1e-6);

/**
 * Metric-regularity surrogate over a family of trajectories: the smallest
 * singular value of the transposed full stack across all nodes of all
 * trajectories must stay above sigma_threshold. When it does and the
 * stationarity image psi is bounded by psi_bound, every admissible
 * multiplier obeys |(u, v)| <= psi_bound / min_sigma, recorded as
 * implied_multiplier_bound.
 */
struct SigmaMinCheck {
  bool holds = false;
  double min_sigma = std::numeric_limits<double>::infinity();
  double threshold = 0.0;
  double psi_bound = std::numeric_limits<double>::quiet_NaN();
  double implied_multiplier_bound = std::numeric_limits<double>::infinity();
};

SigmaMinCheck check_sigma_min(const CtpProblem& problem,
                              const std::vector<Trajectory>& trajectories,
                              double sigma_threshold = 1e-3,
                              double psi_bound =
                                  std::numeric_limits<double>::quiet_NaN());

struct CqThresholds {
  double full_rank_min_det = 1e-6;
  double sigma_threshold = 1e-3;
  double growth_factor = 10.0;
  int window = 3;
  /// NaN means "use the measured sup of |psi| along the trace".
  double psi_bound = std::numeric_limits<double>::quiet_NaN();
  double akkt_tol = 1e-6;
};

/**
 * Aggregate qualification report. promotion_certified is the disjunction
 * of the three sufficient criteria: any one of them promotes asymptotic
 * stationarity of the trace to exact stationarity at its limit.
 */
struct CqReport {
  MultiplierBoundCheck multiplier_bound;
  FullRankCheck full_rank;
  SigmaMinCheck sigma_min;
  bool promotion_certified = false;
  std::vector<std::string> notes;
};

bool promotion_from(const MultiplierBoundCheck& mult,
                    const FullRankCheck& full_rank,
                    const SigmaMinCheck& sigma);

/**
 * Runs all three checks on an iterate trace. Rank and singular-value
 * screens are evaluated on the iterate trajectories and additionally at
 * the candidate limit (the problem reference when attached, otherwise the
 * final iterate), since degeneracy typically appears only in the limit.
 * With psi_bound unset, the measured sup of |psi| over the trace is used.
 * Notes record the candidate-limit choice and, when the final iterate's
 * asymptotic residuals pass and promotion is certified, the suggestion to
 * extract limit multipliers via stationarity minimization.
 */
CqReport diagnose(
    const CtpProblem& problem,
    const std::vector<std::pair<Trajectory, MultiplierPath>>& trace,
    const CqThresholds& thresholds = {});

}  // namespace ctp
