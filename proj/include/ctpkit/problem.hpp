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
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "ctpkit/trajectory.hpp"

namespace ctp {

using ScalarFn = std::function<double(const Eigen::VectorXd&, double)>;
using VectorFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>;
using MatrixFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&, double)>;
using TimeFn = std::function<Eigen::VectorXd(double)>;

/// Integrable envelope functions from the problem's regularity hypotheses.
/// Informational only; no solver component enforces them.
struct EnvelopeBounds {
  std::function<double(double)> cost_envelope;
  std::function<double(double)> constraint_envelope;
};

/**
 * A continuous-time program over x in L^inf([0, T])^n:
 *
 *   minimize   integral of cost(x(t), t) over [0, T]
 *   subject to equality(x(t), t) = 0 and inequality(x(t), t) <= 0
 *              for almost every t.
 *
 * Pointwise data is supplied as callbacks together with their Jacobians
 * (rows indexed by constraint, columns by state). The eval_* wrappers
 * validate output dimensions on every call and reject non-finite results
 * coming out of the callbacks only where a consumer requires it; shape
 * errors always throw std::runtime_error naming the expected size.
 *
 * An optional closed-form reference solution (state plus multipliers as
 * functions of t) can be attached; it is what diagnostics use as the
 * candidate limit point and what locality clipping centers on.
 */
struct CtpProblem {
  std::string name;
  int state_dim = 0;
  int eq_count = 0;
  int ineq_count = 0;
  double horizon = 1.0;

  ScalarFn cost;
  VectorFn cost_gradient;
  VectorFn equality;
  MatrixFn equality_jacobian;
  VectorFn inequality;
  MatrixFn inequality_jacobian;

  /// Radius of the pointwise trust ball around the reference solution used
  /// by locality-aware solves; +inf disables clipping.
  double locality_radius = std::numeric_limits<double>::infinity();

  std::optional<EnvelopeBounds> bounds;

  TimeFn reference_state;
  TimeFn reference_eq_multiplier;
  TimeFn reference_ineq_multiplier;

  /// Structural validation: positive state dimension and horizon,
  /// nonnegative constraint counts, callbacks present wherever the
  /// corresponding count is positive. Throws std::invalid_argument.
  void validate() const;

  bool unconstrained() const { return eq_count == 0 && ineq_count == 0; }
  bool has_reference() const { return static_cast<bool>(reference_state); }

  double eval_cost(const Eigen::VectorXd& x, double t) const;
  Eigen::VectorXd eval_cost_gradient(const Eigen::VectorXd& x, double t) const;
  Eigen::VectorXd eval_equality(const Eigen::VectorXd& x, double t) const;
  Eigen::MatrixXd eval_equality_jacobian(const Eigen::VectorXd& x,
                                         double t) const;
  Eigen::VectorXd eval_inequality(const Eigen::VectorXd& x, double t) const;
  Eigen::MatrixXd eval_inequality_jacobian(const Eigen::VectorXd& x,
                                           double t) const;

  /// Reference solution sampled on a grid. Throws std::logic_error when no
  /// reference is attached. Missing multiplier callbacks materialize as
  /// zero columns of matching width.
  Trajectory reference_trajectory(std::shared_ptr<const TimeGrid> grid) const;
  MultiplierPath reference_multipliers(
      std::shared_ptr<const TimeGrid> grid) const;
};

/// Quadrature of the running cost along a trajectory. Callback failures are
/// rethrown with the offending node index attached.
double objective(const CtpProblem& problem, const Trajectory& x);

struct Feasibility {
  double eq_sup = 0.0;    // sup over nodes of max_i |h_i|
  double ineq_sup = 0.0;  // sup over nodes of max_j max(g_j, 0)
  double max_violation() const { return eq_sup > ineq_sup ? eq_sup : ineq_sup; }
};

/// Pointwise feasibility violations along a trajectory, sup over the grid.
Feasibility feasibility(const CtpProblem& problem, const Trajectory& x);

}  // namespace ctp
