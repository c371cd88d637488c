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

#include "ctpkit/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ctp {

namespace {

void require_state(const CtpProblem& problem, const Eigen::VectorXd& x,
                   const char* op) {
  if (x.size() != problem.state_dim) {
    throw std::runtime_error(std::string(op) + ": state has size " +
                             std::to_string(x.size()) + ", expected " +
                             std::to_string(problem.state_dim));
  }
}

void require_size(const Eigen::VectorXd& value, int expected,
                  const char* op) {
  if (value.size() != expected) {
    throw std::runtime_error(std::string(op) + ": callback returned size " +
                             std::to_string(value.size()) + ", expected " +
                             std::to_string(expected));
  }
}

void require_shape(const Eigen::MatrixXd& value, int rows, int cols,
                   const char* op) {
  if (value.rows() != rows || value.cols() != cols) {
    throw std::runtime_error(std::string(op) + ": callback returned " +
                             std::to_string(value.rows()) + "x" +
                             std::to_string(value.cols()) + ", expected " +
                             std::to_string(rows) + "x" +
                             std::to_string(cols));
  }
}

[[noreturn]] void rethrow_with_node(const std::exception& e, int node,
                                    double t, const char* op) {
  throw std::runtime_error(std::string(op) + ": node " + std::to_string(node) +
                           " (t = " + std::to_string(t) + "): " + e.what());
}

}  // namespace

void CtpProblem::validate() const {
  if (state_dim < 1) {
    throw std::invalid_argument("CtpProblem: state_dim must be >= 1");
  }
  if (eq_count < 0 || ineq_count < 0) {
    throw std::invalid_argument("CtpProblem: constraint counts must be >= 0");
  }
  if (!std::isfinite(horizon) || horizon <= 0.0) {
    throw std::invalid_argument("CtpProblem: horizon must be finite and > 0");
  }
  if (!cost || !cost_gradient) {
    throw std::invalid_argument("CtpProblem: cost callbacks are required");
  }
  if (eq_count > 0 && (!equality || !equality_jacobian)) {
    throw std::invalid_argument(
        "CtpProblem: equality callbacks required when eq_count > 0");
  }
  if (ineq_count > 0 && (!inequality || !inequality_jacobian)) {
    throw std::invalid_argument(
        "CtpProblem: inequality callbacks required when ineq_count > 0");
  }
  if (locality_radius <= 0.0) {
    throw std::invalid_argument("CtpProblem: locality_radius must be > 0");
  }
}

double CtpProblem::eval_cost(const Eigen::VectorXd& x, double t) const {
  require_state(*this, x, "eval_cost");
  return cost(x, t);
}

Eigen::VectorXd CtpProblem::eval_cost_gradient(const Eigen::VectorXd& x,
                                               double t) const {
  require_state(*this, x, "eval_cost_gradient");
  Eigen::VectorXd result = cost_gradient(x, t);
  require_size(result, state_dim, "eval_cost_gradient");
  return result;
}

Eigen::VectorXd CtpProblem::eval_equality(const Eigen::VectorXd& x,
                                          double t) const {
  require_state(*this, x, "eval_equality");
  if (eq_count == 0) {
    return Eigen::VectorXd(0);
  }
  Eigen::VectorXd result = equality(x, t);
  require_size(result, eq_count, "eval_equality");
  return result;
}

Eigen::MatrixXd CtpProblem::eval_equality_jacobian(const Eigen::VectorXd& x,
                                                   double t) const {
  require_state(*this, x, "eval_equality_jacobian");
  if (eq_count == 0) {
    return Eigen::MatrixXd(0, state_dim);
  }
  Eigen::MatrixXd result = equality_jacobian(x, t);
  require_shape(result, eq_count, state_dim, "eval_equality_jacobian");
  return result;
}

Eigen::VectorXd CtpProblem::eval_inequality(const Eigen::VectorXd& x,
                                            double t) const {
  require_state(*this, x, "eval_inequality");
  if (ineq_count == 0) {
    return Eigen::VectorXd(0);
  }
  Eigen::VectorXd result = inequality(x, t);
  require_size(result, ineq_count, "eval_inequality");
  return result;
}

Eigen::MatrixXd CtpProblem::eval_inequality_jacobian(const Eigen::VectorXd& x,
                                                     double t) const {
  require_state(*this, x, "eval_inequality_jacobian");
  if (ineq_count == 0) {
    return Eigen::MatrixXd(0, state_dim);
  }
  Eigen::MatrixXd result = inequality_jacobian(x, t);
  require_shape(result, ineq_count, state_dim, "eval_inequality_jacobian");
  return result;
}

Trajectory CtpProblem::reference_trajectory(
    std::shared_ptr<const TimeGrid> grid) const {
  if (!reference_state) {
    throw std::logic_error(name + ": no reference solution attached");
  }
  const int n = grid->n_nodes();
  Eigen::MatrixXd values(n, state_dim);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd xi = reference_state(grid->node(i));
    require_size(xi, state_dim, "reference_state");
    values.row(i) = xi.transpose();
  }
  return Trajectory(std::move(grid), std::move(values));
}

MultiplierPath CtpProblem::reference_multipliers(
    std::shared_ptr<const TimeGrid> grid) const {
  if (!reference_state) {
    throw std::logic_error(name + ": no reference solution attached");
  }
  const int n = grid->n_nodes();
  Eigen::MatrixXd eq = Eigen::MatrixXd::Zero(n, eq_count);
  Eigen::MatrixXd ineq = Eigen::MatrixXd::Zero(n, ineq_count);
  for (int i = 0; i < n; ++i) {
    const double t = grid->node(i);
    if (reference_eq_multiplier) {
      Eigen::VectorXd ui = reference_eq_multiplier(t);
      require_size(ui, eq_count, "reference_eq_multiplier");
      eq.row(i) = ui.transpose();
    }
    if (reference_ineq_multiplier) {
      Eigen::VectorXd vi = reference_ineq_multiplier(t);
      require_size(vi, ineq_count, "reference_ineq_multiplier");
      ineq.row(i) = vi.transpose();
    }
  }
  return MultiplierPath(std::move(grid), std::move(eq), std::move(ineq));
}

double objective(const CtpProblem& problem, const Trajectory& x) {
  const TimeGrid& grid = x.grid();
  if (x.state_dim() != problem.state_dim) {
    throw std::invalid_argument(
        "objective: trajectory state dimension does not match the problem");
  }
  Eigen::VectorXd samples(grid.n_nodes());
  for (int i = 0; i < grid.n_nodes(); ++i) {
    try {
      samples(i) = problem.eval_cost(x.at(i), grid.node(i));
    } catch (const std::exception& e) {
      rethrow_with_node(e, i, grid.node(i), "objective");
    }
  }
  return integrate(grid, samples);
}

Feasibility feasibility(const CtpProblem& problem, const Trajectory& x) {
  const TimeGrid& grid = x.grid();
  if (x.state_dim() != problem.state_dim) {
    throw std::invalid_argument(
        "feasibility: trajectory state dimension does not match the problem");
  }
  Feasibility result;
  for (int i = 0; i < grid.n_nodes(); ++i) {
    const double t = grid.node(i);
    try {
      if (problem.eq_count > 0) {
        const Eigen::VectorXd h = problem.eval_equality(x.at(i), t);
        result.eq_sup = std::max(result.eq_sup, h.cwiseAbs().maxCoeff());
      }
      if (problem.ineq_count > 0) {
        const Eigen::VectorXd g = problem.eval_inequality(x.at(i), t);
        result.ineq_sup = std::max(result.ineq_sup, g.maxCoeff());
      }
    } catch (const std::exception& e) {
      rethrow_with_node(e, i, t, "feasibility");
    }
  }
  result.ineq_sup = std::max(result.ineq_sup, 0.0);
  return result;
}

}  // namespace ctp
