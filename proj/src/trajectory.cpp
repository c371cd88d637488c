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

#include "ctpkit/trajectory.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace ctp {

namespace {

void require_grid(const std::shared_ptr<const TimeGrid>& grid,
                  const char* who) {
  if (!grid) {
    throw std::invalid_argument(std::string(who) + ": null grid");
  }
}

void require_rows(const Eigen::MatrixXd& values, const TimeGrid& grid,
                  const char* who) {
  if (values.rows() != grid.nodes().size()) {
    throw std::invalid_argument(std::string(who) +
                                ": row count does not match grid node count");
  }
}

void require_finite(const Eigen::MatrixXd& values, const char* who) {
  if (!values.allFinite()) {
    throw std::invalid_argument(std::string(who) + ": non-finite entry");
  }
}

}  // namespace

Trajectory::Trajectory(std::shared_ptr<const TimeGrid> grid,
                       Eigen::MatrixXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  require_grid(grid_, "Trajectory");
  require_rows(values_, *grid_, "Trajectory");
  require_finite(values_, "Trajectory");
  if (values_.cols() < 1) {
    throw std::invalid_argument("Trajectory: state dimension must be >= 1");
  }
}

Trajectory Trajectory::zeros(std::shared_ptr<const TimeGrid> grid,
                             int state_dim) {
  require_grid(grid, "Trajectory::zeros");
  const auto rows = grid->nodes().size();
  return Trajectory(std::move(grid),
                    Eigen::MatrixXd::Zero(rows, state_dim));
}

Trajectory Trajectory::constant(std::shared_ptr<const TimeGrid> grid,
                                const Eigen::VectorXd& value) {
  require_grid(grid, "Trajectory::constant");
  const auto rows = grid->nodes().size();
  Eigen::MatrixXd values(rows, value.size());
  values.rowwise() = value.transpose();
  return Trajectory(std::move(grid), std::move(values));
}

double Trajectory::sup_distance(const Trajectory& other) const {
  if (!grid_->compatible_with(other.grid()) ||
      values_.cols() != other.values_.cols()) {
    throw std::invalid_argument(
        "Trajectory::sup_distance: incompatible trajectories");
  }
  return (values_ - other.values_).cwiseAbs().maxCoeff();
}

MultiplierPath::MultiplierPath(std::shared_ptr<const TimeGrid> grid,
                               Eigen::MatrixXd eq, Eigen::MatrixXd ineq)
    : grid_(std::move(grid)), eq_(std::move(eq)), ineq_(std::move(ineq)) {
  require_grid(grid_, "MultiplierPath");
  const auto rows = grid_->nodes().size();
  if (eq_.size() == 0 && eq_.rows() != rows) {
    eq_.resize(rows, 0);
  }
  if (ineq_.size() == 0 && ineq_.rows() != rows) {
    ineq_.resize(rows, 0);
  }
  require_rows(eq_, *grid_, "MultiplierPath(eq)");
  require_rows(ineq_, *grid_, "MultiplierPath(ineq)");
  require_finite(eq_, "MultiplierPath(eq)");
  require_finite(ineq_, "MultiplierPath(ineq)");
}

MultiplierPath MultiplierPath::zeros(std::shared_ptr<const TimeGrid> grid,
                                     int eq_count, int ineq_count) {
  require_grid(grid, "MultiplierPath::zeros");
  const auto rows = grid->nodes().size();
  return MultiplierPath(std::move(grid),
                        Eigen::MatrixXd::Zero(rows, eq_count),
                        Eigen::MatrixXd::Zero(rows, ineq_count));
}

double MultiplierPath::sup_norm() const {
  double sup = 0.0;
  if (eq_.cols() > 0) {
    sup = eq_.cwiseAbs().maxCoeff();
  }
  if (ineq_.cols() > 0) {
    sup = std::max(sup, ineq_.cwiseAbs().maxCoeff());
  }
  return sup;
}

void MultiplierPath::validate_signs() const {
  if (ineq_.cols() > 0 && ineq_.minCoeff() < 0.0) {
    throw std::invalid_argument(
        "MultiplierPath: negative inequality multiplier");
  }
}

}  // namespace ctp
