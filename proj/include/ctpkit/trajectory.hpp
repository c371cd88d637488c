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
#include <memory>

#include "ctpkit/time_grid.hpp"

namespace ctp {

/**
 * State samples on a time grid, one row per node. Values are validated to be
 * finite at construction and the object is immutable afterwards.
 */
class Trajectory {
 public:
  Trajectory(std::shared_ptr<const TimeGrid> grid, Eigen::MatrixXd values);

  static Trajectory zeros(std::shared_ptr<const TimeGrid> grid, int state_dim);
  static Trajectory constant(std::shared_ptr<const TimeGrid> grid,
                             const Eigen::VectorXd& value);

  const TimeGrid& grid() const { return *grid_; }
  const std::shared_ptr<const TimeGrid>& grid_ptr() const { return grid_; }
  const Eigen::MatrixXd& values() const { return values_; }
  int state_dim() const { return static_cast<int>(values_.cols()); }
  int n_nodes() const { return static_cast<int>(values_.rows()); }
  Eigen::VectorXd at(int node) const { return values_.row(node).transpose(); }

  /// Largest componentwise distance to another trajectory on the same grid.
  double sup_distance(const Trajectory& other) const;

 private:
  std::shared_ptr<const TimeGrid> grid_;
  Eigen::MatrixXd values_;
};

/**
 * Multiplier samples paired with a trajectory: equality multipliers u (one
 * row per node, free sign) and inequality multipliers v (expected
 * nonnegative). Either block may have zero columns.
 *
 * Negative v entries are accepted at construction so that residual
 * measurement can report sign violations instead of refusing the input;
 * validate_signs() performs the hard check where a caller wants one.
 */
class MultiplierPath {
 public:
  MultiplierPath(std::shared_ptr<const TimeGrid> grid, Eigen::MatrixXd eq,
                 Eigen::MatrixXd ineq);

  static MultiplierPath zeros(std::shared_ptr<const TimeGrid> grid,
                              int eq_count, int ineq_count);

  const TimeGrid& grid() const { return *grid_; }
  const std::shared_ptr<const TimeGrid>& grid_ptr() const { return grid_; }
  const Eigen::MatrixXd& eq() const { return eq_; }
  const Eigen::MatrixXd& ineq() const { return ineq_; }
  int eq_count() const { return static_cast<int>(eq_.cols()); }
  int ineq_count() const { return static_cast<int>(ineq_.cols()); }
  int n_nodes() const { return static_cast<int>(eq_.rows()); }
  Eigen::VectorXd eq_at(int node) const { return eq_.row(node).transpose(); }
  Eigen::VectorXd ineq_at(int node) const {
    return ineq_.row(node).transpose();
  }

  /// Sup norm over nodes of the stacked (u, v) vector, max-norm per node.
  double sup_norm() const;

  /// Throws std::invalid_argument if any inequality multiplier is negative.
  void validate_signs() const;

 private:
  std::shared_ptr<const TimeGrid> grid_;
  Eigen::MatrixXd eq_;
  Eigen::MatrixXd ineq_;
};

}  // namespace ctp
