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

namespace ctp {

/**
 * Midpoint discretization of the horizon [0, T].
 *
 * Node i sits at t_i = (i + 1/2) * T / n and carries quadrature weight
 * w_i = T / n, so integrate() is the composite midpoint rule. Nodes are
 * strictly increasing and strictly interior to (0, T).
 */
class TimeGrid {
 public:
  TimeGrid(double horizon, int n_nodes);

  double horizon() const { return horizon_; }
  int n_nodes() const { return static_cast<int>(nodes_.size()); }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double node(int i) const { return nodes_(i); }
  double weight(int i) const { return weights_(i); }

  /// Same horizon and node count. Grids built from equal arguments compare
  /// equal, which is what trajectory/multiplier pairing relies on.
  bool compatible_with(const TimeGrid& other) const;

 private:
  double horizon_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
};

/// Builds a shared uniform midpoint grid. Throws std::invalid_argument when
/// horizon <= 0 or n_nodes < 1.
std::shared_ptr<const TimeGrid> make_uniform_grid(double horizon, int n_nodes);

/// Composite midpoint quadrature of per-node samples. Throws
/// std::invalid_argument on length mismatch.
double integrate(const TimeGrid& grid, const Eigen::VectorXd& node_samples);

}  // namespace ctp
