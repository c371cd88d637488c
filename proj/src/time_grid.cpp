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

#include "ctpkit/time_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace ctp {

TimeGrid::TimeGrid(double horizon, int n_nodes) : horizon_(horizon) {
  if (!std::isfinite(horizon) || horizon <= 0.0) {
    throw std::invalid_argument("TimeGrid: horizon must be finite and > 0");
  }
  if (n_nodes < 1) {
    throw std::invalid_argument("TimeGrid: n_nodes must be >= 1");
  }
  const double step = horizon / static_cast<double>(n_nodes);
  nodes_.resize(n_nodes);
  weights_.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    nodes_(i) = (static_cast<double>(i) + 0.5) * step;
    weights_(i) = step;
  }
}

bool TimeGrid::compatible_with(const TimeGrid& other) const {
  return horizon_ == other.horizon_ && nodes_.size() == other.nodes_.size();
}

std::shared_ptr<const TimeGrid> make_uniform_grid(double horizon,
                                                  int n_nodes) {
  return std::make_shared<const TimeGrid>(horizon, n_nodes);
}

double integrate(const TimeGrid& grid, const Eigen::VectorXd& node_samples) {
  if (node_samples.size() != grid.nodes().size()) {
    throw std::invalid_argument(
        "integrate: sample count does not match the grid node count");
  }
  return grid.weights().dot(node_samples);
}

}  // namespace ctp
