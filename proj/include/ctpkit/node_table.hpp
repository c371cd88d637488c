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
#include <string>

#include "ctpkit/time_grid.hpp"

namespace ctp {

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double value);

/**
 * Plain-text node tables: one line per node, whitespace-separated reals,
 * first column the node time followed by the value columns. Diff-able and
 * language-neutral; all reals use shortest round-trip formatting.
 */
std::string format_node_table(const TimeGrid& grid,
                              const Eigen::MatrixXd& values);

void write_node_table(const std::string& path, const TimeGrid& grid,
                      const Eigen::MatrixXd& values);

/**
 * Reads a node table and checks it against an expected grid: row count must
 * equal the node count, each time must match the grid node to 1e-12, and
 * each row must carry exactly expected_cols value columns. Violations throw
 * std::runtime_error naming the offending 1-based row.
 */
Eigen::MatrixXd read_node_table(const std::string& path, const TimeGrid& grid,
                                int expected_cols);

}  // namespace ctp
