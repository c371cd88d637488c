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

namespace ctp {

struct NnlsResult {
  Eigen::VectorXd solution;
  double residual_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/**
 * Dense least squares with partial nonnegativity:
 *
 *   minimize |A z - rhs|_2  subject to z_i >= 0 for i >= num_free.
 *
 * Columns [0, num_free) are unconstrained, the rest are sign-constrained.
 * Active-set method in the Lawson-Hanson style; rank-deficient passive-set
 * subproblems are handled by a minimum-norm solve, so duplicate or opposing
 * columns do not cycle. Intended for the small per-node systems that
 * stationarity minimization produces (state_dim rows, a handful of columns).
 *
 * Throws std::invalid_argument on inconsistent shapes.
 */
NnlsResult solve_nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs,
                      int num_free, int max_iterations = 0);

}  // namespace ctp
