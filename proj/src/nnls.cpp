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

#include "ctpkit/nnls.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <stdexcept>
#include <vector>

namespace ctp {

namespace {

// Minimum-norm least squares on the passive columns; entries outside the
// passive set stay zero.
Eigen::VectorXd passive_solve(const Eigen::MatrixXd& A,
                              const Eigen::VectorXd& rhs,
                              const std::vector<int>& passive) {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(A.cols());
  if (passive.empty()) {
    return z;
  }
  Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(passive.size()));
  for (std::size_t j = 0; j < passive.size(); ++j) {
    sub.col(static_cast<Eigen::Index>(j)) = A.col(passive[j]);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sub);
  const Eigen::VectorXd sol = cod.solve(rhs);
  for (std::size_t j = 0; j < passive.size(); ++j) {
    z(passive[j]) = sol(static_cast<Eigen::Index>(j));
  }
  return z;
}

}  // namespace

NnlsResult solve_nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& rhs,
                      int num_free, int max_iterations) {
  if (A.rows() != rhs.size()) {
    throw std::invalid_argument("solve_nnls: A rows must match rhs size");
  }
  if (num_free < 0 || num_free > A.cols()) {
    throw std::invalid_argument("solve_nnls: num_free out of range");
  }
  const int cols = static_cast<int>(A.cols());
  if (cols == 0) {
    NnlsResult empty;
    empty.solution = Eigen::VectorXd::Zero(0);
    empty.residual_norm = rhs.norm();
    empty.converged = true;
    return empty;
  }
  if (max_iterations <= 0) {
    max_iterations = 30 + 10 * cols;
  }

  std::vector<int> passive;
  std::vector<bool> in_passive(cols, false);
  for (int j = 0; j < num_free; ++j) {
    passive.push_back(j);
    in_passive[j] = true;
  }

  NnlsResult result;
  Eigen::VectorXd z = passive_solve(A, rhs, passive);
  const double gradient_tol =
      1e-10 * std::max(1.0, (A.transpose() * rhs).cwiseAbs().maxCoeff());

  int iterations = 0;
  while (iterations < max_iterations) {
    ++iterations;
    const Eigen::VectorXd w = A.transpose() * (rhs - A * z);

    int candidate = -1;
    double best = gradient_tol;
    for (int j = num_free; j < cols; ++j) {
      if (!in_passive[j] && w(j) > best) {
        best = w(j);
        candidate = j;
      }
    }
    if (candidate < 0) {
      result.converged = true;
      break;
    }
    passive.push_back(candidate);
    in_passive[candidate] = true;

    Eigen::VectorXd trial = passive_solve(A, rhs, passive);
    // Restore feasibility of constrained passive entries before accepting.
    // Each pass pins the blocking entry to zero and drops it from the
    // passive set, so the loop terminates.
    while (true) {
      double alpha = 1.0;
      int block = -1;
      for (int j : passive) {
        if (j >= num_free && trial(j) < 0.0) {
          const double ratio = z(j) / (z(j) - trial(j));
          if (ratio < alpha) {
            alpha = ratio;
            block = j;
          }
        }
      }
      if (block < 0) {
        z = trial;
        break;
      }
      z += alpha * (trial - z);
      z(block) = 0.0;
      std::vector<int> kept;
      for (int j : passive) {
        if (j >= num_free && z(j) <= 0.0) {
          z(j) = 0.0;
          in_passive[j] = false;
        } else {
          kept.push_back(j);
        }
      }
      passive = kept;
      trial = passive_solve(A, rhs, passive);
    }
  }

  result.solution = z;
  result.residual_norm = (A * z - rhs).norm();
  result.iterations = iterations;
  return result;
}

}  // namespace ctp
