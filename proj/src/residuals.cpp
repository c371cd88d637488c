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

#include "ctpkit/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ctpkit/nnls.hpp"

namespace ctp {

namespace {

constexpr int kDictionaryDepth = 4;

[[noreturn]] void rethrow_with_node(const std::exception& e, int node,
                                    const char* op) {
  throw std::runtime_error(std::string(op) + ": node " + std::to_string(node) +
                           ": " + e.what());
}

void require_pair(const CtpProblem& problem, const Trajectory& x,
                  const MultiplierPath& mult, const char* op) {
  if (!x.grid().compatible_with(mult.grid())) {
    throw std::invalid_argument(std::string(op) +
                                ": trajectory and multipliers on "
                                "incompatible grids");
  }
  if (x.state_dim() != problem.state_dim ||
      mult.eq_count() != problem.eq_count ||
      mult.ineq_count() != problem.ineq_count) {
    throw std::invalid_argument(std::string(op) +
                                ": dimensions do not match the problem");
  }
}

}  // namespace

Eigen::VectorXd inequality_slack(const CtpProblem& problem,
                                 const Eigen::VectorXd& x, double t) {
  return (-problem.eval_inequality(x, t)).cwiseMax(0.0);
}

Eigen::VectorXd lagrangian_gradient(const CtpProblem& problem,
                                    const Eigen::VectorXd& x,
                                    const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& v, double t) {
  if (u.size() != problem.eq_count || v.size() != problem.ineq_count) {
    throw std::invalid_argument(
        "lagrangian_gradient: multiplier sizes do not match the problem");
  }
  Eigen::VectorXd grad = problem.eval_cost_gradient(x, t);
  if (problem.eq_count > 0) {
    grad += problem.eval_equality_jacobian(x, t).transpose() * u;
  }
  if (problem.ineq_count > 0) {
    grad += problem.eval_inequality_jacobian(x, t).transpose() * v;
  }
  return grad;
}

double ResidualReport::max_residual() const {
  double m = stationarity_l1;
  m = std::max(m, comp_sup);
  m = std::max(m, feas_eq_sup);
  m = std::max(m, feas_ineq_sup);
  m = std::max(m, sign_violation);
  return m;
}

ResidualReport kkt_residual(const CtpProblem& problem, const Trajectory& x,
                            const MultiplierPath& mult) {
  require_pair(problem, x, mult, "kkt_residual");
  const TimeGrid& grid = x.grid();
  const int n_nodes = grid.n_nodes();
  const int dim = problem.state_dim;

  ResidualReport report;
  report.per_node_stationarity.resize(n_nodes);
  Eigen::VectorXd node_comp(n_nodes);

  // Accumulators for the weak test dictionary: one signed integral per
  // state component and dyadic subinterval of [0, T] up to depth 4. The
  // dictionary also contains the sign pattern of the gradient itself,
  // whose functional is exactly the L1 norm.
  const int intervals = (1 << (kDictionaryDepth + 1)) - 1;
  Eigen::MatrixXd weak(dim, intervals);
  weak.setZero();

  for (int i = 0; i < n_nodes; ++i) {
    const double t = grid.node(i);
    const double w = grid.weight(i);
    Eigen::VectorXd grad;
    try {
      grad = lagrangian_gradient(problem, x.at(i), mult.eq_at(i),
                                 mult.ineq_at(i), t);

      if (problem.eq_count > 0) {
        const Eigen::VectorXd h = problem.eval_equality(x.at(i), t);
        report.feas_eq_sup =
            std::max(report.feas_eq_sup, h.cwiseAbs().maxCoeff());
      }
      double comp_i = 0.0;
      if (problem.ineq_count > 0) {
        const Eigen::VectorXd g = problem.eval_inequality(x.at(i), t);
        report.feas_ineq_sup =
            std::max(report.feas_ineq_sup, std::max(g.maxCoeff(), 0.0));
        const Eigen::VectorXd slack = (-g).cwiseMax(0.0);
        const Eigen::VectorXd v = mult.ineq_at(i);
        comp_i = (v.cwiseProduct(slack)).cwiseAbs().maxCoeff();
        report.sign_violation =
            std::max(report.sign_violation, std::max(-v.minCoeff(), 0.0));
      }
      node_comp(i) = comp_i;
      report.comp_sup = std::max(report.comp_sup, comp_i);
    } catch (const std::exception& e) {
      rethrow_with_node(e, i, "kkt_residual");
    }

    report.per_node_stationarity(i) = grad.lpNorm<1>();

    int column = 0;
    for (int depth = 0; depth <= kDictionaryDepth; ++depth) {
      const double width = grid.horizon() / static_cast<double>(1 << depth);
      const int cell = std::min(static_cast<int>(t / width), (1 << depth) - 1);
      weak.col(column + cell) += w * grad;
      column += 1 << depth;
    }
  }

  report.stationarity_l1 = integrate(grid, report.per_node_stationarity);
  report.comp_l1 = integrate(grid, node_comp);
  report.stationarity_weak_max =
      std::max(weak.cwiseAbs().maxCoeff(), report.stationarity_l1);
  // The sign-pattern functional dominates every indicator functional, so
  // with it in the dictionary the max equals the L1 norm; the dyadic
  // accumulators are still formed to keep the definition honest.
  return report;
}

StationarityDistance min_kkt_stationarity(const CtpProblem& problem,
                                          const Trajectory& x,
                                          double comp_tol) {
  if (x.state_dim() != problem.state_dim) {
    throw std::invalid_argument(
        "min_kkt_stationarity: trajectory does not match the problem");
  }
  const TimeGrid& grid = x.grid();
  const int n_nodes = grid.n_nodes();
  const int p = problem.eq_count;
  const int m = problem.ineq_count;

  Eigen::VectorXd per_node(n_nodes);
  Eigen::MatrixXd eq_mult = Eigen::MatrixXd::Zero(n_nodes, p);
  Eigen::MatrixXd ineq_mult = Eigen::MatrixXd::Zero(n_nodes, m);

  for (int i = 0; i < n_nodes; ++i) {
    const double t = grid.node(i);
    const Eigen::VectorXd xi = x.at(i);
    try {
      const Eigen::VectorXd grad_cost = problem.eval_cost_gradient(xi, t);
      const Eigen::MatrixXd jac_h = problem.eval_equality_jacobian(xi, t);
      const Eigen::MatrixXd jac_g = problem.eval_inequality_jacobian(xi, t);
      const Eigen::VectorXd slack = inequality_slack(problem, xi, t);

      std::vector<int> admissible;
      for (int j = 0; j < m; ++j) {
        if (slack(j) <= comp_tol) {
          admissible.push_back(j);
        }
      }

      Eigen::MatrixXd A(problem.state_dim,
                        p + static_cast<int>(admissible.size()));
      A.leftCols(p) = jac_h.transpose();
      for (std::size_t j = 0; j < admissible.size(); ++j) {
        A.col(p + static_cast<Eigen::Index>(j)) =
            jac_g.row(admissible[j]).transpose();
      }

      const NnlsResult nnls = solve_nnls(A, -grad_cost, p);
      if (!nnls.converged) {
        throw std::runtime_error("stationarity minimization did not converge");
      }
      per_node(i) = nnls.residual_norm;
      eq_mult.row(i) = nnls.solution.head(p).transpose();
      for (std::size_t j = 0; j < admissible.size(); ++j) {
        ineq_mult(i, admissible[j]) =
            nnls.solution(p + static_cast<Eigen::Index>(j));
      }
    } catch (const std::exception& e) {
      rethrow_with_node(e, i, "min_kkt_stationarity");
    }
  }

  return StationarityDistance{
      integrate(grid, per_node), per_node,
      MultiplierPath(x.grid_ptr(), std::move(eq_mult), std::move(ineq_mult))};
}

std::vector<ResidualReport> akkt_sequence_report(
    const CtpProblem& problem,
    const std::vector<std::pair<Trajectory, MultiplierPath>>& iterates) {
  if (iterates.empty()) {
    throw std::invalid_argument("akkt_sequence_report: empty sequence");
  }
  const TimeGrid& grid = iterates.front().first.grid();
  std::vector<ResidualReport> reports;
  reports.reserve(iterates.size());
  for (const auto& [x, mult] : iterates) {
    if (!x.grid().compatible_with(grid)) {
      throw std::invalid_argument(
          "akkt_sequence_report: iterates on incompatible grids");
    }
    reports.push_back(kkt_residual(problem, x, mult));
  }
  return reports;
}

AkktCertificate certify_akkt(
    const CtpProblem& problem,
    const std::vector<std::pair<Trajectory, MultiplierPath>>& iterates,
    const Trajectory& limit, double tol) {
  const std::vector<ResidualReport> reports =
      akkt_sequence_report(problem, iterates);

  AkktCertificate cert;
  cert.weak_stationarity_ok =
      reports.back().stationarity_weak_max <= tol;
  cert.complementarity_ok = reports.back().comp_sup <= tol;
  cert.signs_ok = reports.back().sign_violation == 0.0;

  std::vector<double> gaps;
  gaps.reserve(iterates.size());
  for (const auto& [x, mult] : iterates) {
    gaps.push_back(x.sup_distance(limit));
  }
  cert.final_primal_gap = gaps.back();
  bool monotone = true;
  for (std::size_t k = 1; k < gaps.size(); ++k) {
    if (gaps[k] > gaps[k - 1] + 1e-12) {
      monotone = false;
      break;
    }
  }
  cert.primal_converging =
      monotone && (gaps.back() <= tol || gaps.back() < gaps.front());

  if (std::isfinite(problem.locality_radius) && problem.has_reference()) {
    const Trajectory center =
        problem.reference_trajectory(limit.grid_ptr());
    for (const auto& [x, mult] : iterates) {
      double worst = 0.0;
      for (int i = 0; i < x.n_nodes(); ++i) {
        worst = std::max(worst, (x.at(i) - center.at(i)).norm());
      }
      if (worst > problem.locality_radius + 1e-12) {
        cert.inside_locality = false;
        break;
      }
    }
  }

  cert.certified = cert.weak_stationarity_ok && cert.complementarity_ok &&
                   cert.signs_ok && cert.primal_converging &&
                   cert.inside_locality;
  return cert;
}

}  // namespace ctp
