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

#include "ctpkit/alm.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ctp {

namespace {

constexpr double kUnboundedFloor = -1e12;
constexpr double kArmijoSlope = 1e-4;
constexpr int kNewtonMaxDim = 8;

bool suspicious_value(double value) {
  return !std::isfinite(value) || value < kUnboundedFloor;
}

// Central finite-difference Hessian of the node augmented Lagrangian,
// symmetrized. Used only for small states.
Eigen::MatrixXd fd_hessian(const CtpProblem& problem, double t,
                           const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u_bar,
                           const Eigen::VectorXd& v_bar, double rho) {
  const int n = static_cast<int>(x.size());
  const double step = 1e-6 * (1.0 + x.cwiseAbs().maxCoeff());
  Eigen::MatrixXd hess(n, n);
  Eigen::VectorXd probe = x;
  for (int j = 0; j < n; ++j) {
    probe(j) = x(j) + step;
    const Eigen::VectorXd plus =
        augmented_lagrangian(problem, probe, u_bar, v_bar, rho, t).gradient;
    probe(j) = x(j) - step;
    const Eigen::VectorXd minus =
        augmented_lagrangian(problem, probe, u_bar, v_bar, rho, t).gradient;
    probe(j) = x(j);
    hess.col(j) = (plus - minus) / (2.0 * step);
  }
  return 0.5 * (hess + hess.transpose());
}

}  // namespace

double AlmConfig::inner_tol(int outer_iteration) const {
  if (inner_tol_schedule) {
    return inner_tol_schedule(outer_iteration);
  }
  return std::max(std::pow(10.0, -outer_iteration), 1e-8);
}

void AlmConfig::validate() const {
  if (!(rho0 > 0.0)) {
    throw std::invalid_argument("AlmConfig: rho0 must be > 0");
  }
  if (!(rho_growth > 1.0)) {
    throw std::invalid_argument("AlmConfig: rho_growth must be > 1");
  }
  if (!(rho_max > 0.0)) {
    throw std::invalid_argument("AlmConfig: rho_max must be > 0");
  }
  if (!(tau_progress > 0.0) || !(tau_progress < 1.0)) {
    throw std::invalid_argument("AlmConfig: tau_progress must be in (0, 1)");
  }
  if (!(u_safeguard > 0.0) || !(v_safeguard > 0.0)) {
    throw std::invalid_argument("AlmConfig: safeguards must be > 0");
  }
  if (outer_max < 1 || inner_max < 1) {
    throw std::invalid_argument("AlmConfig: iteration caps must be >= 1");
  }
  if (!(stop_tol > 0.0)) {
    throw std::invalid_argument("AlmConfig: stop_tol must be > 0");
  }
  if (default_nodes < 1) {
    throw std::invalid_argument("AlmConfig: default_nodes must be >= 1");
  }
}

AlEvaluation augmented_lagrangian(const CtpProblem& problem,
                                  const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& u_bar,
                                  const Eigen::VectorXd& v_bar, double rho,
                                  double t) {
  if (!(rho > 0.0)) {
    throw std::invalid_argument("augmented_lagrangian: rho must be > 0");
  }
  if (u_bar.size() != problem.eq_count ||
      v_bar.size() != problem.ineq_count) {
    throw std::invalid_argument(
        "augmented_lagrangian: multiplier sizes do not match the problem");
  }

  AlEvaluation eval;
  eval.value = problem.eval_cost(x, t);
  eval.gradient = problem.eval_cost_gradient(x, t);

  if (problem.eq_count > 0) {
    const Eigen::VectorXd h = problem.eval_equality(x, t);
    const Eigen::MatrixXd jac = problem.eval_equality_jacobian(x, t);
    eval.value += u_bar.dot(h) + 0.5 * rho * h.squaredNorm();
    eval.gradient += jac.transpose() * (u_bar + rho * h);
  }
  if (problem.ineq_count > 0) {
    const Eigen::VectorXd g = problem.eval_inequality(x, t);
    const Eigen::MatrixXd jac = problem.eval_inequality_jacobian(x, t);
    const Eigen::VectorXd shifted = (v_bar + rho * g).cwiseMax(0.0);
    eval.value +=
        (shifted.squaredNorm() - v_bar.squaredNorm()) / (2.0 * rho);
    eval.gradient += jac.transpose() * shifted;
  }
  return eval;
}

InnerResult inner_solve(const CtpProblem& problem, double t,
                        Eigen::VectorXd x0, const Eigen::VectorXd& u_bar,
                        const Eigen::VectorXd& v_bar, double rho, double tol,
                        int max_iterations) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("inner_solve: tol must be > 0");
  }

  InnerResult result;
  result.x = std::move(x0);
  double gradient_seed = 1.0;

  for (int iter = 0; iter < max_iterations; ++iter) {
    const AlEvaluation eval =
        augmented_lagrangian(problem, result.x, u_bar, v_bar, rho, t);
    result.grad_norm = eval.gradient.lpNorm<Eigen::Infinity>();
    result.iterations = iter;

    if (suspicious_value(eval.value)) {
      result.status = InnerStatus::unbounded;
      return result;
    }
    if (result.grad_norm <= tol) {
      result.status = InnerStatus::converged;
      return result;
    }

    Eigen::VectorXd direction = -eval.gradient;
    bool newton = false;
    if (problem.state_dim <= kNewtonMaxDim) {
      const Eigen::MatrixXd hess =
          fd_hessian(problem, t, result.x, u_bar, v_bar, rho);
      Eigen::LLT<Eigen::MatrixXd> llt(hess);
      if (llt.info() == Eigen::Success) {
        const Eigen::VectorXd candidate = llt.solve(eval.gradient);
        if (candidate.dot(eval.gradient) > 0.0) {
          direction = -candidate;
          newton = true;
        }
      }
    }

    const double slope = eval.gradient.dot(direction);
    double step = newton ? 1.0 : gradient_seed;
    bool accepted = false;
    for (int back = 0; back < 80; ++back) {
      const Eigen::VectorXd trial_x = result.x + step * direction;
      const double trial =
          augmented_lagrangian(problem, trial_x, u_bar, v_bar, rho, t).value;
      if (!std::isnan(trial) &&
          trial <= eval.value + kArmijoSlope * step * slope) {
        result.x = trial_x;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      result.status = InnerStatus::iteration_limit;
      result.iterations = iter + 1;
      return result;
    }
    if (!newton) {
      gradient_seed = 2.0 * step;
    }
  }

  const AlEvaluation eval =
      augmented_lagrangian(problem, result.x, u_bar, v_bar, rho, t);
  result.grad_norm = eval.gradient.lpNorm<Eigen::Infinity>();
  result.iterations = max_iterations;
  result.status = suspicious_value(eval.value)
                      ? InnerStatus::unbounded
                      : (result.grad_norm <= tol ? InnerStatus::converged
                                                 : InnerStatus::iteration_limit);
  return result;
}

std::string to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::converged_kkt:
      return "converged_kkt";
    case SolverStatus::akkt_no_kkt_progress:
      return "akkt_no_kkt_progress";
    case SolverStatus::penalty_cap_reached:
      return "penalty_cap_reached";
    case SolverStatus::iteration_cap_reached:
      return "iteration_cap_reached";
    case SolverStatus::unbounded_below_suspected:
      return "unbounded_below_suspected";
  }
  return "unknown";
}

const SolverIterate& SolverTrace::final_iterate() const {
  if (iterates.empty()) {
    throw std::logic_error("SolverTrace: no iterates recorded");
  }
  return iterates.back();
}

SolverTrace solve(const CtpProblem& problem, const AlmConfig& config) {
  config.validate();
  problem.validate();

  std::shared_ptr<const TimeGrid> grid;
  Eigen::MatrixXd x_prev;
  if (config.initial_trajectory) {
    if (config.initial_trajectory->state_dim() != problem.state_dim) {
      throw std::invalid_argument(
          "solve: initial trajectory does not match the problem state "
          "dimension");
    }
    grid = config.initial_trajectory->grid_ptr();
    x_prev = config.initial_trajectory->values();
  } else {
    grid = make_uniform_grid(problem.horizon, config.default_nodes);
    x_prev = Eigen::MatrixXd::Zero(grid->n_nodes(), problem.state_dim);
  }
  const int n_nodes = grid->n_nodes();
  const int p = problem.eq_count;
  const int m = problem.ineq_count;

  SolverTrace trace;
  const bool clip_to_ball =
      std::isfinite(problem.locality_radius) && problem.has_reference();
  if (std::isfinite(problem.locality_radius) && !problem.has_reference()) {
    trace.notes.push_back(
        "finite locality_radius but no reference solution: ball clipping "
        "skipped");
  }
  Eigen::MatrixXd ball_center;
  if (clip_to_ball) {
    ball_center = problem.reference_trajectory(grid).values();
  }

  Eigen::MatrixXd u_bar = Eigen::MatrixXd::Zero(n_nodes, p);
  Eigen::MatrixXd v_bar = Eigen::MatrixXd::Zero(n_nodes, m);
  double rho = config.rho0;
  double progress_prev = std::numeric_limits<double>::infinity();

  for (int k = 1; k <= config.outer_max; ++k) {
    const double tol_k = config.inner_tol(k);
    Eigen::MatrixXd x_next(n_nodes, problem.state_dim);
    long inner_total = 0;
    bool unbounded = false;

    for (int i = 0; i < n_nodes; ++i) {
      InnerResult inner =
          inner_solve(problem, grid->node(i), x_prev.row(i).transpose(),
                      u_bar.row(i).transpose(), v_bar.row(i).transpose(), rho,
                      tol_k, config.inner_max);
      inner_total += inner.iterations;
      if (inner.status == InnerStatus::unbounded) {
        trace.notes.push_back("outer " + std::to_string(k) + ", node " +
                              std::to_string(i) +
                              ": augmented Lagrangian fell below -1e12");
        unbounded = true;
        break;
      }
      x_next.row(i) = inner.x.transpose();
    }
    if (unbounded) {
      trace.status = SolverStatus::unbounded_below_suspected;
      return trace;
    }

    bool ball_clipped = false;
    if (clip_to_ball) {
      for (int i = 0; i < n_nodes; ++i) {
        const Eigen::VectorXd offset =
            x_next.row(i).transpose() - ball_center.row(i).transpose();
        const double distance = offset.norm();
        if (distance > problem.locality_radius) {
          x_next.row(i) =
              (ball_center.row(i).transpose() +
               offset * (problem.locality_radius / distance))
                  .transpose();
          ball_clipped = true;
        }
      }
    }

    // First-order multiplier estimates and the progress measure, both on
    // the unprojected values; safeguard projection happens afterwards so
    // that divergence stays visible to the measure.
    Eigen::MatrixXd u_hat(n_nodes, p);
    Eigen::MatrixXd v_hat(n_nodes, m);
    double feas_eq = 0.0;
    double feas_ineq = 0.0;
    double comp_unprojected = 0.0;
    for (int i = 0; i < n_nodes; ++i) {
      const double t = grid->node(i);
      const Eigen::VectorXd xi = x_next.row(i).transpose();
      if (p > 0) {
        const Eigen::VectorXd h = problem.eval_equality(xi, t);
        u_hat.row(i) = (u_bar.row(i).transpose() + rho * h).transpose();
        feas_eq = std::max(feas_eq, h.cwiseAbs().maxCoeff());
      }
      if (m > 0) {
        const Eigen::VectorXd g = problem.eval_inequality(xi, t);
        const Eigen::VectorXd v_new =
            (v_bar.row(i).transpose() + rho * g).cwiseMax(0.0);
        v_hat.row(i) = v_new.transpose();
        feas_ineq = std::max(feas_ineq, std::max(g.maxCoeff(), 0.0));
        const Eigen::VectorXd slack = (-g).cwiseMax(0.0);
        comp_unprojected = std::max(
            comp_unprojected, v_new.cwiseProduct(slack).maxCoeff());
      }
    }
    const double progress = std::max({feas_eq, feas_ineq, comp_unprojected});

    const Eigen::MatrixXd u_proj =
        u_hat.cwiseMax(-config.u_safeguard).cwiseMin(config.u_safeguard);
    const Eigen::MatrixXd v_proj = v_hat.cwiseMin(config.v_safeguard);
    double clip_amount = 0.0;
    if (p > 0) {
      clip_amount = (u_proj - u_hat).cwiseAbs().maxCoeff();
    }
    if (m > 0) {
      clip_amount =
          std::max(clip_amount, (v_proj - v_hat).cwiseAbs().maxCoeff());
    }

    Trajectory x_traj(grid, x_next);
    MultiplierPath mult(grid, u_proj, v_proj);
    ResidualReport report = kkt_residual(problem, x_traj, mult);
    const double mult_sup = mult.sup_norm();

    trace.iterates.push_back(SolverIterate{std::move(x_traj),
                                           std::move(mult), rho,
                                           std::move(report), inner_total,
                                           mult_sup, progress, clip_amount,
                                           ball_clipped});
    const SolverIterate& current = trace.iterates.back();

    // Penalty update precedes the stop checks so that a cap overshoot is
    // reported at the iteration that caused it.
    const bool no_progress = progress > config.tau_progress * progress_prev;
    double rho_next = rho;
    if (no_progress) {
      rho_next = rho * config.rho_growth;
    }

    // Growth is judged the way the qualification module judges
    // boundedness: the run counts as diverging when the sup norm has grown
    // by at least the penalty factor since the first iterate and the last
    // three values have not stabilized to within 10%.
    const std::size_t count = trace.iterates.size();
    bool multipliers_growing = false;
    if (count >= 4) {
      const double first = trace.iterates.front().multiplier_sup;
      double lo = current.multiplier_sup;
      double hi = current.multiplier_sup;
      for (std::size_t j = count - 3; j < count; ++j) {
        lo = std::min(lo, trace.iterates[j].multiplier_sup);
        hi = std::max(hi, trace.iterates[j].multiplier_sup);
      }
      const bool stabilized = hi <= 1.1 * lo;
      multipliers_growing =
          first > 0.0 && !stabilized &&
          current.multiplier_sup >= config.rho_growth * first;
    }
    const bool asymptotic_pass =
        current.report.stationarity_weak_max <= config.stop_tol &&
        current.report.comp_sup <= config.stop_tol &&
        current.report.sign_violation == 0.0;

    if (asymptotic_pass && multipliers_growing) {
      trace.status = SolverStatus::akkt_no_kkt_progress;
      trace.notes.push_back(
          "stationarity and complementarity reached " +
          std::to_string(config.stop_tol) +
          " while the multiplier sup norm kept growing: asymptotic "
          "stationarity without convergent multipliers");
      return trace;
    }
    if (current.report.max_residual() <= config.stop_tol) {
      trace.status = SolverStatus::converged_kkt;
      return trace;
    }
    if (rho_next > config.rho_max) {
      trace.status = SolverStatus::penalty_cap_reached;
      return trace;
    }

    rho = rho_next;
    progress_prev = progress;
    x_prev = x_next;
    u_bar = u_proj;
    v_bar = v_proj;
  }

  trace.status = SolverStatus::iteration_cap_reached;
  return trace;
}

std::vector<std::pair<Trajectory, MultiplierPath>> export_trace(
    const SolverTrace& trace) {
  std::vector<std::pair<Trajectory, MultiplierPath>> pairs;
  pairs.reserve(trace.iterates.size());
  for (const SolverIterate& iterate : trace.iterates) {
    pairs.emplace_back(iterate.x, iterate.multipliers);
  }
  return pairs;
}

}  // namespace ctp
