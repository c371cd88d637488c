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

#include "ctpkit/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ctp {

namespace {

Eigen::Vector2d vec2(double a, double b) { return Eigen::Vector2d(a, b); }

CtpProblem build_example1() {
  CtpProblem problem;
  problem.name = "example1";
  problem.state_dim = 2;
  problem.eq_count = 1;
  problem.ineq_count = 1;
  problem.horizon = 1.0;

  problem.cost = [](const Eigen::VectorXd& x, double) { return x(1); };
  problem.cost_gradient = [](const Eigen::VectorXd&, double) {
    return vec2(0.0, 1.0);
  };
  problem.equality = [](const Eigen::VectorXd& x, double) {
    Eigen::VectorXd h(1);
    h(0) = x(0) * x(1);
    return h;
  };
  problem.equality_jacobian = [](const Eigen::VectorXd& x, double) {
    Eigen::MatrixXd jac(1, 2);
    jac << x(1), x(0);
    return jac;
  };
  problem.inequality = [](const Eigen::VectorXd& x, double) {
    Eigen::VectorXd g(1);
    g(0) = -x(0);
    return g;
  };
  problem.inequality_jacobian = [](const Eigen::VectorXd&, double) {
    Eigen::MatrixXd jac(1, 2);
    jac << -1.0, 0.0;
    return jac;
  };
  problem.reference_state = [](double) { return vec2(0.0, 1.0); };
  return problem;
}

CtpProblem build_example2() {
  CtpProblem problem;
  problem.name = "example2";
  problem.state_dim = 2;
  problem.eq_count = 0;
  problem.ineq_count = 2;
  problem.horizon = 1.0;

  problem.cost = [](const Eigen::VectorXd& x, double t) {
    return (t - 0.5) * x(0);
  };
  problem.cost_gradient = [](const Eigen::VectorXd&, double t) {
    return vec2(t - 0.5, 0.0);
  };
  problem.inequality = [](const Eigen::VectorXd& x, double t) {
    Eigen::VectorXd g(2);
    g(0) = -(t - 0.5) * x(0) * x(0) * x(0) + x(1);
    g(1) = -x(1);
    return g;
  };
  problem.inequality_jacobian = [](const Eigen::VectorXd& x, double t) {
    Eigen::MatrixXd jac(2, 2);
    jac << -3.0 * (t - 0.5) * x(0) * x(0), 1.0, 0.0, -1.0;
    return jac;
  };
  problem.reference_state = [](double) { return vec2(0.0, 0.0); };
  return problem;
}

CtpProblem build_tracking() {
  CtpProblem problem;
  problem.name = "tracking";
  problem.state_dim = 1;
  problem.eq_count = 0;
  problem.ineq_count = 1;
  problem.horizon = 1.0;

  problem.cost = [](const Eigen::VectorXd& x, double t) {
    const double d = x(0) - (t - 0.5);
    return 0.5 * d * d;
  };
  problem.cost_gradient = [](const Eigen::VectorXd& x, double t) {
    Eigen::VectorXd grad(1);
    grad(0) = x(0) - (t - 0.5);
    return grad;
  };
  problem.inequality = [](const Eigen::VectorXd& x, double) {
    Eigen::VectorXd g(1);
    g(0) = x(0);
    return g;
  };
  problem.inequality_jacobian = [](const Eigen::VectorXd&, double) {
    Eigen::MatrixXd jac(1, 1);
    jac << 1.0;
    return jac;
  };
  problem.reference_state = [](double t) {
    Eigen::VectorXd x(1);
    x(0) = std::min(t - 0.5, 0.0);
    return x;
  };
  problem.reference_ineq_multiplier = [](double t) {
    Eigen::VectorXd v(1);
    v(0) = std::max(t - 0.5, 0.0);
    return v;
  };
  return problem;
}

}  // namespace

BuiltinProblemId parse_problem_id(std::string_view name) {
  if (name == "example1") {
    return BuiltinProblemId::example1;
  }
  if (name == "example2") {
    return BuiltinProblemId::example2;
  }
  if (name == "tracking") {
    return BuiltinProblemId::tracking;
  }
  throw std::invalid_argument("unknown problem id: " + std::string(name));
}

std::string_view to_string(BuiltinProblemId id) {
  switch (id) {
    case BuiltinProblemId::example1:
      return "example1";
    case BuiltinProblemId::example2:
      return "example2";
    case BuiltinProblemId::tracking:
      return "tracking";
  }
  return "unknown";
}

CtpProblem build(BuiltinProblemId id) {
  switch (id) {
    case BuiltinProblemId::example1:
      return build_example1();
    case BuiltinProblemId::example2:
      return build_example2();
    case BuiltinProblemId::tracking:
      return build_tracking();
  }
  throw std::invalid_argument("build: unknown problem id");
}

std::pair<Trajectory, MultiplierPath> closed_form_iterate(
    BuiltinProblemId id, int k, std::shared_ptr<const TimeGrid> grid) {
  if (k < 1) {
    throw std::invalid_argument("closed_form_iterate: k must be >= 1");
  }
  if (!grid) {
    throw std::invalid_argument("closed_form_iterate: null grid");
  }
  const int n = grid->n_nodes();
  const double kk = static_cast<double>(k);

  if (id == BuiltinProblemId::example1) {
    Eigen::MatrixXd x(n, 2);
    x.col(0).setConstant(-1.0 / kk);
    x.col(1).setConstant(1.0);
    Eigen::MatrixXd u = Eigen::MatrixXd::Constant(n, 1, kk);
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(n, 1, kk);
    return {Trajectory(grid, std::move(x)),
            MultiplierPath(grid, std::move(u), std::move(v))};
  }

  if (id == BuiltinProblemId::example2) {
    Eigen::MatrixXd x(n, 2);
    Eigen::MatrixXd v(n, 2);
    for (int i = 0; i < n; ++i) {
      const double s = grid->node(i) - 0.5;
      if (s == 0.0) {
        throw std::runtime_error(
            "closed_form_iterate: grid node " + std::to_string(i) +
            " sits at t = 1/2 where the multipliers are singular; use an "
            "even node count");
      }
      x(i, 0) = s / kk;
      x(i, 1) = 0.0;
      v(i, 0) = kk * kk / (3.0 * s * s);
      v(i, 1) = v(i, 0);
    }
    return {Trajectory(grid, std::move(x)),
            MultiplierPath(grid, Eigen::MatrixXd(n, 0), std::move(v))};
  }

  throw std::invalid_argument(
      "closed_form_iterate: no closed-form iterate family for problem '" +
      std::string(to_string(id)) + "'");
}

}  // namespace ctp
