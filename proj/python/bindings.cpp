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

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "ctpkit/alm.hpp"
#include "ctpkit/cq.hpp"
#include "ctpkit/node_table.hpp"
#include "ctpkit/problems.hpp"
#include "ctpkit/residuals.hpp"

namespace py = pybind11;
using namespace ctp;

namespace {

std::shared_ptr<TimeGrid> shared_grid(std::shared_ptr<const TimeGrid> grid) {
  return std::const_pointer_cast<TimeGrid>(std::move(grid));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Continuous-time programming toolkit: augmented Lagrangian solves, "
      "KKT residual measurement, and constraint-qualification diagnostics";

  py::class_<TimeGrid, std::shared_ptr<TimeGrid>>(m, "TimeGrid")
      .def(py::init<double, int>(), py::arg("horizon"), py::arg("n_nodes"))
      .def_property_readonly("horizon", &TimeGrid::horizon)
      .def_property_readonly("n_nodes", &TimeGrid::n_nodes)
      .def_property_readonly("nodes", &TimeGrid::nodes)
      .def_property_readonly("weights", &TimeGrid::weights)
      .def("node", &TimeGrid::node, py::arg("i"))
      .def("weight", &TimeGrid::weight, py::arg("i"))
      .def("compatible_with", &TimeGrid::compatible_with, py::arg("other"));

  m.def(
      "make_uniform_grid",
      [](double horizon, int n_nodes) {
        return shared_grid(make_uniform_grid(horizon, n_nodes));
      },
      py::arg("horizon"), py::arg("n_nodes"));

  m.def(
      "integrate",
      [](const std::shared_ptr<TimeGrid>& grid,
         const Eigen::VectorXd& node_samples) {
        return integrate(*grid, node_samples);
      },
      py::arg("grid"), py::arg("node_samples"));

  py::class_<Trajectory>(m, "Trajectory")
      .def(py::init([](std::shared_ptr<TimeGrid> grid,
                       Eigen::MatrixXd values) {
             return Trajectory(std::move(grid), std::move(values));
           }),
           py::arg("grid"), py::arg("values"))
      .def_static(
          "zeros",
          [](std::shared_ptr<TimeGrid> grid, int state_dim) {
            return Trajectory::zeros(std::move(grid), state_dim);
          },
          py::arg("grid"), py::arg("state_dim"))
      .def_static(
          "constant",
          [](std::shared_ptr<TimeGrid> grid, const Eigen::VectorXd& value) {
            return Trajectory::constant(std::move(grid), value);
          },
          py::arg("grid"), py::arg("value"))
      .def_property_readonly(
          "grid", [](const Trajectory& self) {
            return shared_grid(self.grid_ptr());
          })
      .def_property_readonly("values", &Trajectory::values)
      .def_property_readonly("state_dim", &Trajectory::state_dim)
      .def_property_readonly("n_nodes", &Trajectory::n_nodes)
      .def("at", &Trajectory::at, py::arg("node"))
      .def("sup_distance", &Trajectory::sup_distance, py::arg("other"));

  py::class_<MultiplierPath>(m, "MultiplierPath")
      .def(py::init([](std::shared_ptr<TimeGrid> grid, Eigen::MatrixXd eq,
                       Eigen::MatrixXd ineq) {
             return MultiplierPath(std::move(grid), std::move(eq),
                                   std::move(ineq));
           }),
           py::arg("grid"), py::arg("eq"), py::arg("ineq"))
      .def_static(
          "zeros",
          [](std::shared_ptr<TimeGrid> grid, int eq_count, int ineq_count) {
            return MultiplierPath::zeros(std::move(grid), eq_count,
                                         ineq_count);
          },
          py::arg("grid"), py::arg("eq_count"), py::arg("ineq_count"))
      .def_property_readonly(
          "grid", [](const MultiplierPath& self) {
            return shared_grid(self.grid_ptr());
          })
      .def_property_readonly("eq", &MultiplierPath::eq)
      .def_property_readonly("ineq", &MultiplierPath::ineq)
      .def_property_readonly("eq_count", &MultiplierPath::eq_count)
      .def_property_readonly("ineq_count", &MultiplierPath::ineq_count)
      .def_property_readonly("n_nodes", &MultiplierPath::n_nodes)
      .def("eq_at", &MultiplierPath::eq_at, py::arg("node"))
      .def("ineq_at", &MultiplierPath::ineq_at, py::arg("node"))
      .def("sup_norm", &MultiplierPath::sup_norm)
      .def("validate_signs", &MultiplierPath::validate_signs);

  py::class_<Feasibility>(m, "Feasibility")
      .def_readonly("eq_sup", &Feasibility::eq_sup)
      .def_readonly("ineq_sup", &Feasibility::ineq_sup)
      .def("max_violation", &Feasibility::max_violation);

  py::class_<CtpProblem>(m, "CtpProblem")
      .def_readonly("name", &CtpProblem::name)
      .def_readonly("state_dim", &CtpProblem::state_dim)
      .def_readonly("eq_count", &CtpProblem::eq_count)
      .def_readonly("ineq_count", &CtpProblem::ineq_count)
      .def_readonly("horizon", &CtpProblem::horizon)
      .def_readonly("locality_radius", &CtpProblem::locality_radius)
      .def("has_reference", &CtpProblem::has_reference)
      .def(
          "reference_trajectory",
          [](const CtpProblem& self, std::shared_ptr<TimeGrid> grid) {
            return self.reference_trajectory(std::move(grid));
          },
          py::arg("grid"))
      .def(
          "reference_multipliers",
          [](const CtpProblem& self, std::shared_ptr<TimeGrid> grid) {
            return self.reference_multipliers(std::move(grid));
          },
          py::arg("grid"));

  m.def(
      "problem",
      [](const std::string& name) { return build(parse_problem_id(name)); },
      py::arg("name"),
      "Builds a built-in problem: example1, example2, or tracking");

  m.def(
      "closed_form_iterate",
      [](const std::string& name, int k, std::shared_ptr<TimeGrid> grid) {
        return closed_form_iterate(parse_problem_id(name), k,
                                   std::move(grid));
      },
      py::arg("name"), py::arg("k"), py::arg("grid"));

  m.def("objective", &objective, py::arg("problem"), py::arg("x"));
  m.def("feasibility", &feasibility, py::arg("problem"), py::arg("x"));

  py::class_<ResidualReport>(m, "ResidualReport")
      .def_readonly("stationarity_l1", &ResidualReport::stationarity_l1)
      .def_readonly("stationarity_weak_max",
                    &ResidualReport::stationarity_weak_max)
      .def_readonly("comp_sup", &ResidualReport::comp_sup)
      .def_readonly("comp_l1", &ResidualReport::comp_l1)
      .def_readonly("feas_eq_sup", &ResidualReport::feas_eq_sup)
      .def_readonly("feas_ineq_sup", &ResidualReport::feas_ineq_sup)
      .def_readonly("sign_violation", &ResidualReport::sign_violation)
      .def_readonly("per_node_stationarity",
                    &ResidualReport::per_node_stationarity)
      .def("max_residual", &ResidualReport::max_residual)
      .def("is_kkt", &ResidualReport::is_kkt, py::arg("tol") = 1e-6);

  m.def("kkt_residual", &kkt_residual, py::arg("problem"), py::arg("x"),
        py::arg("mult"));
  m.def("lagrangian_gradient", &lagrangian_gradient, py::arg("problem"),
        py::arg("x"), py::arg("u"), py::arg("v"), py::arg("t"));
  m.def("inequality_slack", &inequality_slack, py::arg("problem"),
        py::arg("x"), py::arg("t"));

  py::class_<StationarityDistance>(m, "StationarityDistance")
      .def_readonly("value", &StationarityDistance::value)
      .def_readonly("per_node", &StationarityDistance::per_node)
      .def_readonly("minimizer", &StationarityDistance::minimizer);

  m.def("min_kkt_stationarity", &min_kkt_stationarity, py::arg("problem"),
        py::arg("x"), py::arg("comp_tol") = 1e-8);
  m.def("akkt_sequence_report", &akkt_sequence_report, py::arg("problem"),
        py::arg("iterates"));

  py::class_<AkktCertificate>(m, "AkktCertificate")
      .def_readonly("weak_stationarity_ok",
                    &AkktCertificate::weak_stationarity_ok)
      .def_readonly("complementarity_ok", &AkktCertificate::complementarity_ok)
      .def_readonly("signs_ok", &AkktCertificate::signs_ok)
      .def_readonly("primal_converging", &AkktCertificate::primal_converging)
      .def_readonly("inside_locality", &AkktCertificate::inside_locality)
      .def_readonly("certified", &AkktCertificate::certified)
      .def_readonly("final_primal_gap", &AkktCertificate::final_primal_gap);

  m.def("certify_akkt", &certify_akkt, py::arg("problem"),
        py::arg("iterates"), py::arg("limit"), py::arg("tol") = 1e-6);

  py::class_<AlEvaluation>(m, "AlEvaluation")
      .def_readonly("value", &AlEvaluation::value)
      .def_readonly("gradient", &AlEvaluation::gradient);

  m.def("augmented_lagrangian", &augmented_lagrangian, py::arg("problem"),
        py::arg("x"), py::arg("u_bar"), py::arg("v_bar"), py::arg("rho"),
        py::arg("t"));

  py::enum_<SolverStatus>(m, "SolverStatus")
      .value("converged_kkt", SolverStatus::converged_kkt)
      .value("akkt_no_kkt_progress", SolverStatus::akkt_no_kkt_progress)
      .value("penalty_cap_reached", SolverStatus::penalty_cap_reached)
      .value("iteration_cap_reached", SolverStatus::iteration_cap_reached)
      .value("unbounded_below_suspected",
             SolverStatus::unbounded_below_suspected);

  py::class_<AlmConfig>(m, "AlmConfig")
      .def(py::init<>())
      .def_readwrite("rho0", &AlmConfig::rho0)
      .def_readwrite("rho_growth", &AlmConfig::rho_growth)
      .def_readwrite("rho_max", &AlmConfig::rho_max)
      .def_readwrite("tau_progress", &AlmConfig::tau_progress)
      .def_readwrite("u_safeguard", &AlmConfig::u_safeguard)
      .def_readwrite("v_safeguard", &AlmConfig::v_safeguard)
      .def_readwrite("outer_max", &AlmConfig::outer_max)
      .def_readwrite("inner_max", &AlmConfig::inner_max)
      .def_readwrite("stop_tol", &AlmConfig::stop_tol)
      .def_readwrite("default_nodes", &AlmConfig::default_nodes)
      .def_readwrite("inner_tol_schedule", &AlmConfig::inner_tol_schedule)
      .def_readwrite("initial_trajectory", &AlmConfig::initial_trajectory)
      .def("inner_tol", &AlmConfig::inner_tol, py::arg("outer_iteration"))
      .def("validate", &AlmConfig::validate);

  py::class_<SolverIterate>(m, "SolverIterate")
      .def_readonly("x", &SolverIterate::x)
      .def_readonly("multipliers", &SolverIterate::multipliers)
      .def_readonly("rho", &SolverIterate::rho)
      .def_readonly("report", &SolverIterate::report)
      .def_readonly("inner_iterations", &SolverIterate::inner_iterations)
      .def_readonly("multiplier_sup", &SolverIterate::multiplier_sup)
      .def_readonly("progress_measure", &SolverIterate::progress_measure)
      .def_readonly("safeguard_clip", &SolverIterate::safeguard_clip)
      .def_readonly("ball_clipped", &SolverIterate::ball_clipped);

  py::class_<SolverTrace>(m, "SolverTrace")
      .def_readonly("iterates", &SolverTrace::iterates)
      .def_readonly("status", &SolverTrace::status)
      .def_readonly("notes", &SolverTrace::notes)
      .def("final_iterate", &SolverTrace::final_iterate);

  m.def("solve", &solve, py::arg("problem"), py::arg("config") = AlmConfig{});
  m.def("export_trace", &export_trace, py::arg("trace"));

  py::enum_<BoundVerdict>(m, "BoundVerdict")
      .value("bounded", BoundVerdict::bounded)
      .value("growing", BoundVerdict::growing)
      .value("inconclusive", BoundVerdict::inconclusive);

  py::class_<JacobianStack>(m, "JacobianStack")
      .def_readonly("t", &JacobianStack::t)
      .def_readonly("stacked", &JacobianStack::stacked);

  m.def("jacobian_stack", &jacobian_stack, py::arg("problem"), py::arg("x"),
        py::arg("t"));
  m.def("stack_multiplier_image", &stack_multiplier_image, py::arg("stack"),
        py::arg("u"), py::arg("v"));
  m.def("smallest_stack_singular_value", &smallest_stack_singular_value,
        py::arg("stacked"));

  py::class_<MultiplierBoundCheck>(m, "MultiplierBoundCheck")
      .def_readonly("verdict", &MultiplierBoundCheck::verdict)
      .def_readonly("sup_norms", &MultiplierBoundCheck::sup_norms)
      .def_readonly("eq_sup", &MultiplierBoundCheck::eq_sup)
      .def_readonly("ineq_sup", &MultiplierBoundCheck::ineq_sup);

  py::class_<FullRankCheck>(m, "FullRankCheck")
      .def_readonly("holds", &FullRankCheck::holds)
      .def_readonly("min_det", &FullRankCheck::min_det)
      .def_readonly("threshold", &FullRankCheck::threshold)
      .def_readonly("note", &FullRankCheck::note);

  py::class_<SigmaMinCheck>(m, "SigmaMinCheck")
      .def_readonly("holds", &SigmaMinCheck::holds)
      .def_readonly("min_sigma", &SigmaMinCheck::min_sigma)
      .def_readonly("threshold", &SigmaMinCheck::threshold)
      .def_readonly("psi_bound", &SigmaMinCheck::psi_bound)
      .def_readonly("implied_multiplier_bound",
                    &SigmaMinCheck::implied_multiplier_bound);

  py::class_<CqThresholds>(m, "CqThresholds")
      .def(py::init<>())
      .def_readwrite("full_rank_min_det", &CqThresholds::full_rank_min_det)
      .def_readwrite("sigma_threshold", &CqThresholds::sigma_threshold)
      .def_readwrite("growth_factor", &CqThresholds::growth_factor)
      .def_readwrite("window", &CqThresholds::window)
      .def_readwrite("psi_bound", &CqThresholds::psi_bound)
      .def_readwrite("akkt_tol", &CqThresholds::akkt_tol);

  py::class_<CqReport>(m, "CqReport")
      .def_readonly("multiplier_bound", &CqReport::multiplier_bound)
      .def_readonly("full_rank", &CqReport::full_rank)
      .def_readonly("sigma_min", &CqReport::sigma_min)
      .def_readonly("promotion_certified", &CqReport::promotion_certified)
      .def_readonly("notes", &CqReport::notes);

  m.def("check_multiplier_bound", &check_multiplier_bound, py::arg("paths"),
        py::arg("window") = 3, py::arg("growth_factor") = 10.0);
  m.def("check_full_rank", &check_full_rank, py::arg("problem"), py::arg("x"),
        py::arg("min_det_threshold") = 1e-6);
  m.def("check_sigma_min", &check_sigma_min, py::arg("problem"),
        py::arg("trajectories"), py::arg("sigma_threshold") = 1e-3,
        py::arg("psi_bound") = std::numeric_limits<double>::quiet_NaN());
  m.def("diagnose", &diagnose, py::arg("problem"), py::arg("trace"),
        py::arg("thresholds") = CqThresholds{});

  m.def("format_double", &format_double, py::arg("value"));
  m.def(
      "write_node_table",
      [](const std::string& path, const std::shared_ptr<TimeGrid>& grid,
         const Eigen::MatrixXd& values) {
        write_node_table(path, *grid, values);
      },
      py::arg("path"), py::arg("grid"), py::arg("values"));
  m.def(
      "read_node_table",
      [](const std::string& path, const std::shared_ptr<TimeGrid>& grid,
         int expected_cols) {
        return read_node_table(path, *grid, expected_cols);
      },
      py::arg("path"), py::arg("grid"), py::arg("expected_cols"));
}
