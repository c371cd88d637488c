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

#include <memory>
#include <string_view>
#include <utility>

#include "ctpkit/problem.hpp"

namespace ctp {

/**
 * Built-in study problems on the horizon [0, 1].
 *
 * - example1: cost x2, equality x1 * x2 = 0, inequality -x1 <= 0. The
 *   reference point (0, 1) is a minimizer that admits no exact multipliers;
 *   the closed-form iterate family ((-1/k, 1), u = v = k) is asymptotically
 *   stationary with both multipliers diverging.
 * - example2: cost (t - 1/2) x1, inequalities -(t - 1/2) x1^3 + x2 <= 0 and
 *   -x2 <= 0. The reference (0, 0) again has no exact multipliers; the
 *   iterate family (x1 = (t - 1/2)/k, x2 = 0,
 *   v1 = v2 = k^2 / (3 (t - 1/2)^2)) has multipliers blowing up near
 *   t = 1/2, which is why grids must not place a node there.
 * - tracking: scalar cost (x - (t - 1/2))^2 / 2 with x <= 0. Well behaved:
 *   reference x(t) = min(t - 1/2, 0), v(t) = max(t - 1/2, 0), multipliers
 *   bounded by 1/2.
 */
enum class BuiltinProblemId { example1, example2, tracking };

/// Parses "example1" / "example2" / "tracking". Throws
/// std::invalid_argument on anything else.
BuiltinProblemId parse_problem_id(std::string_view name);

std::string_view to_string(BuiltinProblemId id);

/// Builds the problem definition with its reference solution attached.
CtpProblem build(BuiltinProblemId id);

/**
 * The closed-form iterate family of an example at index k >= 1, sampled on
 * a grid. Throws std::invalid_argument for the tracking problem (it has no
 * such family) and std::runtime_error when the grid places a node at the
 * example2 singularity t = 1/2.
 */
std::pair<Trajectory, MultiplierPath> closed_form_iterate(
    BuiltinProblemId id, int k, std::shared_ptr<const TimeGrid> grid);

}  // namespace ctp
