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

#include <optional>
#include <string>
#include <vector>

#include "ctpkit/cq.hpp"
#include "ctpkit/residuals.hpp"

namespace ctp {

/// One row of the per-iteration residual table. For solve runs k is the
/// outer iteration; for sequence runs it is the closed-form index.
struct IterationRow {
  int k = 0;
  double rho = 0.0;
  ResidualReport report;
  double mult_sup = 0.0;
  long inner_iterations = 0;
};

/**
 * Self-contained run document: what was run, on which grid, the
 * per-iteration residual table, the qualification report when one was
 * produced, and the outcome. Wall time is recorded only when timing was
 * requested so that identical runs serialize to identical bytes.
 */
struct RunReport {
  std::string command;
  std::string problem;
  double horizon = 1.0;
  int n_nodes = 0;
  std::string status;
  std::vector<IterationRow> iterations;
  std::optional<CqReport> cq;
  std::vector<std::string> notes;
  std::optional<double> wall_time_seconds;
};

/// JSON document with stable key names and shortest round-trip reals.
/// Non-finite reals are encoded as the strings "inf", "-inf", "nan" so
/// that serialize -> parse -> serialize is byte-identical.
std::string to_json(const RunReport& report);

/// Inverse of to_json. Throws std::runtime_error on malformed documents.
RunReport parse_json(const std::string& text);

/// CSV rendering: `#`-prefixed metadata lines, then the iteration table,
/// then the qualification block. Carries the same numeric values as the
/// JSON rendering.
std::string to_csv(const RunReport& report);

}  // namespace ctp
