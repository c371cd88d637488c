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

#include "ctpkit/node_table.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctp {

std::string format_double(double value) {
  char buffer[32];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string format_node_table(const TimeGrid& grid,
                              const Eigen::MatrixXd& values) {
  if (values.rows() != grid.nodes().size()) {
    throw std::invalid_argument(
        "format_node_table: row count does not match the grid");
  }
  std::string out;
  for (int i = 0; i < grid.n_nodes(); ++i) {
    out += format_double(grid.node(i));
    for (int j = 0; j < values.cols(); ++j) {
      out += ' ';
      out += format_double(values(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_node_table(const std::string& path, const TimeGrid& grid,
                      const Eigen::MatrixXd& values) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("write_node_table: cannot open '" + path +
                             "' for writing");
  }
  file << format_node_table(grid, values);
  if (!file) {
    throw std::runtime_error("write_node_table: write to '" + path +
                             "' failed");
  }
}

Eigen::MatrixXd read_node_table(const std::string& path, const TimeGrid& grid,
                                int expected_cols) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("read_node_table: cannot open '" + path + "'");
  }

  Eigen::MatrixXd values(grid.n_nodes(), expected_cols);
  std::string line;
  int row = 0;
  while (std::getline(file, line)) {
    if (line.empty()) {
      continue;
    }
    if (row >= grid.n_nodes()) {
      throw std::runtime_error("read_node_table: row " +
                               std::to_string(row + 1) + ": more rows than " +
                               std::to_string(grid.n_nodes()) +
                               " grid nodes");
    }
    std::istringstream tokens(line);
    std::vector<double> fields;
    std::string token;
    while (tokens >> token) {
      errno = 0;
      char* end = nullptr;
      const double parsed = std::strtod(token.c_str(), &end);
      if (end == token.c_str() || *end != '\0' || errno == ERANGE) {
        throw std::runtime_error("read_node_table: row " +
                                 std::to_string(row + 1) +
                                 ": malformed real '" + token + "'");
      }
      fields.push_back(parsed);
    }
    if (static_cast<int>(fields.size()) != expected_cols + 1) {
      throw std::runtime_error(
          "read_node_table: row " + std::to_string(row + 1) + ": expected " +
          std::to_string(expected_cols + 1) + " columns, found " +
          std::to_string(fields.size()));
    }
    if (std::abs(fields[0] - grid.node(row)) > 1e-12) {
      throw std::runtime_error(
          "read_node_table: row " + std::to_string(row + 1) + ": time " +
          format_double(fields[0]) + " does not match grid node " +
          format_double(grid.node(row)));
    }
    for (int j = 0; j < expected_cols; ++j) {
      values(row, j) = fields[static_cast<std::size_t>(j) + 1];
    }
    ++row;
  }
  if (row != grid.n_nodes()) {
    throw std::runtime_error("read_node_table: row " + std::to_string(row) +
                             ": table ended before the " +
                             std::to_string(grid.n_nodes()) +
                             " grid nodes were covered");
  }
  return values;
}

}  // namespace ctp
