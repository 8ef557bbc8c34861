// Copyright 2026 The ztransport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The line-oriented query file format and the documents produced by the
// run, validate and components commands.
//
//   # comment
//   node A          optional pre-declaration
//   A -> B          directed edge
//   A <-> B         bidirected edge
//   select A        S-variable pointing at A
//   X: A B          treatment (repeated lines accumulate)
//   Y: C            outcome
//   Z: A            controllable
//
// Node order is the order of first mention in node and edge lines.

#ifndef ZTRANSPORT_QUERY_FILE_HPP_
#define ZTRANSPORT_QUERY_FILE_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "expr.hpp"
#include "graph.hpp"
#include "identify.hpp"
#include "json.hpp"

namespace ztransport {

struct QueryFile {
  SelectionDiagram diagram;
  Query query;
};

// Throws ParseError carrying the offending line.
QueryFile parse_query_file(const std::string& text);

// Canonical text form; parsing it yields an equal QueryFile.
std::string write_query_file(const QueryFile& qf);

inline constexpr double kValidationTolerance = 1e-9;

struct RunReport {
  IdentResult result;
  nlohmann::json document;
};

RunReport run_query(const QueryFile& qf);

// Output of `run` in the requested format; JSON is the full document.
std::string render_run(const RunReport& report, RenderFormat format);

struct ValidationReport {
  std::vector<std::pair<std::uint64_t, double>> errors;  // sorted by seed
  double max_error = 0.0;
  bool passed = false;
  nlohmann::json document;
};

// Validates the formula `run` emits (or its `corrupt`-th single-term
// mutation when corrupt >= 0) on the seeds [first, last]. Throws InputError
// if the query is not transportable or `corrupt` is out of range.
ValidationReport validate_query(const QueryFile& qf, std::uint64_t first, std::uint64_t last,
                                int arity, int corrupt = -1);

std::string render_validation(const ValidationReport& report);

// c-components of the diagram, one per line, with S-pointed members noted.
std::string components_text(const QueryFile& qf);

}  // namespace ztransport

#endif  // ZTRANSPORT_QUERY_FILE_HPP_
