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

#ifndef ZTRANSPORT_ERROR_HPP_
#define ZTRANSPORT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ztransport {

// Bad caller input: unknown node names, overlapping sets, budget overruns.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graphs or expressions (cycles, ill-formed ASTs).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A formula could not be evaluated against the supplied tables.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken internal invariant. Never expected on valid input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Query-file syntax errors, carrying the 1-based line they refer to.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace ztransport

#endif  // ZTRANSPORT_ERROR_HPP_
