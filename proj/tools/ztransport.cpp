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

// ztransport command-line front end. Exit codes: 0 transportable (or
// validation passed), 1 usage or parse error, 2 not transportable,
// 3 validation failed.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <regex>
#include <string>

#include "CLI11.hpp"
#include "ztransport/ztransport.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotTransportable = 2;
constexpr int kExitValidationFailed = 3;

struct QueryHandle {
  zt_query* q = nullptr;
  ~QueryHandle() { zt_query_free(q); }
};

struct ResultHandle {
  zt_result* r = nullptr;
  ~ResultHandle() { zt_result_free(r); }
};

int report_error(const char* what) {
  std::cerr << "ztransport: " << what << ": " << zt_last_error() << "\n";
  return kExitUsage;
}

// Prints and releases a string produced by `call`.
template <typename Call>
bool print_owned(Call&& call) {
  char* s = nullptr;
  if (call(&s) != ZT_OK) return false;
  std::cout << s;
  zt_string_free(s);
  return true;
}

bool load(const std::string& path, QueryHandle& h) {
  if (zt_query_load(path.c_str(), &h.q) != ZT_OK) {
    std::cerr << "ztransport: " << path << ": " << zt_last_error() << "\n";
    return false;
  }
  return true;
}

// "A..B" or a single seed.
bool parse_seeds(const std::string& text, std::uint64_t& first, std::uint64_t& last) {
  static const std::regex kRange(R"(^(\d+)(?:\.\.(\d+))?$)");
  std::smatch m;
  if (!std::regex_match(text, m, kRange)) return false;
  first = std::stoull(m[1]);
  last = m[2].matched ? std::stoull(m[2]) : first;
  return first <= last;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("ZTRANSPORT_SEED");
  if (!env || !*env) return 1;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  return (end && *end == '\0') ? v : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decide z-transportability of causal effects and emit transport formulas"};
  app.require_subcommand(1);
  app.set_version_flag("--version", zt_version());

  std::string file;
  std::string format = "text";
  auto* run = app.add_subcommand("run", "Transport the query's effect");
  run->add_option("file", file, "Query file")->required();
  run->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "latex", "json"}));

  std::string seeds;
  int arity = 2;
  int corrupt = -1;
  bool json_report = false;
  auto* validate = app.add_subcommand("validate", "Check the emitted formula on random models");
  validate->add_option("file", file, "Query file")->required();
  validate->add_option("--seeds", seeds, "Seed range A..B (default from ZTRANSPORT_SEED)");
  validate->add_option("--arity", arity, "Values per observable")->check(CLI::Range(2, 8));
  validate->add_option("--corrupt", corrupt, "Validate the N-th single-term mutation instead")
      ->check(CLI::NonNegativeNumber);
  validate->add_flag("--json", json_report, "Emit the report as JSON");

  auto* components = app.add_subcommand("components", "List the diagram's c-components");
  components->add_option("file", file, "Query file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  QueryHandle query;
  if (!load(file, query)) return kExitUsage;

  if (run->parsed()) {
    static const std::map<std::string, zt_format> kFormats{
        {"text", ZT_FORMAT_TEXT}, {"latex", ZT_FORMAT_LATEX}, {"json", ZT_FORMAT_JSON}};
    ResultHandle result;
    if (zt_run(query.q, &result.r) != ZT_OK) return report_error("run");
    if (!print_owned([&](char** out) { return zt_result_render(result.r, kFormats.at(format), out); })) {
      return report_error("render");
    }
    if (format == "json") std::cout << "\n";
    return zt_result_transportable(result.r) ? kExitOk : kExitNotTransportable;
  }

  if (validate->parsed()) {
    std::uint64_t first = 0;
    std::uint64_t last = 0;
    if (seeds.empty()) {
      first = default_seed();
      last = first + 99;
    } else if (!parse_seeds(seeds, first, last)) {
      std::cerr << "ztransport: --seeds expects A..B with A <= B\n";
      return kExitUsage;
    }
    ResultHandle result;
    if (zt_run(query.q, &result.r) != ZT_OK) return report_error("run");
    if (!zt_result_transportable(result.r)) {
      print_owned([&](char** out) { return zt_result_render(result.r, ZT_FORMAT_TEXT, out); });
      return kExitNotTransportable;
    }
    int passed = 0;
    const zt_format fmt = json_report ? ZT_FORMAT_JSON : ZT_FORMAT_TEXT;
    if (!print_owned([&](char** out) {
          return zt_validate(query.q, first, last, arity, corrupt, fmt, &passed, out);
        })) {
      return report_error("validate");
    }
    return passed ? kExitOk : kExitValidationFailed;
  }

  if (!print_owned([&](char** out) { return zt_components(query.q, out); })) {
    return report_error("components");
  }
  return kExitOk;
}
