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

#include "ztransport/ztransport.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "error.hpp"
#include "query_file.hpp"

struct zt_query {
  ztransport::QueryFile file;
};

struct zt_result {
  ztransport::RunReport report;
};

namespace {

thread_local std::string g_last_error;
thread_local int g_last_line = 0;

zt_status fail(zt_status code, const std::string& message, int line = 0) {
  g_last_error = message;
  g_last_line = line;
  return code;
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

ztransport::RenderFormat to_format(zt_format f) {
  switch (f) {
    case ZT_FORMAT_LATEX:
      return ztransport::RenderFormat::kLatex;
    case ZT_FORMAT_JSON:
      return ztransport::RenderFormat::kJson;
    default:
      return ztransport::RenderFormat::kText;
  }
}

template <typename Fn>
zt_status guarded(Fn&& fn) {
  g_last_error.clear();
  g_last_line = 0;
  try {
    return fn();
  } catch (const ztransport::ParseError& e) {
    return fail(ZT_ERR_PARSE, e.what(), e.line());
  } catch (const ztransport::InputError& e) {
    return fail(ZT_ERR_INPUT, e.what());
  } catch (const ztransport::StructuralError& e) {
    return fail(ZT_ERR_STRUCTURAL, e.what());
  } catch (const ztransport::EvaluationError& e) {
    return fail(ZT_ERR_EVALUATION, e.what());
  } catch (const std::exception& e) {
    return fail(ZT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ZT_ERR_INTERNAL, "unknown failure");
  }
}

}  // namespace

extern "C" {

zt_status zt_query_parse(const char* text, zt_query** out) {
  if (!text || !out) return fail(ZT_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new zt_query{ztransport::parse_query_file(text)};
    return ZT_OK;
  });
}

zt_status zt_query_load(const char* path, zt_query** out) {
  if (!path || !out) return fail(ZT_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  std::ifstream in(path, std::ios::binary);
  if (!in) return fail(ZT_ERR_IO, std::string("cannot open ") + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return zt_query_parse(buf.str().c_str(), out);
}

void zt_query_free(zt_query* query) { delete query; }

zt_status zt_query_write(const zt_query* query, char** out) {
  if (!query || !out) return fail(ZT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_out(ztransport::write_query_file(query->file));
    return ZT_OK;
  });
}

zt_status zt_run(const zt_query* query, zt_result** out) {
  if (!query || !out) return fail(ZT_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new zt_result{ztransport::run_query(query->file)};
    return ZT_OK;
  });
}

void zt_result_free(zt_result* result) { delete result; }

int zt_result_transportable(const zt_result* result) {
  return result && result->report.result.ok() ? 1 : 0;
}

zt_status zt_result_render(const zt_result* result, zt_format format, char** out) {
  if (!result || !out) return fail(ZT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_out(ztransport::render_run(result->report, to_format(format)));
    return ZT_OK;
  });
}

zt_status zt_validate(const zt_query* query, uint64_t first, uint64_t last, int arity,
                      int corrupt, zt_format format, int* passed, char** report) {
  if (!query || !passed || !report) return fail(ZT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    ztransport::ValidationReport r =
        ztransport::validate_query(query->file, first, last, arity, corrupt);
    *passed = r.passed ? 1 : 0;
    *report = copy_out(format == ZT_FORMAT_JSON ? r.document.dump(2) + "\n"
                                                : ztransport::render_validation(r));
    return ZT_OK;
  });
}

zt_status zt_components(const zt_query* query, char** out) {
  if (!query || !out) return fail(ZT_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    *out = copy_out(ztransport::components_text(query->file));
    return ZT_OK;
  });
}

void zt_string_free(char* s) { std::free(s); }

const char* zt_last_error(void) { return g_last_error.c_str(); }

int zt_last_error_line(void) { return g_last_line; }

const char* zt_version(void) { return "0.1.0"; }

}  // extern "C"
