/* Copyright 2026 The ztransport Authors
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

/* C interface to the ztransport engine.
 *
 * Handles are opaque and owned by the caller; release them with the
 * matching *_free function. Every fallible call returns a zt_status and
 * records a message retrievable with zt_last_error() on the calling thread.
 * Strings returned through `char**` are heap allocated and must be released
 * with zt_string_free().
 */

#ifndef ZTRANSPORT_ZTRANSPORT_H_
#define ZTRANSPORT_ZTRANSPORT_H_

#include <stdint.h>

#if defined(_WIN32)
#define ZT_API __declspec(dllexport)
#else
#define ZT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zt_status {
  ZT_OK = 0,
  ZT_ERR_PARSE = 1,
  ZT_ERR_INPUT = 2,
  ZT_ERR_STRUCTURAL = 3,
  ZT_ERR_EVALUATION = 4,
  ZT_ERR_INTERNAL = 5,
  ZT_ERR_ARGUMENT = 6,
  ZT_ERR_IO = 7
} zt_status;

typedef enum zt_format { ZT_FORMAT_TEXT = 0, ZT_FORMAT_LATEX = 1, ZT_FORMAT_JSON = 2 } zt_format;

typedef struct zt_query zt_query;
typedef struct zt_result zt_result;

/* Parsing. On ZT_ERR_PARSE, zt_last_error_line() gives the line number. */
ZT_API zt_status zt_query_parse(const char* text, zt_query** out);
ZT_API zt_status zt_query_load(const char* path, zt_query** out);
ZT_API void zt_query_free(zt_query* query);
/* Canonical text form of a parsed query. */
ZT_API zt_status zt_query_write(const zt_query* query, char** out);

/* Transport of the query's effect. */
ZT_API zt_status zt_run(const zt_query* query, zt_result** out);
ZT_API void zt_result_free(zt_result* result);
/* 1 if a formula was found, 0 if a witness was returned. */
ZT_API int zt_result_transportable(const zt_result* result);
ZT_API zt_status zt_result_render(const zt_result* result, zt_format format, char** out);

/* Oracle validation over seeds [first, last]. `corrupt` >= 0 validates
 * that single-term mutation of the formula instead. `passed` receives 1
 * when every error is within 1e-9. `report` receives text or JSON. */
ZT_API zt_status zt_validate(const zt_query* query, uint64_t first, uint64_t last, int arity,
                             int corrupt, zt_format format, int* passed, char** report);

/* c-component listing of the query's diagram. */
ZT_API zt_status zt_components(const zt_query* query, char** out);

ZT_API void zt_string_free(char* s);
ZT_API const char* zt_last_error(void);
ZT_API int zt_last_error_line(void);
ZT_API const char* zt_version(void);

#ifdef __cplusplus
}
#endif

#endif /* ZTRANSPORT_ZTRANSPORT_H_ */
