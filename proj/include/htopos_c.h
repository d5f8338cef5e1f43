// SPDX-License-Identifier: Apache-2.0

#ifndef HTOPOS_C_H
#define HTOPOS_C_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define HTOPOS_API __declspec(dllexport)
#else
#define HTOPOS_API __attribute__((visibility("default")))
#endif

typedef enum htopos_status {
  HTOPOS_OK = 0,
  HTOPOS_ERR_PARSE = 1,
  HTOPOS_ERR_SEMANTIC = 2,
  HTOPOS_ERR_UNKNOWN_NAME = 3,
  HTOPOS_ERR_PRECONDITION = 4,
  HTOPOS_ERR_RESOURCE = 5,
  HTOPOS_ERR_SHAPE = 6,
  HTOPOS_ERR_INTERNAL = 7,
  HTOPOS_ERR_INVALID_ARGUMENT = 8
} htopos_status;

typedef struct htopos_workspace htopos_workspace;
typedef struct htopos_report htopos_report;

typedef struct htopos_config {
  uint64_t budget;    /* expansions per search; 0 selects the default */
  uint64_t seed;
  uint64_t rep_bound; /* 0 selects the default */
} htopos_config;

/* Library defaults. */
HTOPOS_API htopos_config htopos_default_config(void);
HTOPOS_API const char* htopos_version(void);

/* Message of the last failed call on this thread; never NULL. */
HTOPOS_API const char* htopos_last_error(void);

/* Parses a `.topos` document. `source` names it in error messages. */
HTOPOS_API htopos_status htopos_workspace_parse(const char* text, const char* source,
                                                const htopos_config* config, htopos_workspace** out);
/* A workspace holding one builtin site. */
HTOPOS_API htopos_status htopos_workspace_builtin(const char* site, const htopos_config* config,
                                                  htopos_workspace** out);
HTOPOS_API void htopos_workspace_free(htopos_workspace* ws);

/* Runs a command given as argv words. `family` is an array of
   `family_count` object names or NULL for the document default; `theory`
   may be NULL. Mathematical failures still return HTOPOS_OK with a report
   whose exit code is 1. */
HTOPOS_API htopos_status htopos_run(const htopos_workspace* ws, size_t argc, const char* const* argv,
                                    const char* const* family, size_t family_count, const char* theory,
                                    htopos_report** out);
HTOPOS_API const char* htopos_report_text(const htopos_report* r);
HTOPOS_API const char* htopos_report_json(const htopos_report* r);
/* 0 = every check passed, 1 = a check failed, 2 = usage or resource error. */
HTOPOS_API int htopos_report_exit_code(const htopos_report* r);
HTOPOS_API size_t htopos_report_result_count(const htopos_report* r);
/* Fields of result i; NULL when i is out of range. */
HTOPOS_API const char* htopos_report_check(const htopos_report* r, size_t i);
HTOPOS_API const char* htopos_report_status(const htopos_report* r, size_t i);
HTOPOS_API const char* htopos_report_witness(const htopos_report* r, size_t i);
HTOPOS_API void htopos_report_free(htopos_report* r);

HTOPOS_API size_t htopos_builtin_site_count(void);
HTOPOS_API const char* htopos_builtin_site_name(size_t i);
HTOPOS_API size_t htopos_suite_count(void);
HTOPOS_API const char* htopos_suite_name(size_t i);

#ifdef __cplusplus
}
#endif

#endif
