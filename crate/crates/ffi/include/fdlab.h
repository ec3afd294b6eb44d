#ifndef FDLAB_H
#define FDLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes.
typedef enum FdlabStatus {
  FDLAB_STATUS_OK = 0,
  // A required pointer argument was null.
  FDLAB_STATUS_NULL = 1,
  // A string argument was not valid UTF-8.
  FDLAB_STATUS_UTF8 = 2,
  // Config syntax, schema or expression error.
  FDLAB_STATUS_PARSE = 3,
  // Argument outside the accepted domain.
  FDLAB_STATUS_DOMAIN = 4,
  // Expression evaluation failed on a sample.
  FDLAB_STATUS_EVAL = 5,
  FDLAB_STATUS_IO = 6,
  // Panic or serialization failure.
  FDLAB_STATUS_INTERNAL = 7,
} FdlabStatus;

// Verdict codes written by [`fdlab_report_verdict`].
typedef enum FdlabVerdict {
  FDLAB_VERDICT_CONSISTENT = 0,
  FDLAB_VERDICT_HYPOTHESIS_FAILED = 1,
  FDLAB_VERDICT_REFUTATION_CANDIDATE = 2,
} FdlabVerdict;

// Opaque parsed and instantiated problem.
typedef struct FdlabProblem FdlabProblem;

// Opaque verification report.
typedef struct FdlabReport FdlabReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parse `config_text` and build the problem. Relative paths in the config
// resolve against `base_dir`, or the working directory when it is null.
//
// # Safety
// `config_text` and a non-null `base_dir` must be NUL-terminated strings;
// `out` must be a valid pointer.
enum FdlabStatus fdlab_problem_from_config(const char *config_text,
                                           const char *base_dir,
                                           struct FdlabProblem **out);

// Run the configured analysis.
//
// # Safety
// `problem` must come from [`fdlab_problem_from_config`]; `out` must be valid.
enum FdlabStatus fdlab_problem_run(const struct FdlabProblem *problem, struct FdlabReport **out);

// # Safety
// `problem` must be null or come from [`fdlab_problem_from_config`], and
// must not be used afterwards.
void fdlab_problem_free(struct FdlabProblem *problem);

// # Safety
// `report` must come from [`fdlab_problem_run`]; `out` must be valid.
enum FdlabStatus fdlab_report_verdict(const struct FdlabReport *report, enum FdlabVerdict *out);

// The report as a JSON document; free with [`fdlab_string_free`].
//
// # Safety
// `report` must come from [`fdlab_problem_run`]; `out` must be valid.
enum FdlabStatus fdlab_report_json(const struct FdlabReport *report, char **out);

// Displacement radius: refined value and the conservative lower value.
// Infinite when the map moves no sample. `FDLAB_STATUS_DOMAIN` when the
// analysis computes no radius.
//
// # Safety
// `report` must come from [`fdlab_problem_run`]; `value` and `lower` must
// be valid.
enum FdlabStatus fdlab_report_rho(const struct FdlabReport *report, double *value, double *lower);

// # Safety
// `report` must be null or come from [`fdlab_problem_run`], and must not
// be used afterwards.
void fdlab_report_free(struct FdlabReport *report);

// Newline-separated catalog entry names; free with [`fdlab_string_free`].
//
// # Safety
// `out` must be valid.
enum FdlabStatus fdlab_catalog_list(char **out);

// # Safety
// `s` must be null or a string returned by this library.
void fdlab_string_free(char *s);

// Message of the last failed call on this thread; empty after a success.
// Valid until the next call into the library on this thread.
const char *fdlab_last_error_message(void);

// Library version, static storage.
const char *fdlab_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FDLAB_H */
