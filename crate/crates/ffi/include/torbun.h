#ifndef TORBUN_H
#define TORBUN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. The nonzero values 2, 3 and 4 match the CLI exit codes.
typedef enum TorbunStatus {
  TORBUN_STATUS_OK = 0,
  // Malformed input, a failed precondition or a non-generic vector.
  TORBUN_STATUS_VALIDATION = 2,
  // A mathematical assertion failed, e.g. a balancing violation.
  TORBUN_STATUS_MATH = 3,
  // No generic vector was found.
  TORBUN_STATUS_SEARCH_EXHAUSTED = 4,
  TORBUN_STATUS_NULL_ARGUMENT = 5,
  TORBUN_STATUS_INVALID_UTF8 = 6,
  TORBUN_STATUS_UNKNOWN_COMMAND = 7,
  // A Rust panic was caught at the boundary.
  TORBUN_STATUS_INTERNAL = 8,
} TorbunStatus;

// An opaque loaded problem.
typedef struct TorbunProblem TorbunProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses and validates a problem file given as JSON text.
//
// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
enum TorbunStatus torbun_problem_load(const char *json, struct TorbunProblem **out);

// Releases a handle from [`torbun_problem_load`]. Null is ignored.
//
// # Safety
// `problem` must come from [`torbun_problem_load`] and not be used again.
void torbun_problem_free(struct TorbunProblem *problem);

// Runs `command` (a CLI command name such as `"mw-product"`) with options
// given as a JSON object, e.g. `{"v": "2,1", "cross_check": true}`, or
// null for defaults. On `Ok`, `*out_json` receives the result document
// and `*out_exit_code` the code the CLI would exit with; a document can
// carry a nonzero code, e.g. for a failed balancing check.
//
// # Safety
// Pointers must be valid; strings nul-terminated.
enum TorbunStatus torbun_run(const struct TorbunProblem *problem,
                             const char *command,
                             const char *options_json,
                             char **out_json,
                             int32_t *out_exit_code);

// The SHA-256 digest of the loaded problem text, as lowercase hex.
// Release with [`torbun_string_free`]. Returns null for a null handle.
//
// # Safety
// `problem` must be null or a live handle.
char *torbun_problem_digest(const struct TorbunProblem *problem);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used again.
void torbun_string_free(char *s);

// The message of the last failure on this thread, or null. Valid until
// the next call into this library on the same thread.
const char *torbun_last_error(void);

// The library version as a static string.
const char *torbun_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORBUN_H */
