#ifndef OCCUR_H
#define OCCUR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call. The first four match the command-line exit codes.
 */
typedef enum OccurStatus {
  OCCUR_STATUS_OK = 0,
  /**
   * The analysis ran and a check failed.
   */
  OCCUR_STATUS_REFUTED = 1,
  /**
   * A term, equation, moding, query or program did not parse.
   */
  OCCUR_STATUS_PARSE_ERROR = 2,
  /**
   * A search budget or tree bound prevented a verdict.
   */
  OCCUR_STATUS_BUDGET_EXCEEDED = 3,
  /**
   * A null pointer, invalid UTF-8, or an unknown option name.
   */
  OCCUR_STATUS_INVALID_ARGUMENT = 4,
  /**
   * A bug in the library. The message says where.
   */
  OCCUR_STATUS_INTERNAL = 5,
} OccurStatus;

/**
 * A parsed program. Create with [`occur_program_parse`], release with
 * [`occur_program_free`].
 */
typedef struct OccurProgram OccurProgram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `text` as a program and stores a new handle in `*out`.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum OccurStatus occur_program_parse(const char *text, struct OccurProgram **out);

/**
 * Releases a program handle. Null is ignored.
 *
 * # Safety
 * `program` must come from [`occur_program_parse`] and not be used again.
 */
void occur_program_free(struct OccurProgram *program);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used again.
 */
void occur_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The string
 * stays valid until the next call into the library on the same thread.
 */
const char *occur_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *occur_version(void);

/**
 * Unifies two terms. `algorithm` is "mma" (with the occur-check, the
 * default when null) or "mma-minus" (without it).
 *
 * # Safety
 * String arguments must be nul-terminated or (where allowed) null.
 */
enum OccurStatus occur_unify(const char *lhs,
                             const char *rhs,
                             const char *algorithm,
                             char **out_json);

/**
 * Decides NSTO and/or WNSTO for equations like "f(X) = f(a), Y = X".
 * `property` is "nsto", "wnsto" or "both" (default). `moding` may be
 * null. A `budget` of 0 selects the default.
 *
 * # Safety
 * String arguments must be nul-terminated or (where allowed) null.
 */
enum OccurStatus occur_nsto(const char *equations,
                            const char *property,
                            const char *moding,
                            size_t budget,
                            char **out_json);

/**
 * Checks a program against a mode discipline: "tidy", "nicely", "well",
 * "well3", "weakly-tidy" or "weakly-linear-heads". `moding` overrides the
 * declared moding and may be null. A nonzero `search` tries every
 * 2-valued moding instead.
 *
 * # Safety
 * `program` must be a live handle; strings as for the other calls.
 */
enum OccurStatus occur_check_modes(const struct OccurProgram *program,
                                   const char *check,
                                   const char *moding,
                                   int32_t search,
                                   char **out_json);

/**
 * Builds the SLD tree of `query`. `rule` is "leftmost" (default),
 * "mode-compatible" or "all"; `verify` is "none" (default), "nsto" or
 * "wnsto"; `engine` is "sound" (default) or "unsound". Zero bounds
 * select the defaults.
 *
 * # Safety
 * `program` must be a live handle; strings as for the other calls.
 */
enum OccurStatus occur_derive(const struct OccurProgram *program,
                              const char *query,
                              const char *rule,
                              const char *verify,
                              const char *engine,
                              size_t max_depth,
                              size_t max_nodes,
                              char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OCCUR_H */
