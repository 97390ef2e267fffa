#ifndef DECOLOG_H
#define DECOLOG_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DecologStatus {
  DECOLOG_STATUS_OK = 0,
  DECOLOG_STATUS_NULL_ARGUMENT = 1,
  DECOLOG_STATUS_INVALID_UTF8 = 2,
  DECOLOG_STATUS_SYNTAX = 3,
  DECOLOG_STATUS_TYPE = 4,
  DECOLOG_STATUS_WRONG_LOGIC = 5,
  DECOLOG_STATUS_NO_CANONICAL_FORM = 6,
  DECOLOG_STATUS_MODEL = 7,
  DECOLOG_STATUS_BOUNDS = 8,
  DECOLOG_STATUS_INTERNAL = 9,
} DecologStatus;

typedef enum DecologVerdict {
  DECOLOG_VERDICT_EQUAL = 0,
  DECOLOG_VERDICT_NOT_EQUAL = 1,
  DECOLOG_VERDICT_INCONSISTENT = 2,
  DECOLOG_VERDICT_EMPTY_DOMAIN = 3,
} DecologVerdict;

/**
 * A parsed program and the models its checks are decided in.
 */
typedef struct DecologSession DecologSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `source` into a new session. Checks are decided in the program's
 * model block, or in every model with carriers up to `carrier_max`.
 *
 * # Safety
 * `source` is a NUL-terminated string and `out` is writable.
 */
enum DecologStatus decolog_session_new(const char *source,
                                       size_t carrier_max,
                                       struct DecologSession **out);

/**
 * # Safety
 * `session` is null or was returned by [`decolog_session_new`] and not yet freed.
 */
void decolog_session_free(struct DecologSession *session);

/**
 * Number of `check` lines in the session's program.
 *
 * # Safety
 * `session` is null or a live session.
 */
size_t decolog_session_check_count(const struct DecologSession *session);

/**
 * Decides `equation` (in the session's names) and writes the verdict and a
 * report of `pure-eq:` lines, plus a countermodel line when one exists.
 *
 * # Safety
 * `session` is a live session, `equation` a NUL-terminated string,
 * `verdict_out` and `report_out` writable.
 */
enum DecologStatus decolog_check(const struct DecologSession *session,
                                 const char *equation,
                                 enum DecologVerdict *verdict_out,
                                 char **report_out);

/**
 * Writes the canonical form of `term` in the session's logic.
 *
 * # Safety
 * `session` is a live session, `term` a NUL-terminated string, `out` writable.
 */
enum DecologStatus decolog_normalize(const struct DecologSession *session,
                                     const char *term,
                                     char **out);

/**
 * Writes the core-language image of an exceptions `term`.
 *
 * # Safety
 * `session` is a live session, `term` a NUL-terminated string, `out` writable.
 */
enum DecologStatus decolog_translate(const struct DecologSession *session,
                                     const char *term,
                                     char **out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` is null or a string from this library not yet freed.
 */
void decolog_string_free(char *s);

/**
 * Message of the last failed call on this thread; valid until the next
 * failing call on the same thread.
 */
const char *decolog_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DECOLOG_H */
