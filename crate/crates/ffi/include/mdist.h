#ifndef MDIST_H
#define MDIST_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum MdistStatus {
  MDIST_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MDIST_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  MDIST_STATUS_UTF8 = 2,
  /**
   * Presentation text could not be parsed or failed validation.
   */
  MDIST_STATUS_PARSE = 3,
  /**
   * A numeric argument was malformed or out of range.
   */
  MDIST_STATUS_INVALID_ARGUMENT = 4,
  /**
   * An internal error; the handle arguments are left untouched.
   */
  MDIST_STATUS_PANIC = 5,
} MdistStatus;

/**
 * Opaque presentation handle.
 */
typedef struct MdistPresentation MdistPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `fpres v1` text into a new handle stored in `*out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum MdistStatus mdist_presentation_parse(const char *text, struct MdistPresentation **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `p` must be null or a handle not yet freed.
 */
void mdist_presentation_free(struct MdistPresentation *p);

/**
 * Canonical `fpres v1` text of a presentation.
 *
 * # Safety
 * `p` must be a valid handle and `out` a writable pointer.
 */
enum MdistStatus mdist_presentation_serialize(const struct MdistPresentation *p, char **out);

/**
 * Exact matching distance as a string (`inf`, an integer, or `p/q`).
 *
 * # Safety
 * `a` and `b` must be valid handles and `out` a writable pointer.
 */
enum MdistStatus mdist_matching_distance(const struct MdistPresentation *a,
                                         const struct MdistPresentation *b,
                                         uint64_t seed,
                                         char **out);

/**
 * Writes whether `d_M(a, b) ≤ lambda` to `*out`.
 *
 * # Safety
 * `a` and `b` must be valid handles, `lambda` a NUL-terminated string and `out` writable.
 */
enum MdistStatus mdist_decide(const struct MdistPresentation *a,
                              const struct MdistPresentation *b,
                              const char *lambda,
                              bool *out);

/**
 * Bottleneck distance of the slice barcodes at the dual point `(slope, intercept)`,
 * with `0 < slope ≤ 1`.
 *
 * # Safety
 * `a` and `b` must be valid handles, the numbers NUL-terminated strings and `out` writable.
 */
enum MdistStatus mdist_bottleneck(const struct MdistPresentation *a,
                                  const struct MdistPresentation *b,
                                  const char *slope,
                                  const char *intercept,
                                  char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void mdist_string_free(char *s);

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *mdist_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *mdist_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MDIST_H */
