/* Generated by cbindgen. Do not edit. */

#ifndef LEALC_H
#define LEALC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LealcStatus {
  LEALC_STATUS_OK = 0,
  /**
   * The knowledge base has no model.
   */
  LEALC_STATUS_INCONSISTENT = 1,
  LEALC_STATUS_NULL_ARGUMENT = -1,
  LEALC_STATUS_INVALID_UTF8 = -2,
  LEALC_STATUS_PARSE = -3,
  LEALC_STATUS_TBOX = -4,
  LEALC_STATUS_UNKNOWN_NAME = -5,
  LEALC_STATUS_UNSUPPORTED = -6,
  LEALC_STATUS_RESOURCE = -7,
  LEALC_STATUS_INTERNAL = -99,
} LealcStatus;

/**
 * A parsed knowledge base with its cached saturation.
 */
typedef struct LealcReasoner LealcReasoner;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `kb_text` and stores a new reasoner in `*out`.
 *
 * # Safety
 * `kb_text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LealcStatus lealc_reasoner_new(const char *kb_text, struct LealcReasoner **out);

/**
 * Releases a reasoner. Null is ignored.
 *
 * # Safety
 * `r` must come from [`lealc_reasoner_new`] and not be used afterwards.
 */
void lealc_reasoner_free(struct LealcReasoner *r);

/**
 * Decides consistency: `LEALC_STATUS_OK` when consistent,
 * `LEALC_STATUS_INCONSISTENT` when not.
 *
 * # Safety
 * `r` must be a live reasoner.
 */
enum LealcStatus lealc_check(const struct LealcReasoner *r);

/**
 * Answers one query in the text query syntax and stores the answer as a
 * JSON object in `*out_json`.
 *
 * # Safety
 * `r` must be a live reasoner, `query` a NUL-terminated string and
 * `out_json` a valid pointer.
 */
enum LealcStatus lealc_ask(const struct LealcReasoner *r, const char *query, char **out_json);

/**
 * Stores the universal model as JSON in `*out_json`.
 *
 * # Safety
 * `r` must be a live reasoner and `out_json` a valid pointer.
 */
enum LealcStatus lealc_model_json(const struct LealcReasoner *r, char **out_json);

/**
 * Stores every rule application of the saturation run as
 * newline-delimited JSON in `*out`.
 *
 * # Safety
 * `r` must be a live reasoner and `out` a valid pointer.
 */
enum LealcStatus lealc_trace_ndjson(const struct LealcReasoner *r, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void lealc_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *lealc_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEALC_H */
