#ifndef IDENT_H
#define IDENT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * How much of the analysis to run; passed to [`ident_analyze`] as an integer.
 */
typedef enum IdentStage {
  IDENT_STAGE_IO = 0,
  IDENT_STAGE_MULTI = 1,
  IDENT_STAGE_FULL = 2,
} IdentStage;

typedef enum IdentStatus {
  IDENT_STATUS_OK = 0,
  IDENT_STATUS_INTERNAL = 1,
  IDENT_STATUS_PARSE = 2,
  IDENT_STATUS_BUDGET = 3,
  IDENT_STATUS_SELF_CHECK = 4,
  IDENT_STATUS_NULL_POINTER = 5,
  IDENT_STATUS_UTF8 = 6,
  IDENT_STATUS_PANIC = 7,
} IdentStatus;

typedef struct IdentModel IdentModel;

typedef struct IdentReport IdentReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a model document into `*out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum IdentStatus ident_model_parse(const char *text, struct IdentModel **out);

/**
 * Releases a model; NULL is ignored.
 *
 * # Safety
 * `m` must come from [`ident_model_parse`] and not be used afterwards.
 */
void ident_model_free(struct IdentModel *m);

/**
 * Runs the analysis up to `stage` (an [`IdentStage`] value). `ranking` may
 * be NULL for the default.
 *
 * # Safety
 * Pointers must be valid; `ranking` may be NULL.
 */
enum IdentStatus ident_analyze(const struct IdentModel *m,
                               const char *ranking,
                               uint32_t stage,
                               struct IdentReport **out);

/**
 * JSON rendering of a report into `*out`, released with [`ident_string_free`].
 *
 * # Safety
 * Pointers must be valid.
 */
enum IdentStatus ident_report_json(const struct IdentReport *r, char **out);

/**
 * Number of experiments sufficient for multi-experiment identifiability.
 * Fails with `IDENT_STATUS_INTERNAL` when the report was produced at the
 * `IO` stage.
 *
 * # Safety
 * Pointers must be valid.
 */
enum IdentStatus ident_report_bound(const struct IdentReport *r, uint64_t *out);

/**
 * Releases a report; NULL is ignored.
 *
 * # Safety
 * `r` must come from [`ident_analyze`] and not be used afterwards.
 */
void ident_report_free(struct IdentReport *r);

/**
 * Decides whether `expr` over the parameters is identifiable, from a single
 * experiment or, when `multi` is set, from several.
 *
 * # Safety
 * Pointers must be valid; `ranking` may be NULL.
 */
enum IdentStatus ident_check(const struct IdentModel *m,
                             const char *ranking,
                             const char *expr,
                             bool multi,
                             bool *out);

/**
 * Message for the last failed call on this thread; empty after success.
 * The pointer stays valid until the next call into this library.
 */
const char *ident_last_error_message(void);

/**
 * Releases a string returned by this library; NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ident_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IDENT_H */
