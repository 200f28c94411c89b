#ifndef LOOPCERT_H
#define LOOPCERT_H

#include <stddef.h>

/*
 Result codes of all entry points.
 */
typedef enum LcStatus {
  LcStatus_Ok = 0,
  LcStatus_NullPointer = 1,
  LcStatus_InvalidUtf8 = 2,
  LcStatus_Syntax = 3,
  LcStatus_InvalidLoop = 4,
  LcStatus_UnknownStrategy = 5,
  LcStatus_ShapeMismatch = 6,
  LcStatus_Internal = 7,
} LcStatus;

/*
 Kind of a verdict.
 */
typedef enum LcVerdictKind {
  /*
   The loop is a loop under the strategy.
   */
  LcVerdictKind_Yes = 0,
  /*
   Some unrolled step violates the strategy.
   */
  LcVerdictKind_No = 1,
  /*
   Some problem stayed open within the bounds.
   */
  LcVerdictKind_Unknown = 2,
} LcVerdictKind;

/*
 A validated loop, bound to the system it was parsed against.
 */
typedef struct LcLoop LcLoop;

/*
 A parsed rewrite system.
 */
typedef struct LcTrs LcTrs;

/*
 The outcome of a check.
 */
typedef struct LcVerdict LcVerdict;

/*
 Parses a rewrite system in VAR/RULES syntax.

 # Safety
 `source` is a NUL-terminated string and `out` is writable.
 */
enum LcStatus lc_trs_parse(const char *source, struct LcTrs **out);

/*
 Number of rules, 0 for a null handle.

 # Safety
 `trs` is null or a live handle.
 */
size_t lc_trs_rule_count(const struct LcTrs *trs);

/*
 # Safety
 `trs` is null or a handle not yet freed.
 */
void lc_trs_free(struct LcTrs *trs);

/*
 Parses and validates a JSON loop certificate.

 # Safety
 `trs` is a live handle, `source` a NUL-terminated string, `out` writable.
 */
enum LcStatus lc_loop_parse(const struct LcTrs *trs, const char *source, struct LcLoop **out);

/*
 # Safety
 `lp` is null or a handle not yet freed.
 */
void lc_loop_free(struct LcLoop *lp);

/*
 Decides the loop for a builtin strategy such as `"leftmost-outermost"`.
 A `bound` of 0 selects the default exponent bound.

 # Safety
 `trs` and `lp` are live handles, `strategy` a NUL-terminated string,
 `out` writable.
 */
enum LcStatus lc_check(const struct LcTrs *trs,
                       const struct LcLoop *lp,
                       const char *strategy,
                       size_t bound,
                       struct LcVerdict **out);

/*
 Decides the loop for the forbidden patterns given in pattern-file syntax.

 # Safety
 As for [`lc_check`], with `patterns` a NUL-terminated string.
 */
enum LcStatus lc_check_forbidden(const struct LcTrs *trs,
                                 const struct LcLoop *lp,
                                 const char *patterns,
                                 size_t bound,
                                 struct LcVerdict **out);

/*
 # Safety
 `v` is a live verdict handle.
 */
enum LcVerdictKind lc_verdict_kind(const struct LcVerdict *v);

/*
 Writes the JSON report to `out`; release it with [`lc_string_free`].

 # Safety
 `v` is a live verdict handle and `out` writable.
 */
enum LcStatus lc_verdict_render_json(const struct LcVerdict *v, char **out);

/*
 # Safety
 `v` is null or a handle not yet freed.
 */
void lc_verdict_free(struct LcVerdict *v);

/*
 # Safety
 `s` is null or a string returned by this library and not yet freed.
 */
void lc_string_free(char *s);

/*
 Message of the last failure on this thread, or null. The pointer stays
 valid until the next failing call on the same thread.
 */
const char *lc_last_error_message(void);

/*
 Library version as a static string.
 */
const char *lc_version(void);

#endif  /* LOOPCERT_H */
