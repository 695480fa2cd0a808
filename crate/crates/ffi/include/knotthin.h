#ifndef KNOTTHIN_H
#define KNOTTHIN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define KNOTTHIN_OK 0

/**
 * Null pointer, bad UTF-8 or other misuse of the API.
 */
#define KNOTTHIN_ERR_USAGE 1

#define KNOTTHIN_ERR_INVALID_INPUT 2

#define KNOTTHIN_ERR_RESOURCE_LIMIT 3

/**
 * `N <= 4` without the conjectural flag.
 */
#define KNOTTHIN_ERR_RANK 4

/**
 * A checked identity or certificate failed.
 */
#define KNOTTHIN_ERR_CHECK_FAILED 5

#define KNOTTHIN_ERR_PANIC 6

/**
 * Opaque HOMFLY engine with its memo table. Safe to share between threads.
 */
typedef struct KnotthinEngine KnotthinEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates an engine that expands at most `node_budget` skein nodes over
 * its lifetime. Free it with [`knotthin_engine_free`].
 */
struct KnotthinEngine *knotthin_engine_new(uint64_t node_budget);

/**
 * # Safety
 * `engine` must come from [`knotthin_engine_new`] and not be used again.
 */
void knotthin_engine_free(struct KnotthinEngine *engine);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void knotthin_string_free(char *s);

/**
 * Message for the last failed call on this thread; empty after success.
 * Valid until the next call on the same thread.
 */
const char *knotthin_last_error(void);

/**
 * Invariants (HOMFLY, Det, signature, linking) of K(p, q).
 *
 * # Safety
 * `engine` must be a live engine and `out` a valid pointer.
 */
int32_t knotthin_invariants_pq(const struct KnotthinEngine *engine,
                               int64_t p,
                               int64_t q,
                               int32_t reversed,
                               char **out);

/**
 * Invariants of the first diagram in a PD-code string.
 *
 * # Safety
 * `engine` must be a live engine, `pd_code` a NUL-terminated string and
 * `out` a valid pointer.
 */
int32_t knotthin_invariants_pd(const struct KnotthinEngine *engine,
                               const char *pd_code,
                               char **out);

/**
 * Predicted reduced sl(N) Poincaré polynomial of K(p, q) as a JSON
 * polynomial in `q`, `t`.
 *
 * # Safety
 * `engine` must be a live engine and `out` a valid pointer.
 */
int32_t knotthin_poincare_pq(const struct KnotthinEngine *engine,
                             int64_t p,
                             int64_t q,
                             int32_t reversed,
                             int64_t n,
                             int32_t conjectural,
                             char **out);

/**
 * Thinness certificate of K(p, q) as JSON.
 *
 * # Safety
 * `engine` must be a live engine and `out` a valid pointer.
 */
int32_t knotthin_certify_pq(const struct KnotthinEngine *engine,
                            int64_t p,
                            int64_t q,
                            int32_t reversed,
                            int64_t n,
                            char **out);

/**
 * Verifies a certificate. The report JSON is written to `out` both on
 * success and when checks fail (`KNOTTHIN_ERR_CHECK_FAILED`).
 *
 * # Safety
 * `engine` must be a live engine, `certificate_json` a NUL-terminated
 * string and `out` a valid pointer.
 */
int32_t knotthin_verify_certificate(const struct KnotthinEngine *engine,
                                    const char *certificate_json,
                                    int64_t n,
                                    char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KNOTTHIN_H */
