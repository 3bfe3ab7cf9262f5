#ifndef FIREGRAPH_H
#define FIREGRAPH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FgStatus {
  FG_STATUS_OK = 0,
  FG_STATUS_NULL_POINTER = 1,
  FG_STATUS_INVALID_UTF8 = 2,
  FG_STATUS_INVALID_SPEC = 3,
  FG_STATUS_INVALID_KEY = 4,
  FG_STATUS_INVALID_ARGUMENT = 5,
  FG_STATUS_PROTECTION_OVERLAP = 6,
  FG_STATUS_BUDGET_EXCEEDED = 7,
  FG_STATUS_RESOURCE_LIMIT = 8,
  FG_STATUS_MALFORMED = 9,
  FG_STATUS_BUFFER_TOO_SMALL = 10,
  FG_STATUS_PANIC = 11,
  FG_STATUS_OTHER = 99,
} FgStatus;

/**
 * Opaque lazy graph.
 */
typedef struct FgGraph FgGraph;

/**
 * Opaque game session.
 */
typedef struct FgSession FgSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call.
 */
const char *fg_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void fg_string_free(char *s);

/**
 * Builds a graph from a family spec such as `square` or `tree:delta=3`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum FgStatus fg_graph_new(const char *spec, struct FgGraph **out);

/**
 * # Safety
 * `g` must come from [`fg_graph_new`] and not be freed twice.
 */
void fg_graph_free(struct FgGraph *g);

/**
 * Writes `s_0 .. s_n` about the base vertex into `buf` (length `len >= n+1`).
 *
 * # Safety
 * `g` must be a live graph and `buf` writable for `len` values.
 */
enum FgStatus fg_graph_sphere_sizes(const struct FgGraph *g, size_t n, uint64_t *buf, size_t len);

/**
 * Sorted neighbors of `key`, separated by `;`.
 *
 * # Safety
 * `g` must be a live graph; `key` NUL-terminated; `out` writable.
 */
enum FgStatus fg_graph_neighbors(const struct FgGraph *g, const char *key, char **out);

/**
 * Runs a game and returns the JSON-lines trace. `strategy_json` may be NULL
 * (no protections); otherwise it is a strategy document whose budget and
 * radius are replaced by `budget` and `r`.
 *
 * # Safety
 * String arguments must be NUL-terminated (or NULL where allowed); `out`
 * writable.
 */
enum FgStatus fg_simulate(const char *spec,
                          const char *x0,
                          const char *budget,
                          uint32_t r,
                          const char *strategy_json,
                          char **out);

/**
 * Re-validates a certificate document or replays a trace; `*valid` is set
 * to 1 when it checks out.
 *
 * # Safety
 * `doc` NUL-terminated; `valid` writable.
 */
enum FgStatus fg_check(const char *doc, int32_t *valid);

/**
 * Starts a session. `budget` uses the budget grammar (`2`, `poly:1,1`, ...).
 *
 * # Safety
 * Strings NUL-terminated; `out` writable.
 */
enum FgStatus fg_session_new(const char *spec,
                             const char *x0,
                             const char *budget,
                             uint32_t r,
                             struct FgSession **out);

/**
 * # Safety
 * `s` must come from [`fg_session_new`] and not be freed twice.
 */
void fg_session_free(struct FgSession *s);

/**
 * Protects the `;`-separated keys, then spreads. A rejected move leaves the
 * session unchanged.
 *
 * # Safety
 * `s` live; `keys` NUL-terminated.
 */
enum FgStatus fg_session_protect(struct FgSession *s, const char *keys);

/**
 * # Safety
 * `s` live.
 */
enum FgStatus fg_session_undo(struct FgSession *s);

/**
 * Current state as JSON.
 *
 * # Safety
 * `s` live; `out` writable.
 */
enum FgStatus fg_session_state_json(const struct FgSession *s, char **out);

/**
 * JSON-lines trace of the moves so far.
 *
 * # Safety
 * `s` live; `out` writable.
 */
enum FgStatus fg_session_trace(const struct FgSession *s, char **out);

/**
 * Library version, static storage.
 */
const char *fg_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FIREGRAPH_H */
