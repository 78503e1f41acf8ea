#ifndef RAINBOW_H
#define RAINBOW_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a call. Decision functions use `RB_STATUS_OK` for YES and `RB_STATUS_NO`
 * for NO.
 */
typedef enum RbStatus {
  RB_STATUS_OK = 0,
  RB_STATUS_NO = 1,
  RB_STATUS_USAGE = 2,
  RB_STATUS_RESOURCE = 3,
  RB_STATUS_CAPABILITY = 4,
  RB_STATUS_PARSE = 5,
  RB_STATUS_NULL_POINTER = 6,
  RB_STATUS_UTF8 = 7,
  RB_STATUS_INTERNAL = 70,
  RB_STATUS_PANIC = 71,
} RbStatus;

/**
 * Total edge coloring, one color in `1..=k` per edge in edge order.
 */
typedef struct RbColoring RbColoring;

/**
 * Output of the formula compiler.
 */
typedef struct RbCompiled RbCompiled;

/**
 * Search budgets and worker count.
 */
typedef struct RbConfig RbConfig;

/**
 * Parsed instance.
 */
typedef struct RbInstance RbInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next library call on the same thread.
 */
const char *rb_last_error(void);

/**
 * # Safety
 * `s` is null or was returned by this library and not yet freed.
 */
void rb_string_free(char *s);

/**
 * Default budgets, one worker.
 */
struct RbConfig *rb_config_new(void);

/**
 * # Safety
 * `cfg` is null or a live handle from [`rb_config_new`].
 */
void rb_config_free(struct RbConfig *cfg);

/**
 * # Safety
 * `cfg` is a live handle.
 */
enum RbStatus rb_config_set_workers(struct RbConfig *cfg, size_t workers);

/**
 * # Safety
 * `cfg` is a live handle.
 */
enum RbStatus rb_config_set_search_nodes(struct RbConfig *cfg, uint64_t nodes);

/**
 * Parses the instance text format.
 *
 * # Safety
 * `text` is a nul-terminated string; `out` is writable.
 */
enum RbStatus rb_instance_parse(const char *text, struct RbInstance **out);

/**
 * # Safety
 * `inst` is null or a live handle.
 */
void rb_instance_free(struct RbInstance *inst);

/**
 * Serializes an instance; free the string with [`rb_string_free`].
 *
 * # Safety
 * `inst` is a live handle; `out` is writable.
 */
enum RbStatus rb_instance_write(const struct RbInstance *inst, char **out);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `inst` is null or a live handle.
 */
size_t rb_instance_vertices(const struct RbInstance *inst);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `inst` is null or a live handle.
 */
size_t rb_instance_edges(const struct RbInstance *inst);

/**
 * Color count, or 0 for a null handle.
 *
 * # Safety
 * `inst` is null or a live handle.
 */
size_t rb_instance_colors(const struct RbInstance *inst);

/**
 * Request count, or 0 for a null handle.
 *
 * # Safety
 * `inst` is null or a live handle.
 */
size_t rb_instance_requests(const struct RbInstance *inst);

/**
 * # Safety
 * `c` is null or a live handle.
 */
void rb_coloring_free(struct RbColoring *c);

/**
 * Number of edges colored, or 0 for a null handle.
 *
 * # Safety
 * `c` is null or a live handle.
 */
size_t rb_coloring_len(const struct RbColoring *c);

/**
 * Colors in edge order; valid while the handle lives.
 *
 * # Safety
 * `c` is null or a live handle.
 */
const uint8_t *rb_coloring_data(const struct RbColoring *c);

/**
 * Decides the instance. On `RB_STATUS_OK` a satisfying coloring is stored in
 * `out`; on `RB_STATUS_NO` `out` is set to null. `cfg` may be null.
 *
 * # Safety
 * `inst` is a live handle, `cfg` null or live, `out` writable.
 */
enum RbStatus rb_solve(const struct RbInstance *inst,
                       const struct RbConfig *cfg,
                       struct RbColoring **out);

/**
 * Counts requests that `colors` satisfies. `len` must equal the edge count.
 *
 * # Safety
 * `inst` is live; `colors` points to `len` bytes; `satisfied` is writable.
 */
enum RbStatus rb_verify(const struct RbInstance *inst,
                        const uint8_t *colors,
                        size_t len,
                        size_t *satisfied);

/**
 * Number of 2-colorings satisfying every request, as a decimal string.
 *
 * # Safety
 * `inst` is live, `cfg` null or live, `out` writable.
 */
enum RbStatus rb_count_2colorings(const struct RbInstance *inst,
                                  const struct RbConfig *cfg,
                                  char **out);

/**
 * Coloring by conditional expectations over one short path per feasible
 * request.
 *
 * # Safety
 * `inst` is live; `out` writable.
 */
enum RbStatus rb_approx(const struct RbInstance *inst, struct RbColoring **out);

/**
 * Whether some coloring satisfies at least `q` anti-edges of the instance
 * graph. The witness goes to `out` on `RB_STATUS_OK`; null on `RB_STATUS_NO`.
 *
 * # Safety
 * `inst` is live, `cfg` null or live, `out` writable.
 */
enum RbStatus rb_max_solve(const struct RbInstance *inst,
                           size_t q,
                           const struct RbConfig *cfg,
                           struct RbColoring **out);

/**
 * Compiles a DIMACS formula. `target` is one of `sr2c-ext`, `srkc-ext`,
 * `srkc`, `rkc`.
 *
 * # Safety
 * `dimacs` and `target` are nul-terminated; `out` writable.
 */
enum RbStatus rb_compile(const char *dimacs,
                         size_t k,
                         const char *target,
                         uint64_t seed,
                         struct RbCompiled **out);

/**
 * # Safety
 * `c` is null or a live handle.
 */
void rb_compiled_free(struct RbCompiled *c);

/**
 * Copy of the final instance.
 *
 * # Safety
 * `c` is live; `out` writable.
 */
enum RbStatus rb_compiled_instance(const struct RbCompiled *c, struct RbInstance **out);

/**
 * Trace text of the compilation.
 *
 * # Safety
 * `c` is live; `out` writable.
 */
enum RbStatus rb_compiled_trace(const struct RbCompiled *c, char **out);

/**
 * Size report, one stage per line followed by its checks. Returns `RB_STATUS_NO`
 * when a check disagrees with its stated count.
 *
 * # Safety
 * `c` is live; `out` writable.
 */
enum RbStatus rb_compiled_report(const struct RbCompiled *c, char **out);

/**
 * Coloring of the final instance for a model of the source formula;
 * `model[i]` nonzero means variable `i + 1` is true.
 *
 * # Safety
 * `c` live; `model` points to `nvars` bytes; `cfg` null or live; `out` writable.
 */
enum RbStatus rb_compiled_lift(const struct RbCompiled *c,
                               const uint8_t *model,
                               size_t nvars,
                               const struct RbConfig *cfg,
                               struct RbColoring **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RAINBOW_H */
