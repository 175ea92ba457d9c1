#ifndef EQMEASURE_H
#define EQMEASURE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EqmStatus {
  EQM_STATUS_OK = 0,
  EQM_STATUS_INVALID_ARGUMENT = 1,
  EQM_STATUS_DOMAIN = 2,
  EQM_STATUS_NUMERIC_FAILURE = 3,
  EQM_STATUS_RESOURCE_LIMIT = 4,
  EQM_STATUS_NULL_POINTER = 5,
  EQM_STATUS_UTF8 = 6,
  EQM_STATUS_PANIC = 7,
} EqmStatus;

/**
 * An equilibrium density bound to its set.
 */
typedef struct EqmDensity EqmDensity;

/**
 * A set description (intervals, arcs, circle, lemniscate or periodic set).
 */
typedef struct EqmSet EqmSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *eqm_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *eqm_version(void);

/**
 * Parses a JSON set description such as
 * `{"type": "intervals", "endpoints": [-1, 1]}`.
 *
 * # Safety
 * `json` must be NULL or a NUL-terminated string; `out` must be NULL or
 * valid for a pointer write.
 */
enum EqmStatus eqm_set_from_json(const char *json, struct EqmSet **out);

/**
 * # Safety
 * `set` must be NULL or a handle from [`eqm_set_from_json`] not yet freed.
 */
void eqm_set_free(struct EqmSet *set);

/**
 * Builds the equilibrium density of `set`.
 *
 * # Safety
 * `set` must be a live handle or NULL; `out` must be NULL or writable.
 */
enum EqmStatus eqm_density_new(const struct EqmSet *set, struct EqmDensity **out);

/**
 * # Safety
 * `density` must be NULL or a handle from [`eqm_density_new`] not yet freed.
 */
void eqm_density_free(struct EqmDensity *density);

/**
 * Density at a real point (intervals) or angle (arcs, circles).
 *
 * # Safety
 * Pointers must be live handles / writable, or NULL.
 */
enum EqmStatus eqm_density_eval(const struct EqmDensity *density, double t, double *out);

/**
 * # Safety
 * Pointers must be live handles / writable, or NULL.
 */
enum EqmStatus eqm_density_mass(const struct EqmDensity *density, double *out);

/**
 * # Safety
 * Pointers must be live handles / writable, or NULL.
 */
enum EqmStatus eqm_density_frostman_spread(const struct EqmDensity *density, double *out);

/**
 * Number of gap zeros ξ (one per gap of an interval set, else zero).
 *
 * # Safety
 * Pointers must be live handles / writable, or NULL.
 */
enum EqmStatus eqm_density_xi_count(const struct EqmDensity *density, size_t *out);

/**
 * Copies the gap zeros into `buf`, which must hold at least
 * [`eqm_density_xi_count`] values.
 *
 * # Safety
 * `buf` must be NULL or valid for `len` writes of `double`.
 */
enum EqmStatus eqm_density_xi(const struct EqmDensity *density, double *buf, size_t len);

/**
 * Ω at endpoint `j` (0-based, increasing order).
 *
 * # Safety
 * Pointers must be live handles / writable, or NULL.
 */
enum EqmStatus eqm_omega_limit(const struct EqmDensity *density, size_t j, double *out);

/**
 * Local Markov factor at endpoint `j` of an interval, arc or periodic set.
 *
 * # Safety
 * Pointers must be live handles / writable, or NULL.
 */
enum EqmStatus eqm_markov_local(const struct EqmSet *set, size_t j, double *out);

/**
 * Largest local Markov factor of an interval set.
 *
 * # Safety
 * Pointers must be live handles / writable, or NULL.
 */
enum EqmStatus eqm_markov_global(const struct EqmSet *set, double *out);

/**
 * Pointwise Bernstein factor: `πω(x)` on interval sets, `2πω_Γ(e^{ix})` on
 * periodic sets, `(1 + 2πω(e^{ix}))/2` on arcs and `2πω` on circles.
 *
 * # Safety
 * Pointers must be live handles / writable, or NULL.
 */
enum EqmStatus eqm_bernstein_factor(const struct EqmSet *set, double x, double *out);

/**
 * L² Markov constant of an interval set under a weight given as JSON
 * (`{"exponents": [...], "h": [...]}`); NULL means the unit weight.
 *
 * # Safety
 * `weight_json` must be NULL or NUL-terminated; other pointers as above.
 */
enum EqmStatus eqm_l2_markov_constant(const struct EqmSet *set,
                                      const char *weight_json,
                                      double *out);

/**
 * `max |P^{(k)}|` over `‖P‖ ≤ 1` on [-1, 1] for degree `n`:
 * `∏_{i<k} (n² - i²) / (2k-1)!!`.
 *
 * # Safety
 * `out` must be NULL or writable.
 */
enum EqmStatus eqm_va_markov_exact(uint32_t n, uint32_t k, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EQMEASURE_H */
