#ifndef THERMALOPS_H
#define THERMALOPS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ThoMembership {
  THO_MEMBERSHIP_INTERIOR = 0,
  THO_MEMBERSHIP_DEPHASING = 1,
  THO_MEMBERSHIP_BOUNDARY_NOT_REACHABLE = 2,
  THO_MEMBERSHIP_OUTSIDE = 3,
} ThoMembership;

typedef enum ThoStatus {
  THO_STATUS_OK = 0,
  THO_STATUS_NULL_POINTER = 1,
  THO_STATUS_INVALID_UTF8 = 2,
  THO_STATUS_PARSE = 3,
  THO_STATUS_DIMENSION_MISMATCH = 4,
  THO_STATUS_NOT_SQUARE = 5,
  THO_STATUS_NON_FINITE = 6,
  THO_STATUS_NOT_HERMITIAN = 7,
  THO_STATUS_NOT_UNITARY = 8,
  THO_STATUS_ENERGY_CONSERVATION = 9,
  THO_STATUS_INFEASIBLE = 10,
  THO_STATUS_INVALID_ARGUMENT = 11,
  THO_STATUS_DIMENSION_CAP = 12,
  THO_STATUS_PANIC = 13,
} ThoStatus;

/**
 * A CPTP map given by its Choi matrix.
 */
typedef struct ThoChannel ThoChannel;

/**
 * A thermal operation: system and bath Hamiltonians, temperature and unitary.
 */
typedef struct ThoSpec ThoSpec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on this thread.
 */
const char *tho_last_error(void);

/**
 * Library version as a static string.
 */
const char *tho_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void tho_string_free(char *s);

/**
 * Parses `{"dim": n, "choi": {"rows", "cols", "data": [[re, im], ...]}}`.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum ThoStatus tho_channel_from_json(const char *json, struct ThoChannel **out);

/**
 * # Safety
 * `ch` must be a live handle; `out` must be writable. Free the result with `tho_string_free`.
 */
enum ThoStatus tho_channel_to_json(const struct ThoChannel *ch, char **out);

/**
 * # Safety
 * `ch` must be null or a handle from this library, not yet freed.
 */
void tho_channel_free(struct ThoChannel *ch);

/**
 * Dimension of the channel's input space, or 0 for a null handle.
 *
 * # Safety
 * `ch` must be null or a live handle.
 */
size_t tho_channel_dim(const struct ThoChannel *ch);

/**
 * Sets `*pass` to 1 when the Choi matrix is PSD and trace preserving within `tol`.
 *
 * # Safety
 * `ch` must be a live handle; the out pointers must be writable.
 */
enum ThoStatus tho_channel_validate(const struct ThoChannel *ch,
                                    double tol,
                                    int *pass,
                                    double *min_eigenvalue);

/**
 * The channel `first ∘ second`.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum ThoStatus tho_channel_compose(const struct ThoChannel *first,
                                   const struct ThoChannel *second,
                                   struct ThoChannel **out);

/**
 * Trace norm of the Choi difference divided by the dimension.
 *
 * # Safety
 * Both handles must be live; `out` must be writable.
 */
enum ThoStatus tho_channel_distance(const struct ThoChannel *a,
                                    const struct ThoChannel *b,
                                    double *out);

/**
 * Parses `{"H_S": ..., "H_B": ..., "beta": x, "U": <matrix>}` and checks
 * unitarity and energy conservation.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum ThoStatus tho_spec_from_json(const char *json, struct ThoSpec **out);

/**
 * # Safety
 * `spec` must be null or a handle from this library, not yet freed.
 */
void tho_spec_free(struct ThoSpec *spec);

/**
 * The channel obtained by coupling to the Gibbs bath and tracing it out.
 *
 * # Safety
 * `spec` must be a live handle; `out` must be writable.
 */
enum ThoStatus tho_spec_realize(const struct ThoSpec *spec, struct ThoChannel **out);

/**
 * Qubit coordinates: λ and the coherence factor c.
 *
 * # Safety
 * `ch` must be a live qubit handle; the out pointers must be writable.
 */
enum ThoStatus tho_qubit_psi(const struct ThoChannel *ch,
                             double *lambda,
                             double *c_re,
                             double *c_im);

/**
 * The qubit channel with coordinates (λ, r·e^{iφ}) at Boltzmann ratio q.
 *
 * # Safety
 * `out` must be writable.
 */
enum ThoStatus tho_qubit_psi_inv(double lambda,
                                 double r,
                                 double phi,
                                 double q,
                                 double tol,
                                 struct ThoChannel **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum ThoStatus tho_qubit_membership(double lambda,
                                    double r,
                                    double phi,
                                    double q,
                                    double tol,
                                    enum ThoMembership *out);

/**
 * Full experiment report as JSON for `name` in {"discontinuity-qubit",
 * "discontinuity-qutrit"} at Boltzmann ratio q.
 *
 * # Safety
 * `name` must be a nul-terminated string; `out` must be writable.
 */
enum ThoStatus tho_experiment_json(const char *name, double q, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THERMALOPS_H */
