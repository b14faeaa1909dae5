/* C interface to the chain-entropy library. */

#ifndef CHAIN_ENTROPY_H
#define CHAIN_ENTROPY_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Ground-state phase of a chain.
 */
typedef enum {
  CE_GAPPED = 0,
  CE_CRITICAL_PARITY_PRESERVING = 1,
  CE_CRITICAL_DIRAC_SEA = 2,
} CeClass;

/**
 * Closed-form kinds accepted by `ce_closed_form`.
 */
typedef enum {
  CE_CRITICAL_XX = 0,
  CE_ISING_LINE = 1,
  CE_XX_DM = 2,
} CeClosedForm;

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum {
  CE_OK = 0,
  CE_ERR_DOMAIN = 1,
  CE_ERR_CONSTRAINT = 2,
  CE_ERR_NUMERICAL = 3,
  CE_ERR_STRUCTURE = 4,
  CE_ERR_ADMISSIBILITY = 5,
  CE_ERR_ACCURACY = 6,
  CE_ERR_UNSUPPORTED = 7,
  CE_ERR_USAGE = 8,
  CE_ERR_NULL_POINTER = 9,
  CE_ERR_PANIC = 10,
} CeStatus;

/**
 * Opaque chain handle.
 */
typedef struct CeChain CeChain;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent error on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *ce_last_error_message(void);

/**
 * Build a nearest-neighbour chain handle from the three standard
 * parameters. The caller owns the handle and must free it.
 *
 * # Safety
 * `out` must be writable.
 */
CeStatus ce_chain_xydm(double gamma, double s, double h, CeChain **out);

/**
 * Parse a chain specification (the same JSON the CLI accepts).
 *
 * # Safety
 * `json` must be a valid NUL-terminated string; `out` must be writable.
 */
CeStatus ce_chain_from_json(const char *json, CeChain **out);

/**
 * Release a chain handle.
 *
 * # Safety
 * `chain` must come from a `ce_chain_*` constructor and not be freed twice.
 */
void ce_chain_free(CeChain *chain);

/**
 * Single-particle dispersion at angle `theta`.
 *
 * # Safety
 * `chain` must be a live handle; `out` writable.
 */
CeStatus ce_dispersion(const CeChain *chain, double theta, double *out);

/**
 * Phase classification with the pinching and insertion counts.
 *
 * # Safety
 * `chain` must be a live handle; output pointers writable.
 */
CeStatus ce_classify(const CeChain *chain,
                     CeClass *class_out,
                     uintptr_t *pinchings_out,
                     uintptr_t *insertions_out);

/**
 * Renyi entropy of a single interval of `x_size` sites in the
 * thermodynamic limit.
 *
 * # Safety
 * `chain` must be a live handle; output pointers writable.
 */
CeStatus ce_interval_entropy(const CeChain *chain,
                             double alpha,
                             uintptr_t x_size,
                             double *s_out,
                             double *z_out);

/**
 * Entanglement half-spectrum of a single interval; writes at most
 * `capacity` values and reports the full length.
 *
 * # Safety
 * `chain` must be a live handle; `buffer` must have room for `capacity`
 * doubles; `written` writable.
 */
CeStatus ce_interval_spectrum(const CeChain *chain,
                              uintptr_t x_size,
                              double *buffer,
                              uintptr_t capacity,
                              uintptr_t *written);

/**
 * Theta-function entropy of a gapped real-coupling chain.
 *
 * # Safety
 * `chain` must be a live handle; `out` writable.
 */
CeStatus ce_theta_entropy(const CeChain *chain, double alpha, uintptr_t x_size, double *out);

/**
 * The universal constant entering the critical closed forms.
 *
 * # Safety
 * `out` must be writable.
 */
CeStatus ce_i_alpha(double alpha, double *out);

/**
 * Scaling dimension `(1/alpha - alpha)/24`.
 */
double ce_delta_alpha(double alpha);

/**
 * Printed asymptotic entropy of the tabulated critical models. `p1, p2`
 * are (h, unused), (gamma, unused) or (s, h) per the kind.
 *
 * # Safety
 * `out` must be writable.
 */
CeStatus ce_closed_form(CeClosedForm kind,
                        double p1,
                        double p2,
                        double x_size,
                        double alpha,
                        double *out);

/**
 * Boost flow of the nearest-neighbour couplings.
 *
 * # Safety
 * Output pointers must be writable.
 */
CeStatus ce_transform_xydm(double zeta,
                           double gamma,
                           double s,
                           double h,
                           double *gamma_out,
                           double *s_out,
                           double *h_out);

/**
 * Apply a boost to a chain handle, producing a new handle.
 *
 * # Safety
 * `chain` must be a live handle; `out` writable.
 */
CeStatus ce_chain_boost(const CeChain *chain, double zeta, CeChain **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CHAIN_ENTROPY_H */
