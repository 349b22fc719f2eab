#ifndef QCOVMAP_H
#define QCOVMAP_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum QcmStatus {
  QCM_STATUS_OK = 0,
  QCM_STATUS_NULL_POINTER = 1,
  QCM_STATUS_INVALID_DIMENSION = 2,
  QCM_STATUS_INVALID_ARGUMENT = 3,
  QCM_STATUS_NOT_A_STATE = 4,
  QCM_STATUS_INDEX_OUT_OF_RANGE = 5,
  QCM_STATUS_BUFFER_TOO_SMALL = 6,
  QCM_STATUS_INTERNAL = 7,
  QCM_STATUS_PANIC = 8,
} QcmStatus;

// Map parameters `(N, alpha, beta, C)`.
typedef struct QcmParams QcmParams;

// A density matrix.
typedef struct QcmState QcmState;

// Canonical-output coefficients and positivity margin.
typedef struct QcmCoefficients {
  double m11;
  double m12;
  double m23;
  double cross;
  double c;
  // Smallest positivity slack; negative means unphysical.
  double margin;
} QcmCoefficients;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next call into this library on the same thread.
const char *qcm_last_error_message(void);

// Creates map parameters. `N` must be at least 2 and the reals finite.
enum QcmStatus qcm_params_new(size_t n,
                              double alpha,
                              double beta,
                              double c,
                              struct QcmParams **out);

// Parameters of the optimal universal cloner.
enum QcmStatus qcm_params_cloning(size_t n, struct QcmParams **out);

// Parameters of the optimal universal entangler.
enum QcmStatus qcm_params_entangling(size_t n, struct QcmParams **out);

// Reads back the parameters. Any output pointer may be null.
enum QcmStatus qcm_params_get(const struct QcmParams *params,
                              size_t *n,
                              double *alpha,
                              double *beta,
                              double *c);

void qcm_params_free(struct QcmParams *params);

// Canonical-output coefficients and positivity margin of `params`.
enum QcmStatus qcm_canonical_coefficients(const struct QcmParams *params,
                                          struct QcmCoefficients *out);

// Writes 1 to `out` if the map is physical (all positivity slacks ≥ −1e-12), else 0.
enum QcmStatus qcm_params_is_physical(const struct QcmParams *params, int32_t *out);

// Output of the map on the canonical input `|1⟩⟨1|`.
enum QcmStatus qcm_apply_canonical(const struct QcmParams *params, struct QcmState **out);

// Output of the map on the Bloch coefficients `m` (row-major `N × N`,
// `m_im` may be null for a real `m`).
enum QcmStatus qcm_apply(const struct QcmParams *params,
                         const double *m_re,
                         const double *m_im,
                         struct QcmState **out);

// Builds a state from a row-major `d × d` matrix (`im` may be null). The
// matrix must be Hermitian with unit trace.
enum QcmStatus qcm_state_new(size_t d, const double *re, const double *im, struct QcmState **out);

// The optimal entangler output, a uniform mixture of antisymmetric Bell states.
enum QcmStatus qcm_entangled_output(size_t n, struct QcmState **out);

// The optimal cloner output for input `|1⟩`.
enum QcmStatus qcm_cloning_output(size_t n, struct QcmState **out);

enum QcmStatus qcm_state_dim(const struct QcmState *state, size_t *out);

// Copies the matrix into caller buffers of `len ≥ d²` doubles each, row-major.
// `im` may be null.
enum QcmStatus qcm_state_copy_entries(const struct QcmState *state,
                                      double *re,
                                      double *im,
                                      size_t len);

// Von Neumann entropy in nats.
enum QcmStatus qcm_state_entropy(const struct QcmState *state, double *out);

// Smallest eigenvalue of the partial transpose on the second factor.
enum QcmStatus qcm_state_ppt_min_eig(const struct QcmState *state, double *out);

// Smallest mixing weight with the maximally mixed state that still leaves
// the state inside the full state space.
enum QcmStatus qcm_state_epsilon(const struct QcmState *state, double *out);

// Traces out factor `traced` (1 or 2) of a two-particle state.
enum QcmStatus qcm_state_partial_trace(const struct QcmState *state,
                                       uint8_t traced,
                                       struct QcmState **out);

// JSON `{"d":…, "re":[…], "im":[…]}`; release with [`qcm_string_free`].
enum QcmStatus qcm_state_to_json(const struct QcmState *state, char **out);

void qcm_string_free(char *s);

void qcm_state_free(struct QcmState *state);

// `ln(N(N−1)/2)`.
enum QcmStatus qcm_optimal_entropy(size_t n, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCOVMAP_H */
