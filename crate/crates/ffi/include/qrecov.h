#ifndef QRECOV_H
#define QRECOV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. Zero is success.
typedef enum QrecovStatus {
  QRECOV_STATUS_OK = 0,
  QRECOV_STATUS_NULL_POINTER = 1,
  QRECOV_STATUS_INVALID_ARGUMENT = 2,
  QRECOV_STATUS_DIMENSION_MISMATCH = 3,
  QRECOV_STATUS_INVALID_STATE = 4,
  QRECOV_STATUS_NOT_FAITHFUL = 5,
  QRECOV_STATUS_PARSE_ERROR = 6,
  QRECOV_STATUS_NUMERICAL_ERROR = 7,
  QRECOV_STATUS_PANIC = 8,
} QrecovStatus;

// Divergences computable through [`qrecov_divergence`].
typedef enum QrecovDivergence {
  // `D(ρ‖σ)`; parameter ignored.
  QRECOV_DIVERGENCE_UMEGAKI = 0,
  // Petz–Rényi `D_α`; parameter is `α`.
  QRECOV_DIVERGENCE_PETZ_RENYI = 1,
  // `Q_s = tr(ρ^{1-s} σ^s)`; parameter is `s`.
  QRECOV_DIVERGENCE_PETZ_QUASI = 2,
  // Sandwiched `D̃_α`; parameter is `α`.
  QRECOV_DIVERGENCE_SANDWICHED = 3,
  // Sandwiched quasi-entropy `Q̃_α`; parameter is `α`.
  QRECOV_DIVERGENCE_SANDWICHED_QUASI = 4,
  QRECOV_DIVERGENCE_MAX_RELATIVE = 5,
  QRECOV_DIVERGENCE_HOLEVO_FIDELITY = 6,
  QRECOV_DIVERGENCE_UHLMANN_FIDELITY = 7,
  // `tr(ρ^{-1} σ²)`.
  QRECOV_DIVERGENCE_QX_SQUARE = 8,
  // `tr(ρ² σ^{-1})`.
  QRECOV_DIVERGENCE_QX_INVERSE = 9,
  QRECOV_DIVERGENCE_MAX_QUASI = 10,
} QrecovDivergence;

// Opaque state pair with a subalgebra, ready for certificates.
typedef struct QrecovInstance QrecovInstance;

// Opaque density operator.
typedef struct QrecovState QrecovState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the
// next failing call on the same thread.
const char *qrecov_last_error(void);

// Library version as a static NUL-terminated string.
const char *qrecov_version(void);

// Builds a density operator from a row-major `dim x dim` matrix.
// `im` may be null for a real matrix.
//
// # Safety
// `re` (and `im` when non-null) must point to `dim * dim` doubles; `out`
// must be a valid pointer.
enum QrecovStatus qrecov_state_new(size_t dim,
                                   const double *re,
                                   const double *im,
                                   struct QrecovState **out);

// Ginibre-random full-rank state, deterministic per seed.
//
// # Safety
// `out` must be a valid pointer.
enum QrecovStatus qrecov_state_random(size_t dim, uint64_t seed, struct QrecovState **out);

// Dimension of a state, or 0 for null.
//
// # Safety
// `state` must be null or a live handle.
size_t qrecov_state_dim(const struct QrecovState *state);

// Copies the (possibly clipped) state matrix into row-major buffers of
// `dim * dim` doubles.
//
// # Safety
// `state` must be a live handle; `re` and `im` must hold `dim * dim` doubles.
enum QrecovStatus qrecov_state_matrix(const struct QrecovState *state, double *re, double *im);

// # Safety
// `state` must be null or a handle not yet freed.
void qrecov_state_free(struct QrecovState *state);

// Evaluates a divergence of `(rho, sigma)`. `param` is the order where the
// divergence takes one and is ignored otherwise.
//
// # Safety
// `rho` and `sigma` must be live handles; `out` must be a valid pointer.
enum QrecovStatus qrecov_divergence(const struct QrecovState *rho,
                                    const struct QrecovState *sigma,
                                    enum QrecovDivergence kind,
                                    double param,
                                    double *out);

// Instance on `C^{d_a} ⊗ C^{d_b}` whose subalgebra is the first factor when
// `keep_first` is nonzero and the second otherwise. The states are copied.
//
// # Safety
// `rho` and `sigma` must be live handles; `out` must be a valid pointer.
enum QrecovStatus qrecov_instance_new_tensor(const struct QrecovState *rho,
                                             const struct QrecovState *sigma,
                                             size_t d_a,
                                             size_t d_b,
                                             int keep_first,
                                             struct QrecovInstance **out);

// Parses an instance from its JSON state-file form.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be a valid pointer.
enum QrecovStatus qrecov_instance_from_json(const char *json, struct QrecovInstance **out);

// # Safety
// `inst` must be null or a handle not yet freed.
void qrecov_instance_free(struct QrecovInstance *inst);

// Measured trace distance of a rotated Petz recovery: `‖σ - R_ρ^t(σ_N)‖₁`
// when `reverse` is zero, `‖ρ - R_σ^t(ρ_N)‖₁` otherwise.
//
// # Safety
// `inst` must be a live handle; `out` must be a valid pointer.
enum QrecovStatus qrecov_recovery_error(const struct QrecovInstance *inst,
                                        int reverse,
                                        double t,
                                        double *out);

// Evaluates one theorem certificate and returns it as a JSON string.
// `s`, `alpha` and `epsilon` are NaN when unset; a NaN or negative
// `tolerance` selects the default. `passed` may be null.
//
// # Safety
// `inst` must be a live handle, `theorem_id` a NUL-terminated string and
// `out_json` a valid pointer. The returned string must be released with
// [`qrecov_string_free`].
enum QrecovStatus qrecov_certificate_json(const struct QrecovInstance *inst,
                                          const char *theorem_id,
                                          double t,
                                          double s,
                                          double alpha,
                                          double epsilon,
                                          double tolerance,
                                          char **out_json,
                                          int *passed);

// Releases a string returned by this library.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void qrecov_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QRECOV_H */
