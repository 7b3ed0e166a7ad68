#ifndef KRLAB_H
#define KRLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Coefficient field of the ensemble.
 */
typedef enum KrlabField {
  KrlabField_Real = 0,
  KrlabField_Complex = 1,
} KrlabField;

/**
 * Point process selector.
 */
typedef enum KrlabMode {
  KrlabMode_Zeros = 0,
  KrlabMode_Critical = 1,
} KrlabMode;

/**
 * Status code returned by every fallible entry point.
 */
typedef enum KrlabStatus {
  KrlabStatus_Ok = 0,
  KrlabStatus_NullPointer = 1,
  KrlabStatus_InvalidArgument = 2,
  /**
   * Constraint covariance singular (real coefficients on or near ℝ^m).
   */
  KrlabStatus_DegenerateCovariance = 3,
  KrlabStatus_NonFinite = 4,
  /**
   * Density gap below the floating floor over the whole degree range.
   */
  KrlabStatus_RateUnresolvable = 5,
  KrlabStatus_RootFindFailed = 6,
  KrlabStatus_DimensionMismatch = 7,
} KrlabStatus;

/**
 * Opaque ensemble specification handle.
 */
typedef struct KrlabEnsemble KrlabEnsemble;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create an ensemble handle. On success `*out` owns the handle; release it
 * with `krlab_ensemble_free`.
 *
 * # Safety
 * `out` must be a valid pointer to a pointer slot.
 */
enum KrlabStatus krlab_ensemble_new(uint32_t m,
                                    uint32_t degree,
                                    enum KrlabField field,
                                    enum KrlabMode mode,
                                    struct KrlabEnsemble **out);

/**
 * Release a handle created by `krlab_ensemble_new`. Null is a no-op.
 *
 * # Safety
 * `ensemble` must be null or a pointer previously returned by
 * `krlab_ensemble_new` that has not been freed.
 */
void krlab_ensemble_free(struct KrlabEnsemble *ensemble);

/**
 * Expected density of the ensemble's point process at z ∈ ℂ^m, given as
 * flat re/im arrays of length m.
 *
 * # Safety
 * `ensemble` must be a live handle; array and out pointers must be valid.
 */
enum KrlabStatus krlab_density(const struct KrlabEnsemble *ensemble,
                               const double *z_re,
                               const double *z_im,
                               uintptr_t len,
                               double *out_density);

/**
 * Real-field over complex-field density ratio at identical parameters.
 *
 * # Safety
 * Array and out pointers must be valid.
 */
enum KrlabStatus krlab_density_ratio(uint32_t m,
                                     uint32_t degree,
                                     enum KrlabMode mode,
                                     const double *z_re,
                                     const double *z_im,
                                     uintptr_t len,
                                     double *out_ratio);

/**
 * Exponential rate λ_z = −log|(1 + z·z)/(1 + ‖z‖²)|; +∞ where 1 + z·z = 0.
 *
 * # Safety
 * Array and out pointers must be valid.
 */
enum KrlabStatus krlab_lambda_z(const double *z_re,
                                const double *z_im,
                                uintptr_t len,
                                double *out_rate);

/**
 * Exact SU(2) critical-point density at z = re + i·im.
 *
 * # Safety
 * `out` must be valid.
 */
enum KrlabStatus krlab_su2_crit_density(uint32_t degree, double re, double im, double *out);

/**
 * Exact SO(2) critical-point density (complex density plus error term);
 * fails on the real axis.
 *
 * # Safety
 * `out` must be valid.
 */
enum KrlabStatus krlab_so2_crit_density(uint32_t degree, double re, double im, double *out);

/**
 * Zero density of the m-component complex system at z ∈ ℂ^m.
 *
 * # Safety
 * Array and out pointers must be valid.
 */
enum KrlabStatus krlab_su_zero_density(uint32_t m,
                                       uint32_t degree,
                                       const double *z_re,
                                       const double *z_im,
                                       uintptr_t len,
                                       double *out);

/**
 * Scaling-limit critical-point density; splits the value into the complex
 * component and the real-field correction (zero for the complex field).
 *
 * # Safety
 * Out pointers must be valid.
 */
enum KrlabStatus krlab_scaled_crit_density(enum KrlabField field,
                                           double re,
                                           double im,
                                           double *out_value,
                                           double *out_cx,
                                           double *out_err);

/**
 * Linear-in-y slope of the scaled real density near the real axis.
 *
 * # Safety
 * `out` must be valid.
 */
enum KrlabStatus krlab_near_real_slope(double x, double *out);

/**
 * Fit the decay rate of |density_real − density_cx| over a degree sweep.
 * `out_fitted` receives the envelope-fit rate, `out_theoretical` the λ_z
 * bound rate.
 *
 * # Safety
 * Array and out pointers must be valid; `degrees` must hold `n_degrees`
 * values.
 */
enum KrlabStatus krlab_decay_rate_fit(uint32_t m,
                                      enum KrlabMode mode,
                                      const double *z_re,
                                      const double *z_im,
                                      uintptr_t len,
                                      const uint32_t *degrees,
                                      uintptr_t n_degrees,
                                      double *out_fitted,
                                      double *out_theoretical);

/**
 * Static description of a status code.
 */
const char *krlab_status_message(enum KrlabStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KRLAB_H */
