#ifndef FDNOMA_H
#define FDNOMA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define FDNOMA_USER_FAR 0

#define FDNOMA_USER_NEAR 1

#define FDNOMA_METHOD_SERIES 0

#define FDNOMA_METHOD_QUADRATURE 1

#define FDNOMA_METHOD_ASYMPTOTIC 2

#define FDNOMA_IPSIC_DETERMINISTIC 0

#define FDNOMA_IPSIC_EXPONENTIAL 1

typedef enum FdnomaStatus {
  FDNOMA_STATUS_OK = 0,
  FDNOMA_STATUS_NULL_POINTER = 1,
  FDNOMA_STATUS_INVALID_PARAMETER = 2,
  FDNOMA_STATUS_INVALID_CONFIG = 3,
  FDNOMA_STATUS_NOT_CONVERGED = 4,
  FDNOMA_STATUS_DEGENERATE_RATE = 5,
  FDNOMA_STATUS_UNDEFINED_SLOPE = 6,
  FDNOMA_STATUS_INTERNAL = 7,
} FdnomaStatus;

/**
 * Opaque validated configuration.
 */
typedef struct FdnomaConfig FdnomaConfig;

/**
 * Plain-data network parameters. Booleans are `0` or nonzero.
 */
typedef struct FdnomaParams {
  double a1;
  double a2;
  double b1;
  double b2;
  double kappa_sr;
  double kappa_li;
  double kappa_rdf;
  double kappa_rdn;
  double epsilon;
  uint8_t full_duplex;
  double lambda_sr;
  double lambda_li;
  double lambda_rdf;
  double lambda_rdn;
  double k_factor;
  double n0;
  double gamma_thf;
  double gamma_thn;
  uint8_t hd_prelog_half;
} FdnomaParams;

/**
 * Threshold coefficients; an infeasible coefficient is `+inf`.
 */
typedef struct FdnomaThresholds {
  double xi;
  double chi;
  double psi;
  double phi;
} FdnomaThresholds;

typedef struct FdnomaMcOutage {
  double far;
  double far_se;
  double near;
  double near_se;
} FdnomaMcOutage;

typedef struct FdnomaMcRates {
  double far;
  double far_se;
  double near;
  double near_se;
  double sum;
  double sum_se;
  double near_served;
} FdnomaMcRates;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *fdnoma_last_error(void);

/**
 * Writes the default network parameters.
 *
 * # Safety
 * `out` must be null or point to writable memory for one `FdnomaParams`.
 */
enum FdnomaStatus fdnoma_params_default(struct FdnomaParams *out);

/**
 * Validates `params` and allocates a configuration handle.
 *
 * # Safety
 * `params` must be null or point to a valid `FdnomaParams`; `out` must be
 * null or writable. The handle must be released with `fdnoma_config_free`.
 */
enum FdnomaStatus fdnoma_config_new(const struct FdnomaParams *params, struct FdnomaConfig **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `cfg` must be null or a handle from `fdnoma_config_new` not yet freed.
 */
void fdnoma_config_free(struct FdnomaConfig *cfg);

/**
 * Reads back the parameters held by a handle.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be null or writable.
 */
enum FdnomaStatus fdnoma_config_params(const struct FdnomaConfig *cfg, struct FdnomaParams *out);

/**
 * Sets the series truncation used by the series evaluators.
 *
 * # Safety
 * `cfg` must be null or a live handle.
 */
enum FdnomaStatus fdnoma_config_set_series(struct FdnomaConfig *cfg,
                                           size_t max_terms,
                                           double rel_tol);

/**
 * Density of a Rician power gain with K-factor `k` and mean `mean` at `x`.
 *
 * # Safety
 * `out` must be null or writable.
 */
enum FdnomaStatus fdnoma_rician_pdf(double k, double mean, double x, double *out);

/**
 * # Safety
 * `out` must be null or writable.
 */
enum FdnomaStatus fdnoma_rician_cdf(double k, double mean, double x, double *out);

/**
 * # Safety
 * `out` must be null or writable.
 */
enum FdnomaStatus fdnoma_rician_ccdf(double k, double mean, double x, double *out);

/**
 * # Safety
 * `cfg` must be a live handle; `out` must be null or writable.
 */
enum FdnomaStatus fdnoma_thresholds(const struct FdnomaConfig *cfg,
                                    double gamma,
                                    double gamma_prime,
                                    struct FdnomaThresholds *out);

/**
 * Outage probability of `user` (`FDNOMA_USER_*`) by `method`
 * (`FDNOMA_METHOD_*`). `converged` may be null.
 *
 * # Safety
 * `cfg` must be a live handle; `out` and `converged` must be null or writable.
 */
enum FdnomaStatus fdnoma_outage(const struct FdnomaConfig *cfg,
                                double gamma,
                                double gamma_prime,
                                uint32_t user,
                                uint32_t method,
                                double *out,
                                uint8_t *converged);

/**
 * Monte Carlo outage of both users.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be null or writable.
 */
enum FdnomaStatus fdnoma_mc_outage(const struct FdnomaConfig *cfg,
                                   double gamma,
                                   double gamma_prime,
                                   uint64_t trials,
                                   uint64_t seed,
                                   uint32_t ipsic_mode,
                                   struct FdnomaMcOutage *out);

/**
 * Monte Carlo ergodic rates in bits/s/Hz.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be null or writable.
 */
enum FdnomaStatus fdnoma_mc_rates(const struct FdnomaConfig *cfg,
                                  double gamma,
                                  double gamma_prime,
                                  uint64_t trials,
                                  uint64_t seed,
                                  uint32_t ipsic_mode,
                                  struct FdnomaMcRates *out);

/**
 * High-SNR ergodic rate of `user`.
 *
 * # Safety
 * `cfg` must be a live handle; `out` must be null or writable.
 */
enum FdnomaStatus fdnoma_rate_high_snr(const struct FdnomaConfig *cfg, uint32_t user, double *out);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fdnoma_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FDNOMA_H */
