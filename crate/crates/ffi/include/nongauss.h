#ifndef NONGAUSS_H
#define NONGAUSS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define NG_SUPPORTS_HS 1

#define NG_SUPPORTS_RE 2

#define NG_SUPPORTS_F 4

// Result code of every fallible call.
typedef enum NgStatus {
  NG_STATUS_OK = 0,
  NG_STATUS_DOMAIN_ERROR = 1,
  NG_STATUS_CONVERGENCE_ERROR = 2,
  NG_STATUS_NORMALIZATION_ERROR = 3,
  NG_STATUS_DEGENERATE_ERROR = 4,
  NG_STATUS_UNSUPPORTED_ERROR = 5,
  NG_STATUS_NULL_POINTER = 6,
  NG_STATUS_PANIC = 7,
} NgStatus;

// Opaque photon-number distribution.
typedef struct NgDistribution NgDistribution;

// Series stopping rule; see [`ng_series_control_default`].
typedef struct NgSeriesControl {
  double tol;
  size_t max_terms;
} NgSeriesControl;

// The three degrees with their error bounds. Components missing from
// `supported` are NaN.
typedef struct NgMeasureTriple {
  double delta_hs;
  double delta_re;
  double delta_f;
  double err_hs;
  double err_re;
  double err_f;
  uint32_t supported;
} NgMeasureTriple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Default stopping rule: tolerance 1e-12, at most 100000 terms.
struct NgSeriesControl ng_series_control_default(void);

// Message of the last failure on this thread, or null. Valid until the
// next failing call on the same thread.
const char *ng_last_error_message(void);

// Static name of a status code.
const char *ng_status_name(enum NgStatus status);

// Library version as a static string.
const char *ng_version(void);

// Thermal state with mean photon number `nbar`.
//
// # Safety
// `out` must be valid for writes.
enum NgStatus ng_distribution_thermal(double nbar,
                                      struct NgSeriesControl ctl,
                                      struct NgDistribution **out);

// Number state `|m⟩`.
//
// # Safety
// `out` must be valid for writes.
enum NgStatus ng_distribution_fock(uint32_t m, struct NgDistribution **out);

// `m`-photon-added thermal state.
//
// # Safety
// `out` must be valid for writes.
enum NgStatus ng_distribution_pats(uint32_t m,
                                   double nbar,
                                   struct NgSeriesControl ctl,
                                   struct NgDistribution **out);

// Custom Fock-diagonal state from `len` probabilities.
//
// # Safety
// `probs` must point to `len` readable doubles; `out` must be valid for
// writes.
enum NgStatus ng_distribution_custom(const double *probs, size_t len, struct NgDistribution **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `d` must be null or a handle not yet freed.
void ng_distribution_free(struct NgDistribution *d);

// Number of retained levels, or 0 for a null handle.
//
// # Safety
// `d` must be null or a live handle.
size_t ng_distribution_len(const struct NgDistribution *d);

// Certified bound on the truncated probability, or NaN for a null handle.
//
// # Safety
// `d` must be null or a live handle.
double ng_distribution_tail_mass(const struct NgDistribution *d);

// Copies up to `cap` probabilities into `buf` and stores the full length
// in `len_out`.
//
// # Safety
// `d` must be a live handle, `buf` valid for `cap` writes (or null when
// `cap` is 0) and `len_out` valid for writes.
enum NgStatus ng_distribution_copy_probs(const struct NgDistribution *d,
                                         double *buf,
                                         size_t cap,
                                         size_t *len_out);

// Mean photon number of the distribution.
//
// # Safety
// `d` must be a live handle and `out` valid for writes.
enum NgStatus ng_distribution_mean_occupancy(const struct NgDistribution *d, double *out);

// The three degrees computed from the distribution's series against its
// thermal reference.
//
// # Safety
// `d` must be a live handle and `out` valid for writes.
enum NgStatus ng_distribution_measures(const struct NgDistribution *d, struct NgMeasureTriple *out);

// Degrees of a thermal state (all zero).
//
// # Safety
// `out` must be valid for writes.
enum NgStatus ng_measure_thermal(double nbar,
                                 struct NgSeriesControl ctl,
                                 struct NgMeasureTriple *out);

// Degrees of the number state `|m⟩` from closed forms.
//
// # Safety
// `out` must be valid for writes.
enum NgStatus ng_measure_fock(uint32_t m, struct NgMeasureTriple *out);

// Degrees of the `m`-photon-added thermal state.
//
// # Safety
// `out` must be valid for writes.
enum NgStatus ng_measure_pats(uint32_t m,
                              double nbar,
                              struct NgSeriesControl ctl,
                              struct NgMeasureTriple *out);

// Degrees of a pure state given by `len` Fock amplitudes `re[l] + i im[l]`.
// Only `delta_re` is available unless the state is a single number state.
//
// # Safety
// `re` and `im` must each point to `len` readable doubles; `out` must be
// valid for writes.
enum NgStatus ng_measure_pure(const double *re,
                              const double *im,
                              size_t len,
                              struct NgMeasureTriple *out);

// Closed-form Hilbert–Schmidt degree of the photon-added thermal state.
//
// # Safety
// `out` must be valid for writes.
enum NgStatus ng_delta_hs_pats_closed(uint32_t m, double nbar, double *out);

// Purity of the photon-added thermal state via the Legendre closed form.
//
// # Safety
// `out` must be valid for writes.
enum NgStatus ng_purity_closed(uint32_t m, double nbar, double *out);

// Relative-entropy degree of a pure state with covariance determinant `delta`.
//
// # Safety
// `out` must be valid for writes.
enum NgStatus ng_delta_re_pure(double delta, double *out);

double ng_delta_f_fock(uint32_t m);

double ng_delta_hs_fock(uint32_t m);

double ng_pochhammer(double a, uint32_t n);

// Gauss hypergeometric function `2F1(a, b; c; z)`.
//
// # Safety
// `out` must be valid for writes.
enum NgStatus ng_gauss_2f1(double a,
                           double b,
                           double c,
                           double z,
                           struct NgSeriesControl ctl,
                           double *out);

// Legendre polynomial `P_m(z)` for `z >= 1`.
//
// # Safety
// `out` must be valid for writes.
enum NgStatus ng_legendre_p(uint32_t m, double z, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NONGAUSS_H */
