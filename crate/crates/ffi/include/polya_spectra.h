#ifndef POLYA_SPECTRA_H
#define POLYA_SPECTRA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
enum PsStatus {
  PS_STATUS_OK = 0,
  PS_STATUS_NULL_POINTER = 1,
  PS_STATUS_INVALID_UTF8 = 2,
  PS_STATUS_DOMAIN = 3,
  PS_STATUS_VALIDATION = 4,
  PS_STATUS_RANGE = 5,
  PS_STATUS_PRECONDITION = 6,
  PS_STATUS_HYPOTHESIS = 7,
  PS_STATUS_CONFIG = 8,
  PS_STATUS_BC_MISMATCH = 9,
  PS_STATUS_MODE = 10,
  PS_STATUS_CASE = 11,
  PS_STATUS_NOTHING_TO_CHECK = 12,
  PS_STATUS_UNDEFINED_ESTIMATE = 13,
  PS_STATUS_OVERFLOW = 14,
  PS_STATUS_INTERNAL = 15,
  PS_STATUS_IO = 16,
  PS_STATUS_JSON = 17,
  PS_STATUS_CSV = 18,
  PS_STATUS_PANIC = 19,
};
typedef int32_t PsStatus;

/**
 * Opaque spectrum handle.
 */
typedef struct PsSpectrum PsSpectrum;

/**
 * Summary of a Polya verification run.
 */
typedef struct {
  /**
   * Comparisons requested and actually made; fewer when the spectrum is too short.
   */
  uint64_t requested;
  uint64_t checked;
  /**
   * 1 when every checked comparison holds.
   */
  int32_t holds;
  /**
   * 1 when the comparisons were made in integer arithmetic.
   */
  int32_t exact;
  /**
   * Smallest relative margin and the index where it occurs.
   */
  double worst_margin;
  uint64_t worst_index;
  uint64_t failures;
  /**
   * Index of the first failure, 0 if none.
   */
  uint64_t first_failure;
} PsVerifyResult;

/**
 * Message for the last failure on this thread, or NULL. Valid until the next failing call
 * on the same thread.
 */
const char *ps_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ps_version(void);

/**
 * Build the spectrum described by the JSON `spec` strictly below `cutoff`.
 */
int32_t ps_spectrum_new(const char *spec, double cutoff, PsSpectrum **out);

/**
 * Build the spectrum described by `spec` holding at least `need` eigenvalues.
 */
int32_t ps_spectrum_with_count(const char *spec, uint64_t need, PsSpectrum **out);

/**
 * Release a handle. NULL is ignored.
 */
void ps_spectrum_free(PsSpectrum *spectrum);

/**
 * Number of distinct eigenvalues in the handle.
 */
int32_t ps_spectrum_level_count(const PsSpectrum *spectrum, size_t *out);

/**
 * Number of eigenvalues counted with multiplicity.
 */
int32_t ps_spectrum_total(const PsSpectrum *spectrum, uint64_t *out);

/**
 * The cutoff below which the handle's spectrum is complete.
 */
int32_t ps_spectrum_cutoff(const PsSpectrum *spectrum, double *out);

/**
 * Value and multiplicity of the `index`-th distinct eigenvalue.
 */
int32_t ps_spectrum_level(const PsSpectrum *spectrum,
                          size_t index,
                          double *value,
                          uint64_t *multiplicity);

/**
 * Number of eigenvalues strictly below `lambda`.
 */
int32_t ps_count(const PsSpectrum *spectrum, double lambda, uint64_t *out);

/**
 * Riesz mean `sum (lambda - v)_+^gamma`.
 */
int32_t ps_riesz_mean(const PsSpectrum *spectrum, double gamma, double lambda, double *out);

/**
 * Polya's inequality for the first `k_max` eigenvalues: lower bounds for Dirichlet
 * spectra, upper bounds otherwise. With `exact` nonzero the comparison is done in integer
 * arithmetic, which fails with `PS_STATUS_MODE` if the spectrum does not allow it.
 */
int32_t ps_verify_polya(const PsSpectrum *spectrum,
                        uint64_t k_max,
                        int32_t exact,
                        PsVerifyResult *out);

/**
 * Weyl constant `C_d`.
 */
int32_t ps_weyl_constant(uint32_t d, double *out);

/**
 * Volume of the unit ball in `R^d`.
 */
int32_t ps_unit_ball_volume(uint32_t d, double *out);

/**
 * Riesz-mean constant `L_{gamma,d}`.
 */
int32_t ps_riesz_constant(double gamma, uint32_t d, double *out);

/**
 * First extremal constant `H1(d)` and the `mu` attaining it, `d >= 3`.
 */
int32_t ps_h1(uint32_t d, double *value, double *argmin_mu);

/**
 * Second extremal constant `H2(d)` and the `mu` attaining it, `d >= 3`.
 */
int32_t ps_h2(uint32_t d, double *value, double *argmin_mu);

/**
 * Thickness threshold for a JSON request such as
 * `{"case":"dirichlet_thin_d2","volume":100.43,"remainder":50}`.
 */
int32_t ps_threshold(const char *request, double *out);

#endif  /* POLYA_SPECTRA_H */
