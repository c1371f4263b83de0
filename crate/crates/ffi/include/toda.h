#ifndef TODA_H
#define TODA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TodaStatus {
  TODA_STATUS_OK = 0,
  TODA_STATUS_NULL_POINTER = 1,
  TODA_STATUS_INVALID_INPUT = 2,
  TODA_STATUS_NUMERICAL = 3,
  TODA_STATUS_BUFFER_TOO_SMALL = 4,
  TODA_STATUS_OUT_OF_RANGE = 5,
  TODA_STATUS_PANIC = 6,
} TodaStatus;

/**
 * Spectral curve with its period data.
 */
typedef struct TodaCurve TodaCurve;

/**
 * Lowest levels of the two-site chain at one `ħ`.
 */
typedef struct TodaSpectrum TodaSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next call into this library from the same thread.
 */
const char *toda_last_error_message(void);

void toda_clear_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *toda_version(void);

/**
 * Build the curve of the monic `t(λ)` with coefficients `t[0..len]`,
 * constant term first.
 *
 * # Safety
 * `t` points to `len` doubles; `out` is writable.
 */
enum TodaStatus toda_curve_new(const double *t, size_t len, struct TodaCurve **out);

/**
 * # Safety
 * `curve` is null or came from [`toda_curve_new`] and was not freed.
 */
void toda_curve_free(struct TodaCurve *curve);

/**
 * # Safety
 * `curve` is a live handle; `genus` is writable.
 */
enum TodaStatus toda_curve_genus(const struct TodaCurve *curve, size_t *genus);

/**
 * Branch points in ascending order.
 *
 * # Safety
 * `curve` is a live handle; `out` holds `cap` doubles; `len` is writable.
 */
enum TodaStatus toda_curve_branch_points(const struct TodaCurve *curve,
                                         double *out,
                                         size_t cap,
                                         size_t *len);

/**
 * Actions of the `g` cycles.
 *
 * # Safety
 * As for [`toda_curve_branch_points`].
 */
enum TodaStatus toda_curve_actions(const struct TodaCurve *curve,
                                   double *out,
                                   size_t cap,
                                   size_t *len);

/**
 * Coefficient matrix of the normalized differentials, `g × g` row major.
 *
 * # Safety
 * As for [`toda_curve_branch_points`].
 */
enum TodaStatus toda_curve_frequency_matrix(const struct TodaCurve *curve,
                                            double *out,
                                            size_t cap,
                                            size_t *len);

/**
 * Coefficients of `t(λ)` at the phase point `(p, q)` of `n` sites,
 * constant term first (`n + 1` values).
 *
 * # Safety
 * `p`, `q` hold `n` doubles; `out` holds `cap`; `len` is writable.
 */
enum TodaStatus toda_conserved_poly(const double *p,
                                    const double *q,
                                    size_t n,
                                    double *out,
                                    size_t cap,
                                    size_t *len);

/**
 * Advance `(p, q)` in place along flow `flow` for time `tau`.
 *
 * # Safety
 * `p`, `q` hold `n` readable and writable doubles.
 */
enum TodaStatus toda_evolve(double *p, double *q, size_t n, size_t flow, double tau, double tol);

/**
 * Bohr–Sommerfeld energy of the two-site level `nj`.
 *
 * # Safety
 * `energy` is writable.
 */
enum TodaStatus toda_bs_energy(double hbar, size_t nj, double *energy);

/**
 * Solve the lowest `levels` two-site states.
 *
 * # Safety
 * `out` is writable.
 */
enum TodaStatus toda_spectrum_solve(double hbar, size_t levels, struct TodaSpectrum **out);

/**
 * # Safety
 * `spectrum` is null or came from [`toda_spectrum_solve`] and was not freed.
 */
void toda_spectrum_free(struct TodaSpectrum *spectrum);

/**
 * # Safety
 * `spectrum` is a live handle; `len` is writable.
 */
enum TodaStatus toda_spectrum_len(const struct TodaSpectrum *spectrum, size_t *len);

/**
 * Energy and `t₂` of one level.
 *
 * # Safety
 * `spectrum` is a live handle; `energy` and `t2` are writable.
 */
enum TodaStatus toda_spectrum_level(const struct TodaSpectrum *spectrum,
                                    size_t level,
                                    double *energy,
                                    double *t2);

/**
 * `Q(γ)` of one level at complex `γ`.
 *
 * # Safety
 * `spectrum` is a live handle; `re_out`, `im_out` are writable.
 */
enum TodaStatus toda_spectrum_q(const struct TodaSpectrum *spectrum,
                                size_t level,
                                double re,
                                double im,
                                double *re_out,
                                double *im_out);

/**
 * Baxter equation residual of one level.
 *
 * # Safety
 * `spectrum` is a live handle; `residual` is writable.
 */
enum TodaStatus toda_spectrum_baxter_residual(const struct TodaSpectrum *spectrum,
                                              size_t level,
                                              double *residual);

/**
 * `⟨m|F|m′⟩ / √(⟨m|m⟩⟨m′|m′⟩)` for `F(γ) = Σ f[i] γ^i`.
 *
 * # Safety
 * `spectrum` is a live handle; `f` holds `len` doubles; outputs are writable.
 */
enum TodaStatus toda_spectrum_matrix_element(const struct TodaSpectrum *spectrum,
                                             size_t m,
                                             size_t mp,
                                             const double *f,
                                             size_t len,
                                             double *re_out,
                                             double *im_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TODA_H */
