#ifndef HECKE_SHUFFLE_H
#define HECKE_SHUFFLE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * L-function evaluation route for `hs_lfunction`.
 */
typedef enum HsLVariant {
  HsLEuler = 0,
  HsLDirichlet = 1,
  HsLCompleted = 2,
} HsLVariant;

/**
 * Status codes returned by every FFI entry point.
 */
typedef enum HsStatus {
  HsOk = 0,
  /**
   * A precondition or argument-domain violation (bad flag, wrong length,
   * parameter outside the operation's window).
   */
  HsErrInvalidArgument = 1,
  /**
   * The requested field discriminant is not whitelisted.
   */
  HsErrNotWhitelisted = 2,
  /**
   * A truncated evaluation could not meet its tolerance.
   */
  HsErrNotConverged = 3,
  /**
   * Evaluation too close to a pole.
   */
  HsErrPole = 4,
  /**
   * Analytic continuation is not available at the requested point.
   */
  HsErrContinuation = 5,
  /**
   * Cache I/O failure.
   */
  HsErrIo = 6,
  /**
   * A required pointer was NULL.
   */
  HsErrNullPointer = 7,
  /**
   * An internal panic was caught at the boundary.
   */
  HsErrPanic = 8,
} HsStatus;

/**
 * Opaque evaluation context: field data, prime tables, and the
 * truncation policy used by every evaluation made through it.
 */
typedef struct HsContext HsContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Description of the most recent error on this thread (empty if none).
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *hs_last_error_message(void);

/**
 * Create a context for the field selected by `d` (0 = rationals,
 * otherwise a whitelisted squarefree quadratic discriminant parameter),
 * with Euler products and ideal sums truncated at `norm_bound` and the
 * given tail tolerance. `cache_dir` may be NULL; if set, prime tables are
 * cached there. On success writes the handle to `out`.
 *
 * # Safety
 * `out` must be a valid pointer; `cache_dir`, when non-NULL, must point
 * to a NUL-terminated string.
 */
enum HsStatus hs_context_new(int64_t d,
                             uint64_t norm_bound,
                             double tail_tolerance,
                             const char *cache_dir,
                             struct HsContext **out);

/**
 * Release a context created by `hs_context_new`. NULL is a no-op.
 *
 * # Safety
 * `handle` must be NULL or a pointer returned by `hs_context_new` that
 * has not already been freed.
 */
void hs_context_free(struct HsContext *handle);

/**
 * Unit-lattice rank of the context's field (0 or 1 for degree ≤ 2).
 *
 * # Safety
 * `handle` must be a live context handle.
 */
uint64_t hs_context_unit_rank(const struct HsContext *handle);

/**
 * Evaluate L_K(λ*, s) by the chosen route. `lambda` is `unit_rank` long.
 * Writes the value and a rigorous truncation-tail estimate.
 *
 * # Safety
 * `handle` must be live; array and output pointers must be valid.
 */
enum HsStatus hs_lfunction(const struct HsContext *handle,
                           const int64_t *lambda,
                           uintptr_t lambda_len,
                           double s_re,
                           double s_im,
                           enum HsLVariant variant,
                           double *out_re,
                           double *out_im,
                           double *out_tail);

/**
 * Evaluate the kernel Φ_K(λ*, s).
 *
 * # Safety
 * Same contract as `hs_lfunction`.
 */
enum HsStatus hs_phi(const struct HsContext *handle,
                     const int64_t *lambda,
                     uintptr_t lambda_len,
                     double s_re,
                     double s_im,
                     double *out_re,
                     double *out_im,
                     double *out_tail);

/**
 * Kernel Φ_{K,w⁻¹}(λ*, s) of the intertwiner M_w on the character
 * 𝓒(λ*, s). `w_images` has length `n`; `lambda` is `n × unit_rank` flat;
 * `s` is `n` interleaved (re, im) pairs, i.e. `2n` doubles.
 *
 * # Safety
 * `handle` must be live; arrays must have the stated lengths.
 */
enum HsStatus hs_mw_kernel(const struct HsContext *handle,
                           const uintptr_t *w_images,
                           uintptr_t n,
                           const int64_t *lambda,
                           uintptr_t lambda_len,
                           const double *s_interleaved,
                           double *out_re,
                           double *out_im);

/**
 * Rank-2 assembled intertwiner constant at (λ*₁, s₁), (λ*₂, s₂);
 * `lambda` is `2 × unit_rank` flat, s passes as two (re, im) pairs.
 *
 * # Safety
 * Same contract as `hs_mw_kernel`.
 */
enum HsStatus hs_assemble_rank2(const struct HsContext *handle,
                                const int64_t *lambda,
                                uintptr_t lambda_len,
                                double s1_re,
                                double s1_im,
                                double s2_re,
                                double s2_im,
                                double *out_re,
                                double *out_im,
                                double *out_tail);

/**
 * Real-place local factor √π Γ(sdiff/2 + πiΔ)/Γ((sdiff+1)/2 + πiΔ).
 *
 * # Safety
 * Output pointers must be valid.
 */
enum HsStatus hs_local_real(double lamdiff,
                            double sdiff_re,
                            double sdiff_im,
                            double *out_re,
                            double *out_im);

/**
 * Complex-place local factor π/(sdiff + πiΔ).
 *
 * # Safety
 * Output pointers must be valid.
 */
enum HsStatus hs_local_complex(double lamdiff,
                               double sdiff_re,
                               double sdiff_im,
                               double *out_re,
                               double *out_im);

/**
 * p-adic local factor at the first prime ideal above `p` in the context's
 * prime table. `lambda` is `unit_rank` long.
 *
 * # Safety
 * `handle` must be live; arrays and output pointers must be valid.
 */
enum HsStatus hs_local_padic(const struct HsContext *handle,
                             uint64_t p,
                             const int64_t *lambda,
                             uintptr_t lambda_len,
                             double sdiff_re,
                             double sdiff_im,
                             double *out_re,
                             double *out_im);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HECKE_SHUFFLE_H */
