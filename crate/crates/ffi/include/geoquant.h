#ifndef GEOQUANT_H
#define GEOQUANT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GqStatus {
  GQ_STATUS_OK = 0,
  GQ_STATUS_NULL_POINTER = 1,
  GQ_STATUS_INVALID_PARAMETER = 2,
  GQ_STATUS_UNSUPPORTED_MANIFOLD = 3,
  GQ_STATUS_DIMENSION_MISMATCH = 4,
  GQ_STATUS_FLOW_BLOWUP = 5,
  GQ_STATUS_POLARIZATION_NOT_PRESERVED = 6,
  GQ_STATUS_NON_HERMITIAN = 7,
  GQ_STATUS_QUADRATURE_NONCONVERGENCE = 8,
  GQ_STATUS_TAIL_MASS = 9,
  GQ_STATUS_SINGULAR_SUM = 10,
  GQ_STATUS_ILL_CONDITIONED_FIT = 11,
  GQ_STATUS_STENCIL_OUT_OF_DOMAIN = 12,
  GQ_STATUS_OPEN_LOOP = 13,
  GQ_STATUS_DEGENERATE_LATTICE = 14,
  GQ_STATUS_BUFFER_TOO_SMALL = 15,
  GQ_STATUS_PANIC = 16,
} GqStatus;

/*
 Opaque model manifold.
 */
typedef struct GqManifold GqManifold;

/*
 Opaque check report of one CLI suite.
 */
typedef struct GqReport GqReport;

typedef struct GqAsymptoticFit {
  double n_hat;
  int32_t n;
  double a0;
  double a1;
  double residual;
  /*
   `a0` divided by the Bargmann-plane slope.
   */
  double normalized_a0;
} GqAsymptoticFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread; empty after a success.
 Valid until the next call into the library from the same thread.
 */
const char *gq_last_error(void);

/*
 # Safety
 `out` must be a valid pointer.
 */
enum GqStatus gq_manifold_sphere(double radius, double hbar, struct GqManifold **out);

/*
 # Safety
 `out` must be a valid pointer.
 */
enum GqStatus gq_manifold_product_spheres(double r1,
                                          double r2,
                                          double hbar,
                                          struct GqManifold **out);

/*
 # Safety
 `out` must be a valid pointer.
 */
enum GqStatus gq_manifold_projective_line(double hbar, struct GqManifold **out);

/*
 Torus `ℂ/Λ` with `H(z, w) = scale·z·w̄`; `lattice` holds
 `re λ₁, im λ₁, re λ₂, im λ₂`.

 # Safety
 `lattice` must point to four doubles and `out` must be valid.
 */
enum GqStatus gq_manifold_torus(double scale,
                                const double *lattice,
                                double hbar,
                                struct GqManifold **out);

/*
 # Safety
 `m` must come from a `gq_manifold_*` constructor or be null.
 */
void gq_manifold_free(struct GqManifold *m);

/*
 Integrality of `[ω/2πħ]` on every cycle of `m`, with the ratio of each cycle.

 # Safety
 Pointers must be valid; `ratios` may be null to query the length.
 */
enum GqStatus gq_check_pc1(const struct GqManifold *m,
                           bool *is_integral,
                           double *ratios,
                           size_t cap,
                           size_t *len);

/*
 Interior spectrum of the oscillator on the Fock basis `z⁰..zⁿ`,
 prequantum or with the half-form correction.

 # Safety
 `len` must be valid; `out` may be null to query the length.
 */
enum GqStatus gq_oscillator_spectrum(size_t n,
                                     double hbar,
                                     bool corrected,
                                     double *out,
                                     size_t cap,
                                     size_t *len);

/*
 `max |[Q(q), Q(p)] − iħ·Id|` on the interior of the Hermite basis `h₀..hₙ`.

 # Safety
 `out` must be valid.
 */
enum GqStatus gq_dirac_defect_qp(size_t n, double hbar, double *out);

/*
 `∫ e^{ia|p|²/2} dⁿp` with its Maslov index `c`.

 # Safety
 Output pointers must be valid.
 */
enum GqStatus gq_fresnel_gaussian(size_t n, double a, double *re, double *im, int32_t *c);

/*
 Fit of the ℙ¹ Szegő diagonal over the ladder `ks[0..len]`.

 # Safety
 `ks` must point to `len` values and `out` must be valid.
 */
enum GqStatus gq_szego_fit_p1(const uint32_t *ks, size_t len, struct GqAsymptoticFit *out);

/*
 Levels `ħ(n + d)`, `n = 0..=n_max`.

 # Safety
 `len` must be valid; `out` may be null to query the length.
 */
enum GqStatus gq_bohr_levels(double shift,
                             size_t n_max,
                             double hbar,
                             double *out,
                             size_t cap,
                             size_t *len);

/*
 Runs a CLI command such as `"szego"` or `"pairing fourier"` at the given
 `hbar`. A report is produced even when checks fail.

 # Safety
 `command` must be a NUL-terminated string and `out` must be valid.
 */
enum GqStatus gq_run_suite(const char *command, double hbar, struct GqReport **out);

/*
 JSON text of the report, owned by the report.

 # Safety
 `r` must be a live report or null (which yields null).
 */
const char *gq_report_json(const struct GqReport *r);

/*
 True when no check in the report failed.

 # Safety
 `r` must be a live report or null (which yields false).
 */
bool gq_report_passed(const struct GqReport *r);

/*
 # Safety
 `r` must come from `gq_run_suite` or be null.
 */
void gq_report_free(struct GqReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GEOQUANT_H */
