/* mage: Monge-Ampere geometry on 4D phase space.
 *
 * C interface to the mage core. All objects are opaque handles created and
 * destroyed through this API; every fallible call returns a mage_status and
 * writes its results through out-parameters. Handles are immutable after
 * creation and may be shared between threads; the last-error message is
 * thread local.
 *
 * Conventions:
 *   - 4D points are double[4] in the order x, y, p, q.
 *   - 2D base points are double[2] in the order x, y.
 *   - Matrices are row-major double[n*n].
 *   - Variable indices: 0 = x, 1 = y, 2 = p, 3 = q.
 *   - Family parameters are double[6] in the order c1..c6.
 *   - Pluecker coordinates are double[6] in the order
 *     p12, p13, p14, p23, p24, p34.
 */
#ifndef MAGE_H
#define MAGE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mage_status {
  MAGE_OK = 0,
  MAGE_ERROR_INVALID_ARGUMENT = 1,
  MAGE_ERROR_PARSE = 2,        /* malformed expression text */
  MAGE_ERROR_DOMAIN = 3,       /* evaluation outside an expression's domain */
  MAGE_ERROR_SINGULAR = 4,     /* degenerate metric or Hessian */
  MAGE_ERROR_PRECONDITION = 5, /* documented precondition violated */
  MAGE_ERROR_INTERNAL = 6
} mage_status;

typedef struct mage_expr mage_expr;           /* symbolic scalar field */
typedef struct mage_structure mage_structure; /* five coefficient fields */

const char* mage_version(void);
const char* mage_status_name(mage_status status);

/* Message for the most recent failure on the calling thread; valid until the
 * next failing call on the same thread. Never NULL. */
const char* mage_last_error(void);

/* ---- expressions ------------------------------------------------------- */

/* Grammar: infix + - * / ^ over x, y, p, q, decimal literals and exp, ln,
 * sin, cos; see docs/grammar.md. */
mage_status mage_expr_parse(const char* text, mage_expr** out);
void mage_expr_free(mage_expr* expr);

mage_status mage_expr_eval(const mage_expr* expr, const double point[4],
                           double* out);
mage_status mage_expr_diff(const mage_expr* expr, int var, mage_expr** out);

/* Value, gradient and Hessian from exact symbolic derivatives. */
mage_status mage_expr_jet(const mage_expr* expr, const double point[4],
                          double* value, double grad[4], double hess[16]);

/* Central-difference counterpart of mage_expr_jet (2nd-order stencils). */
mage_status mage_expr_fd_jet(const mage_expr* expr, const double point[4],
                             double step, double* value, double grad[4],
                             double hess[16]);

/* Canonical parenthesized form; free the result with mage_string_free. */
mage_status mage_expr_to_string(const mage_expr* expr, char** out);
void mage_string_free(char* s);

/* ---- Monge-Ampere structures ------------------------------------------ */

/* Parses the five coefficient expressions; NULL means the zero field. */
mage_status mage_structure_create(const char* a, const char* b, const char* c,
                                  const char* d, const char* e,
                                  mage_structure** out);

/* (0, 0, 0, family D, E); e NULL means E = 0. */
mage_status mage_structure_from_family(const double c[6], const char* e,
                                       mage_structure** out);

/* A = eps/2 g_yy, B = -eps/2 g_xy, C = eps/2 g_xx, D = 1/2, E = 0; the
 * pullback along any f is then Hess(f + eps g). */
mage_status mage_structure_deformation(const char* g_expr, double eps,
                                       mage_structure** out);

void mage_structure_free(mage_structure* ma);

/* Coefficient expressions in canonical form (order A, B, C, D, E). */
mage_status mage_structure_coefficient(const mage_structure* ma, int index,
                                       char** out);

/* ---- 4D metric and curvature ------------------------------------------ */

/* Closed-form Pfaffian AC - B^2 - DE. */
mage_status mage_pfaffian(const mage_structure* ma, const double point[4],
                          double* out);

/* Pfaffian from the defining 4-form quotient alpha^alpha / Omega^Omega. */
mage_status mage_pfaffian_intrinsic(const mage_structure* ma,
                                    const double point[4], double* out);

/* Coefficient of Omega ^ alpha; identically zero for these structures. */
mage_status mage_effectiveness_residual(const mage_structure* ma,
                                        const double point[4], double* out);

/* The metric matrix [[2C,-2B,D,0],[-2B,2A,0,D],[D,0,0,0],[0,D,0,0]]. */
mage_status mage_lr_metric(const mage_structure* ma, const double point[4],
                           double g[16]);

/* Same metric from the interior-product definition with vol = dx^dy. */
mage_status mage_lr_metric_intrinsic(const mage_structure* ma,
                                     const double point[4], double g[16]);

/* Ricci tensor and scalar of the metric; either out-pointer may be NULL. */
mage_status mage_lr_curvature(const mage_structure* ma, const double point[4],
                              double ricci_out[16], double* scalar_out);

mage_status mage_lr_signature(const mage_structure* ma, const double point[4],
                              int* n_positive, int* n_negative, int* n_zero);

/* Closed-form Ricci scalar for A = B = C = 0 and the full pipeline value. */
mage_status mage_lemma2_scalar(const mage_structure* ma,
                               const double point[4], double* closed_form,
                               double* pipeline);

/* The ten Ricci-flatness residuals of the A = B = C = 0 reduction, in the
 * documented order (4 diagonal, 4 mixed, 2 coupled); `normalized` scales by
 * D^4. */
mage_status mage_pde_residuals(const mage_expr* d_field, const double point[4],
                               int normalized, double out[10]);

/* ---- Ricci-flat family and Pluecker quadric ---------------------------- */

mage_status mage_family_d_expr(const double c[6], mage_expr** out);
double mage_family_cond_residual(const double c[6]);
double mage_family_scalar_curvature(const double c[6]);

/* Deterministic samples from [lo,hi]^4 avoiding the singular locus of the
 * family member; writes count*4 doubles. */
mage_status mage_family_sample_points(const double c[6], double lo, double hi,
                                      uint64_t seed, size_t count,
                                      double* points);

/* Curvature verdict vs parameter condition over the given points
 * (count*4 doubles). flat is 1 when the sampled normalized Ricci stays
 * within tolerance; consistent is 1 when that verdict matches the
 * condition c2c4 + c3c5 - c1c6 = 0. */
mage_status mage_family_ricci_flat(const double c[6], const char* e,
                                   const double* points, size_t count,
                                   double* cond_residual, double* max_ricci,
                                   int* flat, int* consistent);

mage_status mage_family_plucker(const double c[6], double p[6]);
double mage_plucker_quadric_residual(const double p[6]);

/* ---- pullback to the 2D base ------------------------------------------- */

/* (x, y) -> (x, y, f_x, f_y). f must depend on x, y only. */
mage_status mage_lift(const mage_expr* f, const double point[2],
                      double out[4]);

/* [[2C, -2B], [-2B, 2A]] + 2 D Hess(f) at the lifted point (row-major 2x2).*/
mage_status mage_pullback_metric(const mage_structure* ma, const mage_expr* f,
                                 const double point[2], double g[4]);

/* Printed determinant formula and det of the assembled matrix. */
mage_status mage_pullback_det(const mage_structure* ma, const mage_expr* f,
                              const double point[2], double* det_formula,
                              double* det_matrix);

/* Left-hand side of A f_xx + 2B f_xy + C f_yy + D det Hess f + E = 0. */
mage_status mage_ma_residual(const mage_structure* ma, const mage_expr* f,
                             const double point[2], double* out);

/* Roots of the pullback eigenvalue equation (ascending); requires
 * |ma_residual| <= residual_tol. Roots are NaN when the discriminant is
 * negative; the discriminant is always reported. */
mage_status mage_pullback_eigenvalues(const mage_structure* ma,
                                      const mage_expr* f,
                                      const double point[2],
                                      double residual_tol, double lambda[2],
                                      double* discriminant);

/* Diagnostic square-root form C + A + D(f_xx+f_yy) +- 2 sqrt(Pf); complex
 * is set when Pf < 0 (roots NaN). */
mage_status mage_eigenvalues_sqrt_form(const mage_structure* ma,
                                       const mage_expr* f,
                                       const double point[2], double lambda[2],
                                       int* complex_roots, double* pfaffian);

/* det of the pullback metric, 4 Pf(alpha) at the lifted point, their gap
 * (= -4 D ma_residual) and the residual itself. */
mage_status mage_pf_det_relation(const mage_structure* ma, const mage_expr* f,
                                 const double point[2], double* det_value,
                                 double* four_pf, double* gap,
                                 double* residual);

/* Koszul forms of the Hessian structure Hess(f) and the Ricci tensor of its
 * Kaehler lift (-1/2 b). */
mage_status mage_koszul_first(const mage_expr* f, const double point[2],
                              double a[2]);
mage_status mage_koszul_second(const mage_expr* f, const double point[2],
                               double b[4]);
mage_status mage_kahler_ricci(const mage_expr* f, const double point[2],
                              double r[4]);

#ifdef __cplusplus
}
#endif

#endif /* MAGE_H */
