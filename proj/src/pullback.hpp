#pragma once

#include <array>

#include "curvature.hpp"
#include "ma_structure.hpp"

namespace mage {

// (x, y) -> (x, y, f_x, f_y): the section of T*M defined by df. f must
// depend on x and y only.
Point4 lift(const ScalarField& f, const Point2& pt);

// [[2C, -2B], [-2B, 2A]] + 2 D Hess(f), coefficients at the lifted point.
Mat2 pullback_metric(const MAStructure& ma, const ScalarField& f,
                     const Point2& pt);

// 4(AC - B^2) + 4D (A f_xx + 2B f_xy + C f_yy + D f_xx f_yy - D f_xy^2);
// always equal to det(pullback_metric).
double pullback_det(const MAStructure& ma, const ScalarField& f,
                    const Point2& pt);

// A f_xx + 2B f_xy + C f_yy + D (f_xx f_yy - f_xy^2) + E; zero exactly when
// f solves the structure's equation at pt.
double ma_residual(const MAStructure& ma, const ScalarField& f,
                   const Point2& pt);

struct EigenPair {
  double lambda1 = 0, lambda2 = 0;  // ascending; NaN when discriminant < 0
  double discriminant = 0;
};

// Roots of lambda^2 - lambda (2C + 2A + 2D f_yy + 2D f_xx)
//          - 4 (B^2 - AC) - 4 D E = 0.
// Requires |ma_residual| <= residual_tol; the roots then coincide with the
// eigenvalues of pullback_metric and their product is 4 Pf(alpha).
EigenPair pullback_eigenvalues(const MAStructure& ma, const ScalarField& f,
                               const Point2& pt, double residual_tol = 1e-9);

// The square-root eigenvalue form C + A + D(f_xx + f_yy) +- 2 sqrt(Pf);
// agrees with pullback_eigenvalues only when
// (C + A + D(f_xx + f_yy))^2 = 8 Pf. Kept as a diagnostic.
struct SqrtFormEigenvalues {
  double lambda1 = 0, lambda2 = 0;  // ascending; NaN when Pf < 0
  bool complex = false;
  double pfaffian = 0;
};
SqrtFormEigenvalues eigenvalues_sqrt_form(const MAStructure& ma,
                                          const ScalarField& f,
                                          const Point2& pt);

struct PfDetRelation {
  double det_value = 0;   // det of the pullback metric (printed formula)
  double four_pf = 0;     // 4 Pf(alpha) at the lifted point
  double gap = 0;         // four_pf - det_value = -4 D * ma_residual
  double residual = 0;    // ma_residual at pt
};
PfDetRelation pf_det_relation(const MAStructure& ma, const ScalarField& f,
                              const Point2& pt);

// First Koszul form a_i = Gamma^k_ki of the Hessian metric Hess(f); equals
// 1/2 d_i ln |det Hess f|. Throws SingularError near a singular Hessian
// (|det| < 1e-10 ||Hess||_F^2).
std::array<double, 2> koszul_first(const ScalarField& f, const Point2& pt);

// Second Koszul form b_ij = d_j a_i, differentiated symbolically.
Mat2 koszul_second(const ScalarField& f, const Point2& pt);

// Ricci tensor of the Kaehler lift: -1/2 b_ij.
Mat2 kahler_ricci(const ScalarField& f, const Point2& pt);

// Structure whose pullback block equals eps * Hess(g):
//   A = eps/2 g_yy, B = -eps/2 g_xy, C = eps/2 g_xx, D = 1/2, E = 0,
// so the pullback along any f is Hess(f + eps g).
MAStructure deformation_structure(const ScalarField& g, double eps);

}  // namespace mage
