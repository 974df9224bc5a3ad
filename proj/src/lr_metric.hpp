#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "curvature.hpp"
#include "ma_structure.hpp"

namespace mage {

// Parameters of the Ricci-flat family
//   D = (c1 + c2 x + c3 y + c4 p + c5 q + c6 (x p + y q))^(-2).
struct FamilyParams {
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0, c6 = 0;
};

// Projective coordinates on the space of 2-planes in a 4-space.
struct PluckerPoint {
  double p12 = 0, p13 = 0, p14 = 0, p23 = 0, p24 = 0, p34 = 0;
};

// The metric matrix in Darboux coordinates,
//   [[2C, -2B, D, 0], [-2B, 2A, 0, D], [D, 0, 0, 0], [0, D, 0, 0]];
// independent of E, det = D^4, signature (2,2) whenever D != 0.
Mat4 lr_metric_matrix(const MAStructure& ma, const Point4& pt);

// The same entries kept symbolic, for derivative pipelines.
FieldMat4 lr_metric_fields(const MAStructure& ma);

// Metric with exact first and second derivatives; throws SingularError when
// D vanishes at pt (det = D^4 makes that the only degeneracy).
MetricJet lr_metric_jet(const MAStructure& ma, const Point4& pt);

// Closed-form Ricci scalar for structures with A = B = C = 0 (checked
// structurally):
//   R = 3/D^3 (D_x D_p - 2 D D_xp + D_y D_q - 2 D D_yq).
// The sign is fixed by the sphere-positive convention of ricci(), which
// gives the family its -24(c2c4+c3c5-c1c6) scalar curvature; the
// opposite-overall-sign variant of this formula that is sometimes quoted
// equals -ricci_scalar identically (see README on conventions).
double scalar_curvature_closed(const MAStructure& ma, const Point4& pt);

// D of the family; throws on all-zero parameters.
ScalarField family_D(const FamilyParams& c);

// c2 c4 + c3 c5 - c1 c6; zero exactly when the family member is Ricci flat.
double cond_residual(const FamilyParams& c);

// Scalar curvature of the family member: -24 * cond_residual, constant over
// the chart.
double family_scalar_curvature(const FamilyParams& c);

// The ten Ricci-flatness equations for A = B = C = 0, evaluated at pt in the
// order: four diagonal  3 D_i^2 - 2 D D_ii  (i = x, y, p, q),
//        four mixed     3 D_i D_j - 2 D D_ij  for (x,y), (x,q), (p,y), (p,q),
//        two coupled    -2 D D_yq + 3 D_x D_p - 4 D D_xp and
//                       -2 D D_xp + 3 D_y D_q - 4 D D_yq.
std::array<double, 10> pde_residuals(const ScalarField& d_field,
                                     const Point4& pt);

// Same residuals divided by D^4, making thresholds scale-free.
std::array<double, 10> pde_residuals_normalized(const ScalarField& d_field,
                                                const Point4& pt);

struct RicciFlatReport {
  double cond_residual = 0;
  // max over points of max_ij |R_ij| / ||g||_F
  double max_normalized_ricci = 0;
  bool flat_by_curvature = false;
  bool flat_by_condition = false;
  bool consistent = false;
};

// Builds the structure (0, 0, 0, family_D(c), E) and compares the sampled
// curvature verdict with the parameter condition. Points on the singular
// locus of D are rejected with PreconditionError.
RicciFlatReport ricci_flat_check(const FamilyParams& c, const ScalarField& E,
                                 std::span<const Point4> pts,
                                 double tol = 1e-7);

// True when pt is inside the singular tube
// |c1 + c2 x + ... + c6(xp+yq)| < 1e-8 (1 + ||c|| ||pt||).
bool family_singular_at(const FamilyParams& c, const Point4& pt);

// Deterministic uniform samples from [lo, hi]^4 avoiding the singular
// region of the family member (safety margin wider than the hard tube).
std::vector<Point4> sample_family_points(const FamilyParams& c, double lo,
                                         double hi, std::uint64_t seed,
                                         std::size_t count);

// p14 = -c1, p12 = c2, p13 = -c3, p34 = c4, p24 = c5, p23 = c6.
PluckerPoint plucker_from_params(const FamilyParams& c);
FamilyParams params_from_plucker(const PluckerPoint& p);

// p12 p34 - p13 p24 + p14 p23; vanishes exactly on the embedded quadric and
// coincides with cond_residual of the matching parameters.
double quadric_residual(const PluckerPoint& p);

}  // namespace mage
