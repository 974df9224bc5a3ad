#include <doctest.h>

#include <cmath>

#include "kform.hpp"
#include "lr_metric.hpp"
#include "support.hpp"

using namespace mage;
using testsupport::Rng;

TEST_CASE("lr_metric_matrix lays out the coefficient blocks") {
  MAStructure d_one{{}, {}, {}, ScalarField::constant(1), {}};
  Mat4 g = lr_metric_matrix(d_one, {});
  CHECK(g[0][2] == 1.0);
  CHECK(g[2][0] == 1.0);
  CHECK(g[1][3] == 1.0);
  CHECK(g[3][1] == 1.0);
  CHECK(det(g, 4) == 1.0);

  MAStructure c_three{{}, {}, ScalarField::constant(3), {}, {}};
  CHECK(lr_metric_matrix(c_three, {})[0][0] == 6.0);

  // E never enters
  Rng rng(51);
  Point4 pt = testsupport::random_point(rng, -2, 2);
  MAStructure ma = testsupport::random_structure(rng, pt, 0.1);
  MAStructure other = ma;
  other.E = ScalarField::parse("x*y*p*q");
  Mat4 g1 = lr_metric_matrix(ma, pt);
  Mat4 g2 = lr_metric_matrix(other, pt);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(g1[i][j] == g2[i][j]);
}

TEST_CASE("lr_metric_jet differentiates the entries exactly") {
  MAStructure constant{ScalarField::constant(0.3), ScalarField::constant(-1),
                       ScalarField::constant(2), ScalarField::constant(1.5),
                       ScalarField::constant(9)};
  MetricJet mj = lr_metric_jet(constant, {1, 2, 3, 4});
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        CHECK(mj.dg[k][i][j] == 0.0);
        for (int l = 0; l < 4; ++l) CHECK(mj.ddg[k][l][i][j] == 0.0);
      }

  MAStructure linear{{}, {}, {}, ScalarField::parse("x"), {}};
  CHECK_THROWS_AS(lr_metric_jet(linear, {0, 1, 1, 1}), SingularError);
  MetricJet lj = lr_metric_jet(linear, {2, 0, 0, 0});
  CHECK(lj.dg[0][0][2] == 1.0);
  CHECK(lj.dg[0][1][3] == 1.0);
  CHECK(lj.dg[1][0][2] == 0.0);
}

TEST_CASE("closed-form scalar curvature for A=B=C=0") {
  MAStructure constant_d{{}, {}, {}, ScalarField::constant(4), {}};
  CHECK(scalar_curvature_closed(constant_d, {1, 1, 1, 1}) == 0.0);

  // R = 3 (xp + 2) * (-exp(-xp)) pattern: -6 at the origin, matching the
  // pipeline under the sphere-positive convention
  MAStructure exp_d{{}, {}, {}, ScalarField::parse("exp(x*p)"), {}};
  double closed = scalar_curvature_closed(exp_d, {});
  CHECK(closed == -6.0);
  CHECK(ricci_scalar(lr_metric_jet(exp_d, {})) ==
        doctest::Approx(closed).epsilon(1e-12));

  FamilyParams c{0, 1, 0, 1, 0, 0};
  MAStructure fam{{}, {}, {}, family_D(c), {}};
  CHECK(scalar_curvature_closed(fam, {1, 0, 1, 0}) ==
        doctest::Approx(-24.0).epsilon(1e-13));

  MAStructure bad{ScalarField::parse("x"), {}, {}, ScalarField::constant(1),
                  {}};
  CHECK_THROWS_AS(scalar_curvature_closed(bad, {}), PreconditionError);
  CHECK_THROWS_AS(scalar_curvature_closed(
                      MAStructure{{}, {}, {}, ScalarField::parse("x"), {}},
                      {0, 1, 1, 1}),
                  SingularError);
}

TEST_CASE("closed form equals the pipeline on random reduced structures") {
  Rng rng(52);
  int tested = 0;
  while (tested < 40) {
    Point4 pt = testsupport::random_point(rng, -1, 1);
    ScalarField d = testsupport::random_d_field(rng, pt, 0.3);
    MAStructure ma{{}, {}, {}, d, {}};
    double closed = scalar_curvature_closed(ma, pt);
    double pipeline = ricci_scalar(lr_metric_jet(ma, pt));
    CHECK(testsupport::close(pipeline, closed, 1e-10, 1e-9));
    ++tested;
  }
}

TEST_CASE("family D field") {
  CHECK(family_D({1, 0, 0, 0, 0, 0}).eval({5, 5, 5, 5}) == 1.0);
  CHECK(family_D({0, 1, 0, 0, 0, 0}).eval({2, 0, 0, 0}) == 0.25);
  CHECK(family_D({1, 1, 0, 0, 0, 0}).eval({1, 0, 0, 0}) == 0.25);
  CHECK_THROWS_AS(family_D({0, 0, 0, 0, 0, 0}), PreconditionError);
}

TEST_CASE("condition residual and family curvature") {
  CHECK(cond_residual({1, 0, 0, 0, 0, 0}) == 0.0);
  CHECK(cond_residual({0, 1, 0, 1, 0, 0}) == 1.0);
  CHECK(cond_residual({1, 1, 1, 1, -1, 2}) == -2.0);

  CHECK(family_scalar_curvature({1, 0, 0, 0, 0, 0}) == 0.0);
  CHECK(family_scalar_curvature({0, 1, 0, 1, 0, 0}) == -24.0);
  CHECK(family_scalar_curvature({1, 0, 0, 0, 0, 1}) == 24.0);

  // cross-check the +24 case against the numeric pipeline
  FamilyParams c{1, 0, 0, 0, 0, 1};
  MAStructure ma{{}, {}, {}, family_D(c), {}};
  for (const Point4& pt : sample_family_points(c, -2, 2, 99, 5))
    CHECK(ricci_scalar(lr_metric_jet(ma, pt)) ==
          doctest::Approx(24.0).epsilon(1e-8));
}

TEST_CASE("pde residuals single out the family") {
  auto zero = pde_residuals(ScalarField::constant(2), {1, -1, 2, 0.5});
  for (double r : zero) CHECK(r == 0.0);

  // D = x at x=1: first residual is 3 D_x^2 - 2 D D_xx = 3
  auto linear = pde_residuals(ScalarField::parse("x"), {1, 0, 0, 0});
  CHECK(linear[0] == 3.0);

  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    FamilyParams c{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                   rng.uniform(-1, 1), rng.uniform(-1, 1), 0};
    // admissible: c6 = (c2 c4 + c3 c5) / c1 with c1 kept away from zero
    if (std::abs(c.c1) < 0.3) c.c1 = 1.0;
    c.c6 = (c.c2 * c.c4 + c.c3 * c.c5) / c.c1;
    ScalarField d = family_D(c);
    for (const Point4& pt : sample_family_points(c, -2, 2, 1000 + trial, 5)) {
      auto r = pde_residuals_normalized(d, pt);
      for (double v : r) CHECK(std::abs(v) <= 1e-9);
    }
  }
}

TEST_CASE("ricci_flat_check agrees with the parameter condition") {
  ScalarField e = ScalarField::parse("x*y - q");

  FamilyParams constant{1, 0, 0, 0, 0, 0};
  auto pts = sample_family_points(constant, -2, 2, 7, 10);
  RicciFlatReport r1 = ricci_flat_check(constant, e, pts);
  CHECK(r1.max_normalized_ricci == 0.0);
  CHECK(r1.flat_by_curvature);
  CHECK(r1.consistent);

  FamilyParams flat{0, 1, 0, 0, 0, 0};
  auto pts2 = sample_family_points(flat, -2, 2, 8, 10);
  RicciFlatReport r2 = ricci_flat_check(flat, e, pts2);
  CHECK(r2.flat_by_curvature);
  CHECK(r2.consistent);

  FamilyParams curved{0, 1, 0, 1, 0, 0};
  auto pts3 = sample_family_points(curved, -2, 2, 9, 10);
  RicciFlatReport r3 = ricci_flat_check(curved, e, pts3);
  CHECK(!r3.flat_by_curvature);
  CHECK(r3.consistent);
  MAStructure ma{{}, {}, {}, family_D(curved), e};
  CHECK(ricci_scalar(lr_metric_jet(ma, pts3[0])) ==
        doctest::Approx(-24.0).epsilon(1e-8));

  Point4 singular{0, 1, 0, 1};  // x + p = 0
  CHECK(family_singular_at(curved, singular));
  std::array<Point4, 1> bad{singular};
  CHECK_THROWS_AS(ricci_flat_check(curved, e, bad), PreconditionError);
}

TEST_CASE("curvature outputs ignore E") {
  Rng rng(54);
  Point4 pt = testsupport::random_point(rng, -1, 1);
  MAStructure ma = testsupport::random_structure(rng, pt, 0.5);
  MAStructure other = ma;
  other.E = testsupport::random_poly(rng, 2);
  Mat4 r1 = ricci(lr_metric_jet(ma, pt));
  Mat4 r2 = ricci(lr_metric_jet(other, pt));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(r1[i][j] == r2[i][j]);
}

TEST_CASE("plucker map matches the printed assignment") {
  PluckerPoint p1 = plucker_from_params({1, 0, 0, 0, 0, 0});
  CHECK(p1.p14 == -1.0);
  CHECK(p1.p12 == 0.0);
  CHECK(p1.p13 == 0.0);
  CHECK(p1.p23 == 0.0);
  CHECK(p1.p24 == 0.0);
  CHECK(p1.p34 == 0.0);

  PluckerPoint p2 = plucker_from_params({0, 1, 0, 1, 0, 0});
  CHECK(p2.p12 == 1.0);
  CHECK(p2.p34 == 1.0);
  CHECK(quadric_residual(p2) == 1.0);

  CHECK_THROWS_AS(plucker_from_params({0, 0, 0, 0, 0, 0}), PreconditionError);

  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    FamilyParams c{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3),
                   rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    PluckerPoint p = plucker_from_params(c);
    // identical arithmetic on both sides: bitwise equality
    CHECK(quadric_residual(p) == cond_residual(c));
    FamilyParams back = params_from_plucker(p);
    CHECK(back.c1 == c.c1);
    CHECK(back.c2 == c.c2);
    CHECK(back.c3 == c.c3);
    CHECK(back.c4 == c.c4);
    CHECK(back.c5 == c.c5);
    CHECK(back.c6 == c.c6);

    double lambda = rng.uniform(0.1, 4);
    PluckerPoint scaled{lambda * p.p12, lambda * p.p13, lambda * p.p14,
                        lambda * p.p23, lambda * p.p24, lambda * p.p34};
    CHECK(testsupport::close(quadric_residual(scaled),
                             lambda * lambda * quadric_residual(p), 1e-13,
                             1e-12));
  }
}

TEST_CASE("family sampling: admissible flat, perturbed curved") {
  Rng rng(56);
  for (int trial = 0; trial < 10; ++trial) {
    FamilyParams c{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                   rng.uniform(-1, 1), rng.uniform(-1, 1), 0};
    if (std::abs(c.c1) < 0.3) c.c1 = -0.8;
    c.c6 = (c.c2 * c.c4 + c.c3 * c.c5) / c.c1;
    auto pts = sample_family_points(c, -2, 2, 200 + trial, 10);
    RicciFlatReport rep = ricci_flat_check(c, ScalarField(), pts);
    CHECK(rep.flat_by_curvature);
    CHECK(rep.consistent);

    // perturb away from the quadric
    FamilyParams bad = c;
    bad.c1 = c.c1 + (c.c6 >= 0 ? 1.0 : -1.0);
    if (std::abs(cond_residual(bad)) < 0.1) {
      bad = c;
      bad.c2 = c.c2 + 2;
      bad.c4 = c.c4 >= 0 ? c.c4 + 2 : c.c4 - 2;
    }
    if (std::abs(cond_residual(bad)) < 0.1) continue;
    auto pts2 = sample_family_points(bad, -2, 2, 300 + trial, 10);
    RicciFlatReport rep2 = ricci_flat_check(bad, ScalarField(), pts2);
    CHECK(rep2.max_normalized_ricci >= 1e-3);
    CHECK(rep2.consistent);
  }
}
