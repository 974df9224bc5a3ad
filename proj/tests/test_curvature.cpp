#include <doctest.h>

#include <cmath>

#include "curvature.hpp"
#include "lr_metric.hpp"
#include "support.hpp"

using namespace mage;
using testsupport::Rng;

namespace {

MetricJet constant_jet(std::initializer_list<double> diag) {
  MetricJet mj;
  mj.dim = static_cast<int>(diag.size());
  int i = 0;
  for (double d : diag) {
    mj.g[i][i] = d;
    ++i;
  }
  return mj;
}

// g = diag(1, sin^2 x) on the (x, y) block: the round unit 2-sphere.
FieldMat4 sphere_fields() {
  FieldMat4 f{};
  f[0][0] = ScalarField::constant(1);
  f[1][1] = ScalarField::ipow(ScalarField::sin(ScalarField::variable(Var::X)), 2);
  return f;
}

// random 2D metric fields, nondegenerate at pt
FieldMat4 random_metric2(Rng& rng, const Point4& pt) {
  for (;;) {
    FieldMat4 f{};
    f[0][0] = testsupport::random_poly(rng, 1.0, true) +
              ScalarField::constant(rng.uniform(1.0, 2.5));
    f[1][1] = testsupport::random_poly(rng, 1.0, true) +
              ScalarField::constant(rng.uniform(1.0, 2.5));
    f[0][1] = f[1][0] = testsupport::random_poly(rng, 0.4, true);
    double det2 = f[0][0].eval(pt) * f[1][1].eval(pt) -
                  f[0][1].eval(pt) * f[0][1].eval(pt);
    if (std::abs(det2) > 0.3) return f;
  }
}

}  // namespace

TEST_CASE("inverse_metric inverts and rejects singular input") {
  MetricJet id = constant_jet({1, 1, 1, 1});
  Mat4 inv = inverse_metric(id);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(inv[i][j] == (i == j ? 1.0 : 0.0));

  MetricJet diag = constant_jet({2, -2});
  Mat4 inv2 = inverse_metric(diag);
  CHECK(inv2[0][0] == 0.5);
  CHECK(inv2[1][1] == -0.5);

  MAStructure d_one{{}, {}, {}, ScalarField::constant(1), {}};
  MetricJet lr = lr_metric_jet(d_one, {});
  Mat4 inv3 = inverse_metric(lr);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(inv3[i][j] == lr.g[i][j]);

  CHECK_THROWS_AS(inverse_metric(constant_jet({1, 0})), SingularError);
}

TEST_CASE("christoffel symbols of flat and warped metrics") {
  auto zero = christoffel(constant_jet({1, 1, 1, 1}));
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) CHECK(zero[k][i][j] == 0.0);

  // g = diag(x^2, 1): Gamma^x_xx = 1/x, everything else 0
  FieldMat4 warped{};
  warped[0][0] = ScalarField::parse("x^2");
  warped[1][1] = ScalarField::constant(1);
  MetricJet mj = metric_jet_from_fields(warped, 2, {1, 0, 0, 0});
  auto gamma = christoffel(mj);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(gamma[k][i][j] ==
              ((k == 0 && i == 0 && j == 0) ? doctest::Approx(1.0)
                                            : doctest::Approx(0.0)));
}

TEST_CASE("unit 2-sphere is Einstein with lambda 1") {
  MetricJet mj = metric_jet_from_fields(sphere_fields(), 2,
                                        {3.14159265358979 / 4, 0, 0, 0});
  Mat4 r = ricci(mj);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(r[i][j] == doctest::Approx(mj.g[i][j]).epsilon(1e-10));
  CHECK(ricci_scalar(mj) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("hyperbolic half-plane model has scalar curvature -2") {
  // g = diag(1, e^{2x}): Gaussian curvature -1, Ricci = -g
  FieldMat4 fields{};
  fields[0][0] = ScalarField::constant(1);
  fields[1][1] = ScalarField::exp(ScalarField::parse("2*x"));
  MetricJet mj = metric_jet_from_fields(fields, 2, {0.3, 0.9, 0, 0});
  Mat4 r = ricci(mj);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(r[i][j] == doctest::Approx(-mj.g[i][j]).epsilon(1e-10));
  CHECK(ricci_scalar(mj) == doctest::Approx(-2.0).epsilon(1e-10));
}

TEST_CASE("flat metrics have zero curvature") {
  MetricJet flat = constant_jet({1, -2, 3, 0.5});
  Mat4 r = ricci(flat);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(r[i][j] == 0.0);
  CHECK(ricci_scalar(flat) == 0.0);
}

TEST_CASE("ricci stays symmetric on random genuine metrics") {
  Rng rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    Point4 pt{rng.uniform(-1, 1), rng.uniform(-1, 1), 0, 0};
    MetricJet mj = metric_jet_from_fields(random_metric2(rng, pt), 2, pt);
    Mat4 r = ricci(mj);
    CHECK(std::abs(r[0][1] - r[1][0]) <= 1e-9 * (1 + std::abs(r[0][1])));
  }
  for (int trial = 0; trial < 25; ++trial) {
    Point4 pt = testsupport::random_point(rng, -1, 1);
    MAStructure ma = testsupport::random_structure(rng, pt, 0.4);
    Mat4 r = ricci(lr_metric_jet(ma, pt));
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        CHECK(std::abs(r[i][j] - r[j][i]) <=
              1e-9 * (1 + std::abs(r[i][j])));
  }
}

TEST_CASE("symbolic and finite-difference metric jets agree through ricci") {
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    Point4 pt = testsupport::random_point(rng, -0.8, 0.8);
    MAStructure ma = testsupport::random_structure(rng, pt, 0.5);
    FieldMat4 fields = lr_metric_fields(ma);
    Mat4 exact = ricci(metric_jet_from_fields(fields, 4, pt));
    Mat4 approx = ricci(testsupport::fd_metric_jet(fields, 4, pt));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(testsupport::close(approx[i][j], exact[i][j], 1e-5, 1e-5));
  }
}

TEST_CASE("signature counts eigenvalue signs with a relative threshold") {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    Point4 pt = testsupport::random_point(rng, -2, 2);
    MAStructure ma = testsupport::random_structure(rng, pt, 0.2);
    Signature sig = signature(lr_metric_matrix(ma, pt), 4);
    CHECK(sig.positive == 2);
    CHECK(sig.negative == 2);
    CHECK(sig.zero == 0);
  }

  Mat4 eye{};
  eye[0][0] = eye[1][1] = 1;
  Signature s2 = signature(eye, 2);
  CHECK(s2.positive == 2);
  CHECK(s2.negative == 0);
  CHECK(s2.zero == 0);

  Signature sz = signature(Mat4{}, 3);
  CHECK(sz.zero == 3);
}

TEST_CASE("determinant of the metric matrix is D^4") {
  Rng rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    Point4 pt = testsupport::random_point(rng, -2, 2);
    MAStructure ma = testsupport::random_structure(rng, pt, 0.1);
    double d = ma.D.eval(pt);
    double expected = d * d * d * d;
    CHECK(testsupport::close(det(lr_metric_matrix(ma, pt), 4), expected, 0,
                             1e-12));
  }
}
