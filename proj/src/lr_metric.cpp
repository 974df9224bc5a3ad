#include "lr_metric.hpp"

#include <cmath>
#include <random>
#include <utility>

namespace mage {
namespace {

ScalarField family_polynomial(const FamilyParams& c) {
  ScalarField x = ScalarField::variable(Var::X);
  ScalarField y = ScalarField::variable(Var::Y);
  ScalarField p = ScalarField::variable(Var::P);
  ScalarField q = ScalarField::variable(Var::Q);
  return ScalarField::constant(c.c1) + ScalarField::constant(c.c2) * x +
         ScalarField::constant(c.c3) * y + ScalarField::constant(c.c4) * p +
         ScalarField::constant(c.c5) * q +
         ScalarField::constant(c.c6) * (x * p + y * q);
}

double family_polynomial_value(const FamilyParams& c, const Point4& pt) {
  return c.c1 + c.c2 * pt.x + c.c3 * pt.y + c.c4 * pt.p + c.c5 * pt.q +
         c.c6 * (pt.x * pt.p + pt.y * pt.q);
}

bool all_zero(const FamilyParams& c) {
  return c.c1 == 0 && c.c2 == 0 && c.c3 == 0 && c.c4 == 0 && c.c5 == 0 &&
         c.c6 == 0;
}

double norm6(const FamilyParams& c) {
  return std::sqrt(c.c1 * c.c1 + c.c2 * c.c2 + c.c3 * c.c3 + c.c4 * c.c4 +
                   c.c5 * c.c5 + c.c6 * c.c6);
}

double norm4(const Point4& pt) {
  return std::sqrt(pt.x * pt.x + pt.y * pt.y + pt.p * pt.p + pt.q * pt.q);
}

// mt19937_64 with explicit scaling so streams are identical across standard
// library implementations.
double uniform01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace

Mat4 lr_metric_matrix(const MAStructure& ma, const Point4& pt) {
  double a = ma.A.eval(pt), b = ma.B.eval(pt), c = ma.C.eval(pt),
         d = ma.D.eval(pt);
  Mat4 g{};
  g[0][0] = 2 * c;
  g[0][1] = g[1][0] = -2 * b;
  g[1][1] = 2 * a;
  g[0][2] = g[2][0] = d;
  g[1][3] = g[3][1] = d;
  return g;
}

FieldMat4 lr_metric_fields(const MAStructure& ma) {
  ScalarField two = ScalarField::constant(2);
  FieldMat4 g{};
  g[0][0] = two * ma.C;
  g[0][1] = g[1][0] = -(two * ma.B);
  g[1][1] = two * ma.A;
  g[0][2] = g[2][0] = ma.D;
  g[1][3] = g[3][1] = ma.D;
  return g;
}

MetricJet lr_metric_jet(const MAStructure& ma, const Point4& pt) {
  double d = ma.D.eval(pt);
  // det G = D^4; treat underflow of D^4 as the degeneracy threshold
  if (std::abs(d) < 1e-75)
    throw SingularError("degenerate metric: D vanishes at the point");
  return metric_jet_from_fields(lr_metric_fields(ma), 4, pt);
}

double scalar_curvature_closed(const MAStructure& ma, const Point4& pt) {
  if (!ma.A.is_zero() || !ma.B.is_zero() || !ma.C.is_zero())
    throw PreconditionError(
        "closed-form scalar curvature requires A = B = C = 0");
  double d = ma.D.eval(pt);
  if (d == 0) throw SingularError("D vanishes at the point");
  double dx = ma.D.diff(Var::X).eval(pt);
  double dy = ma.D.diff(Var::Y).eval(pt);
  double dp = ma.D.diff(Var::P).eval(pt);
  double dq = ma.D.diff(Var::Q).eval(pt);
  double dxp = ma.D.diff(Var::X).diff(Var::P).eval(pt);
  double dyq = ma.D.diff(Var::Y).diff(Var::Q).eval(pt);
  return 3.0 / (d * d * d) *
         (dx * dp - 2 * d * dxp + dy * dq - 2 * d * dyq);
}

ScalarField family_D(const FamilyParams& c) {
  if (all_zero(c))
    throw PreconditionError("family parameters must not all vanish");
  return ScalarField::ipow(family_polynomial(c), -2);
}

double cond_residual(const FamilyParams& c) {
  return (c.c2 * c.c4 + c.c3 * c.c5) - c.c1 * c.c6;
}

double family_scalar_curvature(const FamilyParams& c) {
  return -24.0 * cond_residual(c);
}

std::array<double, 10> pde_residuals(const ScalarField& d_field,
                                     const Point4& pt) {
  Jet2 jet = d_field.jet(pt);
  double d = jet.value;
  auto g = [&](Var v) { return jet.grad[static_cast<int>(v)]; };
  auto h = [&](Var a, Var b) {
    return jet.hess[static_cast<int>(a)][static_cast<int>(b)];
  };

  std::array<double, 10> r{};
  int k = 0;
  for (Var v : kVars) r[k++] = 3 * g(v) * g(v) - 2 * d * h(v, v);
  const std::array<std::pair<Var, Var>, 4> mixed{
      std::pair{Var::X, Var::Y}, std::pair{Var::X, Var::Q},
      std::pair{Var::P, Var::Y}, std::pair{Var::P, Var::Q}};
  for (auto [a, b] : mixed) r[k++] = 3 * g(a) * g(b) - 2 * d * h(a, b);
  r[k++] = -2 * d * h(Var::Y, Var::Q) + 3 * g(Var::X) * g(Var::P) -
           4 * d * h(Var::X, Var::P);
  r[k++] = -2 * d * h(Var::X, Var::P) + 3 * g(Var::Y) * g(Var::Q) -
           4 * d * h(Var::Y, Var::Q);
  return r;
}

std::array<double, 10> pde_residuals_normalized(const ScalarField& d_field,
                                                const Point4& pt) {
  auto r = pde_residuals(d_field, pt);
  double d = d_field.eval(pt);
  double scale = d * d * d * d;
  if (scale == 0) throw SingularError("D vanishes at the point");
  for (double& v : r) v /= scale;
  return r;
}

RicciFlatReport ricci_flat_check(const FamilyParams& c, const ScalarField& E,
                                 std::span<const Point4> pts, double tol) {
  ScalarField d = family_D(c);
  MAStructure ma{ScalarField(), ScalarField(), ScalarField(), d, E};

  RicciFlatReport report;
  report.cond_residual = cond_residual(c);
  double cn = norm6(c);
  report.flat_by_condition =
      std::abs(report.cond_residual) <= 1e-10 * std::max(1.0, cn * cn);

  for (const Point4& pt : pts) {
    if (family_singular_at(c, pt))
      throw PreconditionError("sample point lies on the singular locus");
    MetricJet mj = lr_metric_jet(ma, pt);
    Mat4 r = ricci(mj);
    double scale = frobenius_norm(mj.g, 4);
    double m = max_abs(r, 4) / scale;
    if (m > report.max_normalized_ricci) report.max_normalized_ricci = m;
  }
  report.flat_by_curvature = report.max_normalized_ricci <= tol;
  report.consistent = report.flat_by_curvature == report.flat_by_condition;
  return report;
}

bool family_singular_at(const FamilyParams& c, const Point4& pt) {
  double value = family_polynomial_value(c, pt);
  return std::abs(value) < 1e-8 * (1 + norm6(c) * norm4(pt));
}

std::vector<Point4> sample_family_points(const FamilyParams& c, double lo,
                                         double hi, std::uint64_t seed,
                                         std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<Point4> pts;
  pts.reserve(count);
  std::size_t guard = 0;
  while (pts.size() < count) {
    if (++guard > 1000 * (count + 1))
      throw PreconditionError(
          "could not sample points away from the singular locus");
    Point4 pt;
    for (int i = 0; i < 4; ++i)
      pt[i] = lo + (hi - lo) * uniform01(rng());
    // wider margin than the hard tube: curvature tolerances degrade as the
    // pole is approached
    double value = family_polynomial_value(c, pt);
    if (std::abs(value) < 1e-3 * (1 + norm6(c) * norm4(pt))) continue;
    pts.push_back(pt);
  }
  return pts;
}

PluckerPoint plucker_from_params(const FamilyParams& c) {
  if (all_zero(c))
    throw PreconditionError("family parameters must not all vanish");
  PluckerPoint p;
  p.p14 = -c.c1;
  p.p12 = c.c2;
  p.p13 = -c.c3;
  p.p34 = c.c4;
  p.p24 = c.c5;
  p.p23 = c.c6;
  return p;
}

FamilyParams params_from_plucker(const PluckerPoint& p) {
  FamilyParams c;
  c.c1 = -p.p14;
  c.c2 = p.p12;
  c.c3 = -p.p13;
  c.c4 = p.p34;
  c.c5 = p.p24;
  c.c6 = p.p23;
  return c;
}

double quadric_residual(const PluckerPoint& p) {
  return (p.p12 * p.p34 - p.p13 * p.p24) + p.p14 * p.p23;
}

}  // namespace mage
