#include "pullback.hpp"

#include <cmath>
#include <limits>

namespace mage {
namespace {

void require_surface_function(const ScalarField& f) {
  if (f.depends_on(Var::P) || f.depends_on(Var::Q))
    throw PreconditionError(
        "surface function must depend on x and y only");
}

struct HessAt {
  double fxx, fxy, fyy;
};

HessAt hessian_at(const ScalarField& f, const Point2& pt) {
  Point4 base{pt.x, pt.y, 0, 0};
  HessAt h;
  h.fxx = f.diff(Var::X).diff(Var::X).eval(base);
  h.fxy = f.diff(Var::X).diff(Var::Y).eval(base);
  h.fyy = f.diff(Var::Y).diff(Var::Y).eval(base);
  return h;
}

struct CoeffsAt {
  double a, b, c, d, e;
};

CoeffsAt coeffs_at_lift(const MAStructure& ma, const ScalarField& f,
                        const Point2& pt) {
  Point4 lifted = lift(f, pt);
  return {ma.A.eval(lifted), ma.B.eval(lifted), ma.C.eval(lifted),
          ma.D.eval(lifted), ma.E.eval(lifted)};
}

// Symbolic Hessian metric of f with its inverse entries as rational fields.
struct HessianMetricFields {
  FieldMat2 g;
  ScalarField det;
};

HessianMetricFields hessian_fields(const ScalarField& f) {
  HessianMetricFields h;
  h.g[0][0] = f.diff(Var::X).diff(Var::X);
  h.g[0][1] = h.g[1][0] = f.diff(Var::X).diff(Var::Y);
  h.g[1][1] = f.diff(Var::Y).diff(Var::Y);
  h.det = h.g[0][0] * h.g[1][1] - h.g[0][1] * h.g[0][1];
  return h;
}

void require_nonsingular_hessian(const HessAt& h) {
  double det = h.fxx * h.fyy - h.fxy * h.fxy;
  double norm2 = h.fxx * h.fxx + 2 * h.fxy * h.fxy + h.fyy * h.fyy;
  if (std::abs(det) < 1e-10 * norm2)
    throw SingularError("Hessian of f is singular at the point");
}

// a_i = Gamma^k_ki of Hess(f), kept symbolic. The Christoffel trace is
// built literally, Gamma^k_ki = 1/2 g^{kl} (d_k g_il + d_i g_kl - d_l g_ki),
// with g^{-1} = adj / det.
std::array<ScalarField, 2> koszul_first_fields(const ScalarField& f) {
  HessianMetricFields h = hessian_fields(f);
  FieldMat2 adj;
  adj[0][0] = h.g[1][1];
  adj[0][1] = adj[1][0] = -h.g[0][1];
  adj[1][1] = h.g[0][0];
  ScalarField half = ScalarField::constant(0.5);
  std::array<ScalarField, 2> a;
  for (int i = 0; i < 2; ++i) {
    Var vi = static_cast<Var>(i);
    ScalarField s;
    for (int k = 0; k < 2; ++k) {
      Var vk = static_cast<Var>(k);
      for (int l = 0; l < 2; ++l) {
        Var vl = static_cast<Var>(l);
        s = s + adj[k][l] * (h.g[i][l].diff(vk) + h.g[k][l].diff(vi) -
                             h.g[k][i].diff(vl));
      }
    }
    a[i] = half * (s / h.det);
  }
  return a;
}

}  // namespace

Point4 lift(const ScalarField& f, const Point2& pt) {
  require_surface_function(f);
  Point4 base{pt.x, pt.y, 0, 0};
  return Point4{pt.x, pt.y, f.diff(Var::X).eval(base),
                f.diff(Var::Y).eval(base)};
}

Mat2 pullback_metric(const MAStructure& ma, const ScalarField& f,
                     const Point2& pt) {
  CoeffsAt co = coeffs_at_lift(ma, f, pt);
  HessAt h = hessian_at(f, pt);
  Mat2 g{};
  g[0][0] = 2 * co.c + 2 * co.d * h.fxx;
  g[0][1] = g[1][0] = -2 * co.b + 2 * co.d * h.fxy;
  g[1][1] = 2 * co.a + 2 * co.d * h.fyy;
  return g;
}

double pullback_det(const MAStructure& ma, const ScalarField& f,
                    const Point2& pt) {
  CoeffsAt co = coeffs_at_lift(ma, f, pt);
  HessAt h = hessian_at(f, pt);
  return 4 * (co.a * co.c - co.b * co.b) +
         4 * co.d *
             (co.a * h.fxx + 2 * co.b * h.fxy + co.c * h.fyy +
              co.d * h.fxx * h.fyy - co.d * h.fxy * h.fxy);
}

double ma_residual(const MAStructure& ma, const ScalarField& f,
                   const Point2& pt) {
  CoeffsAt co = coeffs_at_lift(ma, f, pt);
  HessAt h = hessian_at(f, pt);
  return co.a * h.fxx + 2 * co.b * h.fxy + co.c * h.fyy +
         co.d * (h.fxx * h.fyy - h.fxy * h.fxy) + co.e;
}

EigenPair pullback_eigenvalues(const MAStructure& ma, const ScalarField& f,
                               const Point2& pt, double residual_tol) {
  double residual = ma_residual(ma, f, pt);
  if (std::abs(residual) > residual_tol)
    throw PreconditionError(
        "f does not solve the structure's equation at the point");
  CoeffsAt co = coeffs_at_lift(ma, f, pt);
  HessAt h = hessian_at(f, pt);
  double trace = 2 * co.c + 2 * co.a + 2 * co.d * h.fyy + 2 * co.d * h.fxx;
  double constant = -4 * (co.b * co.b - co.a * co.c) - 4 * co.d * co.e;
  EigenPair out;
  out.discriminant = trace * trace - 4 * constant;
  if (out.discriminant < 0) {
    out.lambda1 = out.lambda2 = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  double root = std::sqrt(out.discriminant);
  out.lambda1 = (trace - root) / 2;
  out.lambda2 = (trace + root) / 2;
  return out;
}

SqrtFormEigenvalues eigenvalues_sqrt_form(const MAStructure& ma,
                                          const ScalarField& f,
                                          const Point2& pt) {
  CoeffsAt co = coeffs_at_lift(ma, f, pt);
  HessAt h = hessian_at(f, pt);
  SqrtFormEigenvalues out;
  out.pfaffian = co.a * co.c - co.b * co.b - co.d * co.e;
  double mid = co.c + co.a + co.d * (h.fxx + h.fyy);
  if (out.pfaffian < 0) {
    out.complex = true;
    out.lambda1 = out.lambda2 = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  double root = 2 * std::sqrt(out.pfaffian);
  out.lambda1 = mid - root;
  out.lambda2 = mid + root;
  return out;
}

PfDetRelation pf_det_relation(const MAStructure& ma, const ScalarField& f,
                              const Point2& pt) {
  CoeffsAt co = coeffs_at_lift(ma, f, pt);
  PfDetRelation out;
  out.det_value = pullback_det(ma, f, pt);
  out.four_pf = 4 * (co.a * co.c - co.b * co.b - co.d * co.e);
  out.gap = out.four_pf - out.det_value;
  out.residual = ma_residual(ma, f, pt);
  return out;
}

std::array<double, 2> koszul_first(const ScalarField& f, const Point2& pt) {
  require_surface_function(f);
  require_nonsingular_hessian(hessian_at(f, pt));
  Point4 base{pt.x, pt.y, 0, 0};
  HessianMetricFields h = hessian_fields(f);
  FieldMat4 fields{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) fields[i][j] = h.g[i][j];
  MetricJet mj = metric_jet_from_fields(fields, 2, base);
  auto gamma = christoffel(mj);
  std::array<double, 2> a{};
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) a[i] += gamma[k][k][i];
  return a;
}

Mat2 koszul_second(const ScalarField& f, const Point2& pt) {
  require_surface_function(f);
  require_nonsingular_hessian(hessian_at(f, pt));
  Point4 base{pt.x, pt.y, 0, 0};
  auto a = koszul_first_fields(f);
  Mat2 b{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      b[i][j] = a[i].diff(static_cast<Var>(j)).eval(base);
  return b;
}

Mat2 kahler_ricci(const ScalarField& f, const Point2& pt) {
  Mat2 b = koszul_second(f, pt);
  Mat2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = -0.5 * b[i][j];
  return r;
}

MAStructure deformation_structure(const ScalarField& g, double eps) {
  if (g.depends_on(Var::P) || g.depends_on(Var::Q))
    throw PreconditionError(
        "deformation potential must depend on x and y only");
  ScalarField half_eps = ScalarField::constant(eps / 2);
  MAStructure ma;
  ma.A = half_eps * g.diff(Var::Y).diff(Var::Y);
  ma.B = -(half_eps * g.diff(Var::X).diff(Var::Y));
  ma.C = half_eps * g.diff(Var::X).diff(Var::X);
  ma.D = ScalarField::constant(0.5);
  ma.E = ScalarField();
  return ma;
}

}  // namespace mage
