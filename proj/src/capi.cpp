#include "mage/mage.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <vector>

#include "kform.hpp"
#include "lr_metric.hpp"
#include "ma_structure.hpp"
#include "pullback.hpp"
#include "scalar_field.hpp"

struct mage_expr {
  mage::ScalarField field;
};

struct mage_structure {
  mage::MAStructure ma;
};

namespace {

thread_local std::string g_last_error = "no error";

mage_status set_error(mage_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

mage_status fail_invalid(const char* message) {
  return set_error(MAGE_ERROR_INVALID_ARGUMENT, message);
}

// Runs fn, translating core exceptions into status codes.
template <typename Fn>
mage_status guarded(Fn&& fn) {
  try {
    fn();
    return MAGE_OK;
  } catch (const mage::ParseError& e) {
    return set_error(MAGE_ERROR_PARSE, e.what());
  } catch (const mage::DomainError& e) {
    return set_error(MAGE_ERROR_DOMAIN, e.what());
  } catch (const mage::SingularError& e) {
    return set_error(MAGE_ERROR_SINGULAR, e.what());
  } catch (const mage::PreconditionError& e) {
    return set_error(MAGE_ERROR_PRECONDITION, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(MAGE_ERROR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(MAGE_ERROR_INTERNAL, e.what());
  }
}

mage::Point4 to_point4(const double point[4]) {
  return mage::Point4{point[0], point[1], point[2], point[3]};
}

mage::Point2 to_point2(const double point[2]) {
  return mage::Point2{point[0], point[1]};
}

mage::FamilyParams to_params(const double c[6]) {
  return mage::FamilyParams{c[0], c[1], c[2], c[3], c[4], c[5]};
}

void write_mat(const mage::Mat4& m, int n, double* out) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i * n + j] = m[i][j];
}

void write_mat2(const mage::Mat2& m, double* out) {
  out[0] = m[0][0];
  out[1] = m[0][1];
  out[2] = m[1][0];
  out[3] = m[1][1];
}

mage::ScalarField parse_or_zero(const char* text) {
  if (text == nullptr) return mage::ScalarField();
  return mage::ScalarField::parse(text);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* mage_version(void) { return "1.0.0"; }

const char* mage_status_name(mage_status status) {
  switch (status) {
    case MAGE_OK: return "ok";
    case MAGE_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case MAGE_ERROR_PARSE: return "parse error";
    case MAGE_ERROR_DOMAIN: return "domain error";
    case MAGE_ERROR_SINGULAR: return "singular";
    case MAGE_ERROR_PRECONDITION: return "precondition violated";
    default: return "internal error";
  }
}

const char* mage_last_error(void) { return g_last_error.c_str(); }

mage_status mage_expr_parse(const char* text, mage_expr** out) {
  if (!text || !out) return fail_invalid("text and out must be non-null");
  return guarded([&] { *out = new mage_expr{mage::ScalarField::parse(text)}; });
}

void mage_expr_free(mage_expr* expr) { delete expr; }

mage_status mage_expr_eval(const mage_expr* expr, const double point[4],
                           double* out) {
  if (!expr || !point || !out) return fail_invalid("null argument");
  return guarded([&] { *out = expr->field.eval(to_point4(point)); });
}

mage_status mage_expr_diff(const mage_expr* expr, int var, mage_expr** out) {
  if (!expr || !out) return fail_invalid("null argument");
  if (var < 0 || var > 3) return fail_invalid("variable index must be 0..3");
  return guarded([&] {
    *out = new mage_expr{expr->field.diff(static_cast<mage::Var>(var))};
  });
}

mage_status mage_expr_jet(const mage_expr* expr, const double point[4],
                          double* value, double grad[4], double hess[16]) {
  if (!expr || !point) return fail_invalid("null argument");
  return guarded([&] {
    mage::Jet2 jet = expr->field.jet(to_point4(point));
    if (value) *value = jet.value;
    if (grad)
      for (int i = 0; i < 4; ++i) grad[i] = jet.grad[i];
    if (hess)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) hess[i * 4 + j] = jet.hess[i][j];
  });
}

mage_status mage_expr_fd_jet(const mage_expr* expr, const double point[4],
                             double step, double* value, double grad[4],
                             double hess[16]) {
  if (!expr || !point) return fail_invalid("null argument");
  return guarded([&] {
    mage::Jet2 jet = mage::fd_jet(expr->field, to_point4(point), step);
    if (value) *value = jet.value;
    if (grad)
      for (int i = 0; i < 4; ++i) grad[i] = jet.grad[i];
    if (hess)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) hess[i * 4 + j] = jet.hess[i][j];
  });
}

mage_status mage_expr_to_string(const mage_expr* expr, char** out) {
  if (!expr || !out) return fail_invalid("null argument");
  return guarded([&] { *out = dup_string(expr->field.str()); });
}

void mage_string_free(char* s) { delete[] s; }

mage_status mage_structure_create(const char* a, const char* b, const char* c,
                                  const char* d, const char* e,
                                  mage_structure** out) {
  if (!out) return fail_invalid("out must be non-null");
  return guarded([&] {
    mage::MAStructure ma{parse_or_zero(a), parse_or_zero(b), parse_or_zero(c),
                         parse_or_zero(d), parse_or_zero(e)};
    *out = new mage_structure{std::move(ma)};
  });
}

mage_status mage_structure_from_family(const double c[6], const char* e,
                                       mage_structure** out) {
  if (!c || !out) return fail_invalid("null argument");
  return guarded([&] {
    mage::MAStructure ma{mage::ScalarField(), mage::ScalarField(),
                         mage::ScalarField(), mage::family_D(to_params(c)),
                         parse_or_zero(e)};
    *out = new mage_structure{std::move(ma)};
  });
}

mage_status mage_structure_deformation(const char* g_expr, double eps,
                                       mage_structure** out) {
  if (!g_expr || !out) return fail_invalid("null argument");
  return guarded([&] {
    *out = new mage_structure{
        mage::deformation_structure(mage::ScalarField::parse(g_expr), eps)};
  });
}

void mage_structure_free(mage_structure* ma) { delete ma; }

mage_status mage_structure_coefficient(const mage_structure* ma, int index,
                                       char** out) {
  if (!ma || !out) return fail_invalid("null argument");
  if (index < 0 || index > 4)
    return fail_invalid("coefficient index must be 0..4");
  return guarded([&] {
    const mage::ScalarField* fields[5] = {&ma->ma.A, &ma->ma.B, &ma->ma.C,
                                          &ma->ma.D, &ma->ma.E};
    *out = dup_string(fields[index]->str());
  });
}

mage_status mage_pfaffian(const mage_structure* ma, const double point[4],
                          double* out) {
  if (!ma || !point || !out) return fail_invalid("null argument");
  return guarded(
      [&] { *out = mage::pfaffian_closed(ma->ma, to_point4(point)); });
}

mage_status mage_pfaffian_intrinsic(const mage_structure* ma,
                                    const double point[4], double* out) {
  if (!ma || !point || !out) return fail_invalid("null argument");
  return guarded(
      [&] { *out = mage::pfaffian_intrinsic(ma->ma, to_point4(point)); });
}

mage_status mage_effectiveness_residual(const mage_structure* ma,
                                        const double point[4], double* out) {
  if (!ma || !point || !out) return fail_invalid("null argument");
  return guarded(
      [&] { *out = mage::effectiveness_residual(ma->ma, to_point4(point)); });
}

mage_status mage_lr_metric(const mage_structure* ma, const double point[4],
                           double g[16]) {
  if (!ma || !point || !g) return fail_invalid("null argument");
  return guarded([&] {
    write_mat(mage::lr_metric_matrix(ma->ma, to_point4(point)), 4, g);
  });
}

mage_status mage_lr_metric_intrinsic(const mage_structure* ma,
                                     const double point[4], double g[16]) {
  if (!ma || !point || !g) return fail_invalid("null argument");
  return guarded([&] {
    write_mat(mage::lr_metric_intrinsic(ma->ma, to_point4(point)), 4, g);
  });
}

mage_status mage_lr_curvature(const mage_structure* ma, const double point[4],
                              double ricci_out[16], double* scalar_out) {
  if (!ma || !point) return fail_invalid("null argument");
  return guarded([&] {
    mage::MetricJet mj = mage::lr_metric_jet(ma->ma, to_point4(point));
    if (ricci_out) write_mat(mage::ricci(mj), 4, ricci_out);
    if (scalar_out) *scalar_out = mage::ricci_scalar(mj);
  });
}

mage_status mage_lr_signature(const mage_structure* ma, const double point[4],
                              int* n_positive, int* n_negative, int* n_zero) {
  if (!ma || !point) return fail_invalid("null argument");
  return guarded([&] {
    mage::Mat4 g = mage::lr_metric_matrix(ma->ma, to_point4(point));
    mage::Signature sig = mage::signature(g, 4);
    if (n_positive) *n_positive = sig.positive;
    if (n_negative) *n_negative = sig.negative;
    if (n_zero) *n_zero = sig.zero;
  });
}

mage_status mage_lemma2_scalar(const mage_structure* ma,
                               const double point[4], double* closed_form,
                               double* pipeline) {
  if (!ma || !point) return fail_invalid("null argument");
  return guarded([&] {
    mage::Point4 pt = to_point4(point);
    double closed = mage::scalar_curvature_closed(ma->ma, pt);
    if (closed_form) *closed_form = closed;
    if (pipeline)
      *pipeline = mage::ricci_scalar(mage::lr_metric_jet(ma->ma, pt));
  });
}

mage_status mage_pde_residuals(const mage_expr* d_field, const double point[4],
                               int normalized, double out[10]) {
  if (!d_field || !point || !out) return fail_invalid("null argument");
  return guarded([&] {
    auto r = normalized
                 ? mage::pde_residuals_normalized(d_field->field,
                                                  to_point4(point))
                 : mage::pde_residuals(d_field->field, to_point4(point));
    for (int i = 0; i < 10; ++i) out[i] = r[i];
  });
}

mage_status mage_family_d_expr(const double c[6], mage_expr** out) {
  if (!c || !out) return fail_invalid("null argument");
  return guarded(
      [&] { *out = new mage_expr{mage::family_D(to_params(c))}; });
}

double mage_family_cond_residual(const double c[6]) {
  return mage::cond_residual(to_params(c));
}

double mage_family_scalar_curvature(const double c[6]) {
  return mage::family_scalar_curvature(to_params(c));
}

mage_status mage_family_sample_points(const double c[6], double lo, double hi,
                                      uint64_t seed, size_t count,
                                      double* points) {
  if (!c || !points) return fail_invalid("null argument");
  if (!(lo < hi)) return fail_invalid("box bounds must satisfy lo < hi");
  return guarded([&] {
    auto pts = mage::sample_family_points(to_params(c), lo, hi, seed, count);
    for (size_t i = 0; i < pts.size(); ++i)
      for (int j = 0; j < 4; ++j) points[i * 4 + j] = pts[i][j];
  });
}

mage_status mage_family_ricci_flat(const double c[6], const char* e,
                                   const double* points, size_t count,
                                   double* cond_residual, double* max_ricci,
                                   int* flat, int* consistent) {
  if (!c || (!points && count > 0)) return fail_invalid("null argument");
  return guarded([&] {
    std::vector<mage::Point4> pts(count);
    for (size_t i = 0; i < count; ++i)
      pts[i] = mage::Point4{points[i * 4], points[i * 4 + 1],
                            points[i * 4 + 2], points[i * 4 + 3]};
    mage::RicciFlatReport report =
        mage::ricci_flat_check(to_params(c), parse_or_zero(e), pts);
    if (cond_residual) *cond_residual = report.cond_residual;
    if (max_ricci) *max_ricci = report.max_normalized_ricci;
    if (flat) *flat = report.flat_by_curvature ? 1 : 0;
    if (consistent) *consistent = report.consistent ? 1 : 0;
  });
}

mage_status mage_family_plucker(const double c[6], double p[6]) {
  if (!c || !p) return fail_invalid("null argument");
  return guarded([&] {
    mage::PluckerPoint pp = mage::plucker_from_params(to_params(c));
    p[0] = pp.p12;
    p[1] = pp.p13;
    p[2] = pp.p14;
    p[3] = pp.p23;
    p[4] = pp.p24;
    p[5] = pp.p34;
  });
}

double mage_plucker_quadric_residual(const double p[6]) {
  mage::PluckerPoint pp{p[0], p[1], p[2], p[3], p[4], p[5]};
  return mage::quadric_residual(pp);
}

mage_status mage_lift(const mage_expr* f, const double point[2],
                      double out[4]) {
  if (!f || !point || !out) return fail_invalid("null argument");
  return guarded([&] {
    mage::Point4 lifted = mage::lift(f->field, to_point2(point));
    for (int i = 0; i < 4; ++i) out[i] = lifted[i];
  });
}

mage_status mage_pullback_metric(const mage_structure* ma, const mage_expr* f,
                                 const double point[2], double g[4]) {
  if (!ma || !f || !point || !g) return fail_invalid("null argument");
  return guarded([&] {
    write_mat2(mage::pullback_metric(ma->ma, f->field, to_point2(point)), g);
  });
}

mage_status mage_pullback_det(const mage_structure* ma, const mage_expr* f,
                              const double point[2], double* det_formula,
                              double* det_matrix) {
  if (!ma || !f || !point) return fail_invalid("null argument");
  return guarded([&] {
    mage::Point2 pt = to_point2(point);
    if (det_formula) *det_formula = mage::pullback_det(ma->ma, f->field, pt);
    if (det_matrix) {
      mage::Mat2 g = mage::pullback_metric(ma->ma, f->field, pt);
      *det_matrix = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    }
  });
}

mage_status mage_ma_residual(const mage_structure* ma, const mage_expr* f,
                             const double point[2], double* out) {
  if (!ma || !f || !point || !out) return fail_invalid("null argument");
  return guarded(
      [&] { *out = mage::ma_residual(ma->ma, f->field, to_point2(point)); });
}

mage_status mage_pullback_eigenvalues(const mage_structure* ma,
                                      const mage_expr* f,
                                      const double point[2],
                                      double residual_tol, double lambda[2],
                                      double* discriminant) {
  if (!ma || !f || !point || !lambda) return fail_invalid("null argument");
  return guarded([&] {
    mage::EigenPair pair = mage::pullback_eigenvalues(
        ma->ma, f->field, to_point2(point), residual_tol);
    lambda[0] = pair.lambda1;
    lambda[1] = pair.lambda2;
    if (discriminant) *discriminant = pair.discriminant;
  });
}

mage_status mage_eigenvalues_sqrt_form(const mage_structure* ma,
                                       const mage_expr* f,
                                       const double point[2], double lambda[2],
                                       int* complex_roots, double* pfaffian) {
  if (!ma || !f || !point || !lambda) return fail_invalid("null argument");
  return guarded([&] {
    mage::SqrtFormEigenvalues ev =
        mage::eigenvalues_sqrt_form(ma->ma, f->field, to_point2(point));
    lambda[0] = ev.lambda1;
    lambda[1] = ev.lambda2;
    if (complex_roots) *complex_roots = ev.complex ? 1 : 0;
    if (pfaffian) *pfaffian = ev.pfaffian;
  });
}

mage_status mage_pf_det_relation(const mage_structure* ma, const mage_expr* f,
                                 const double point[2], double* det_value,
                                 double* four_pf, double* gap,
                                 double* residual) {
  if (!ma || !f || !point) return fail_invalid("null argument");
  return guarded([&] {
    mage::PfDetRelation rel =
        mage::pf_det_relation(ma->ma, f->field, to_point2(point));
    if (det_value) *det_value = rel.det_value;
    if (four_pf) *four_pf = rel.four_pf;
    if (gap) *gap = rel.gap;
    if (residual) *residual = rel.residual;
  });
}

mage_status mage_koszul_first(const mage_expr* f, const double point[2],
                              double a[2]) {
  if (!f || !point || !a) return fail_invalid("null argument");
  return guarded([&] {
    auto vals = mage::koszul_first(f->field, to_point2(point));
    a[0] = vals[0];
    a[1] = vals[1];
  });
}

mage_status mage_koszul_second(const mage_expr* f, const double point[2],
                               double b[4]) {
  if (!f || !point || !b) return fail_invalid("null argument");
  return guarded([&] {
    write_mat2(mage::koszul_second(f->field, to_point2(point)), b);
  });
}

mage_status mage_kahler_ricci(const mage_expr* f, const double point[2],
                              double r[4]) {
  if (!f || !point || !r) return fail_invalid("null argument");
  return guarded([&] {
    write_mat2(mage::kahler_ricci(f->field, to_point2(point)), r);
  });
}

}  // extern "C"
