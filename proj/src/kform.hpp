#pragma once

#include <initializer_list>
#include <map>

#include "linalg.hpp"
#include "ma_structure.hpp"
#include "scalar_field.hpp"

namespace mage {

// Exterior k-form on the (x, y, p, q) chart with ScalarField coefficients.
// Terms are stored on the sorted coordinate basis: the key is a bitmask over
// {x=1, y=2, p=4, q=8} and the coefficient multiplies the wedge of the
// selected differentials in increasing variable order. Coefficients stay
// symbolic; evaluation happens last.
class KForm {
 public:
  explicit KForm(int degree);

  // Unit basis form, e.g. basis({Var::X, Var::P}) = dx^dp. Repeating a
  // variable yields the zero form of the matching degree.
  static KForm basis(std::initializer_list<Var> vars);

  int degree() const { return degree_; }
  const std::map<unsigned, ScalarField>& terms() const { return terms_; }

  // Adds coeff * (sorted wedge for mask); drops structural zeros.
  void add_term(unsigned mask, const ScalarField& coeff);

  ScalarField coeff(unsigned mask) const;  // zero field when absent

  KForm operator+(const KForm& other) const;
  KForm scaled(const ScalarField& f) const;

 private:
  int degree_;
  std::map<unsigned, ScalarField> terms_;
};

KForm wedge(const KForm& a, const KForm& b);

// Interior product with the coordinate vector field d/dv.
KForm interior(Var v, const KForm& a);

// Omega = dx^dp + dy^dq.
KForm canonical_symplectic();

// The 2-form alpha of the structure, on the sorted basis.
KForm alpha_form(const MAStructure& ma);

// Coefficient of the 4-form Omega^alpha at pt; identically zero for forms
// built by alpha_form (the two B terms cancel).
double effectiveness_residual(const MAStructure& ma, const Point4& pt);

// Pf(alpha) from the defining 4-form quotient alpha^alpha / Omega^Omega.
double pfaffian_intrinsic(const MAStructure& ma, const Point4& pt);

// Closed-form Pfaffian AC - B^2 - DE.
double pfaffian_closed(const MAStructure& ma, const Point4& pt);

// The metric g(X,Y) = 2 (i_X alpha ^ i_Y Omega + i_Y alpha ^ i_X Omega) ^ vol
// / (Omega ^ Omega) applied to coordinate vector fields, with vol = dx^dy.
// Independent of the coefficient E.
Mat4 lr_metric_intrinsic(const MAStructure& ma, const Point4& pt);

}  // namespace mage
