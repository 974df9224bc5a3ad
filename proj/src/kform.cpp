#include "kform.hpp"

#include <bit>

namespace mage {
namespace {

constexpr unsigned kFullMask = 0b1111;

int degree_of(unsigned mask) { return std::popcount(mask); }

// Sign of sorting the concatenation (a-basis, b-basis) into increasing
// order: (-1)^(number of transpositions).
int merge_sign(unsigned a, unsigned b) {
  int inversions = 0;
  for (int j = 0; j < 4; ++j) {
    if (!(b & (1u << j))) continue;
    for (int i = j + 1; i < 4; ++i)
      if (a & (1u << i)) ++inversions;
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace

KForm::KForm(int degree) : degree_(degree) {
  if (degree < 0 || degree > 4)
    throw PreconditionError("form degree must be between 0 and 4");
}

KForm KForm::basis(std::initializer_list<Var> vars) {
  KForm f(static_cast<int>(vars.size()));
  unsigned mask = 0;
  // count inversions against the sorted storage order
  int position = 0;
  int inversions = 0;
  std::array<int, 4> chosen{};
  for (Var v : vars) {
    int bit = static_cast<int>(v);
    if (mask & (1u << bit)) return f;  // repeated differential: zero form
    for (int k = 0; k < position; ++k)
      if (chosen[k] > bit) ++inversions;
    chosen[position++] = bit;
    mask |= 1u << bit;
  }
  f.add_term(mask, ScalarField::constant(inversions % 2 == 0 ? 1 : -1));
  return f;
}

void KForm::add_term(unsigned mask, const ScalarField& coeff) {
  if (degree_of(mask) != degree_)
    throw PreconditionError("term degree does not match form degree");
  if (coeff.is_zero()) return;
  auto it = terms_.find(mask);
  if (it == terms_.end())
    terms_.emplace(mask, coeff);
  else
    it->second = it->second + coeff;
}

ScalarField KForm::coeff(unsigned mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? ScalarField() : it->second;
}

KForm KForm::operator+(const KForm& other) const {
  if (degree_ != other.degree_)
    throw PreconditionError("cannot add forms of different degree");
  KForm out = *this;
  for (const auto& [mask, c] : other.terms_) out.add_term(mask, c);
  return out;
}

KForm KForm::scaled(const ScalarField& f) const {
  KForm out(degree_);
  for (const auto& [mask, c] : terms_) out.add_term(mask, c * f);
  return out;
}

KForm wedge(const KForm& a, const KForm& b) {
  if (a.degree() + b.degree() > 4)
    throw PreconditionError("wedge degree exceeds the chart dimension");
  KForm out(a.degree() + b.degree());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      int sign = merge_sign(ma, mb);
      ScalarField c = ca * cb;
      out.add_term(ma | mb, sign == 1 ? c : -c);
    }
  }
  return out;
}

KForm interior(Var v, const KForm& a) {
  if (a.degree() == 0)
    throw PreconditionError("interior product needs a form of degree >= 1");
  KForm out(a.degree() - 1);
  unsigned bit = 1u << static_cast<int>(v);
  for (const auto& [mask, c] : a.terms()) {
    if (!(mask & bit)) continue;
    int below = std::popcount(mask & (bit - 1));
    out.add_term(mask & ~bit, below % 2 == 0 ? c : -c);
  }
  return out;
}

KForm canonical_symplectic() {
  KForm omega(2);
  omega.add_term(0b0101, ScalarField::constant(1));  // dx^dp
  omega.add_term(0b1010, ScalarField::constant(1));  // dy^dq
  return omega;
}

KForm alpha_form(const MAStructure& ma) {
  KForm alpha(2);
  alpha.add_term(0b0110, -ma.A);    // A dp^dy = -A dy^dp
  alpha.add_term(0b0101, ma.B);     // B dx^dp
  alpha.add_term(0b1010, -ma.B);    // -B dy^dq
  alpha.add_term(0b1001, ma.C);     // C dx^dq
  alpha.add_term(0b1100, ma.D);     // D dp^dq
  alpha.add_term(0b0011, ma.E);     // E dx^dy
  return alpha;
}

double effectiveness_residual(const MAStructure& ma, const Point4& pt) {
  KForm top = wedge(canonical_symplectic(), alpha_form(ma));
  return top.coeff(kFullMask).eval(pt);
}

double pfaffian_intrinsic(const MAStructure& ma, const Point4& pt) {
  KForm alpha = alpha_form(ma);
  KForm omega = canonical_symplectic();
  double num = wedge(alpha, alpha).coeff(kFullMask).eval(pt);
  double den = wedge(omega, omega).coeff(kFullMask).eval(pt);
  return num / den;
}

double pfaffian_closed(const MAStructure& ma, const Point4& pt) {
  return ma.A.eval(pt) * ma.C.eval(pt) - ma.B.eval(pt) * ma.B.eval(pt) -
         ma.D.eval(pt) * ma.E.eval(pt);
}

Mat4 lr_metric_intrinsic(const MAStructure& ma, const Point4& pt) {
  KForm alpha = alpha_form(ma);
  KForm omega = canonical_symplectic();
  KForm vol = KForm::basis({Var::X, Var::Y});
  double den = wedge(omega, omega).coeff(kFullMask).eval(pt);

  std::array<KForm, 4> i_alpha{KForm(1), KForm(1), KForm(1), KForm(1)};
  std::array<KForm, 4> i_omega{KForm(1), KForm(1), KForm(1), KForm(1)};
  for (int i = 0; i < 4; ++i) {
    i_alpha[i] = interior(static_cast<Var>(i), alpha);
    i_omega[i] = interior(static_cast<Var>(i), omega);
  }

  Mat4 g{};
  ScalarField two = ScalarField::constant(2);
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      KForm sym = wedge(i_alpha[i], i_omega[j]) + wedge(i_alpha[j], i_omega[i]);
      KForm num = wedge(sym.scaled(two), vol);
      double value = num.coeff(kFullMask).eval(pt) / den;
      g[i][j] = value;
      g[j][i] = value;
    }
  }
  return g;
}

}  // namespace mage
