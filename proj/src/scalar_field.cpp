#include "scalar_field.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace mage {

const char* var_name(Var v) {
  switch (v) {
    case Var::X: return "x";
    case Var::Y: return "y";
    case Var::P: return "p";
    default: return "q";
  }
}

namespace detail {

enum class Kind {
  Constant,
  Variable,
  Sum,
  Product,
  Quotient,
  IntPow,
  RealPow,
  Exp,
  Ln,
  Sin,
  Cos,
  Negate,
};

struct Node {
  Kind kind;
  double value = 0;  // Constant payload, or RealPow exponent
  int exponent = 0;  // IntPow exponent
  Var var = Var::X;
  NodePtr a, b;
};

namespace {

NodePtr make_constant(double c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = c;
  return n;
}

NodePtr make_variable(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->var = v;
  return n;
}

bool is_const(const NodePtr& n, double v) {
  return n->kind == Kind::Constant && n->value == v;
}

NodePtr make_unary(Kind k, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(Kind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

// Light simplification only: constant folding, 0+x, 0*x, 1*x, x/1, x^0, x^1.
NodePtr sum(NodePtr a, NodePtr b) {
  if (a->kind == Kind::Constant && b->kind == Kind::Constant)
    return make_constant(a->value + b->value);
  if (is_const(a, 0)) return b;
  if (is_const(b, 0)) return a;
  return make_binary(Kind::Sum, std::move(a), std::move(b));
}

NodePtr negate(NodePtr a) {
  if (a->kind == Kind::Constant) return make_constant(-a->value);
  if (a->kind == Kind::Negate) return a->a;
  return make_unary(Kind::Negate, std::move(a));
}

NodePtr product(NodePtr a, NodePtr b) {
  if (a->kind == Kind::Constant && b->kind == Kind::Constant)
    return make_constant(a->value * b->value);
  if (is_const(a, 0) || is_const(b, 0)) return make_constant(0);
  if (is_const(a, 1)) return b;
  if (is_const(b, 1)) return a;
  return make_binary(Kind::Product, std::move(a), std::move(b));
}

NodePtr quotient(NodePtr a, NodePtr b) {
  if (a->kind == Kind::Constant && b->kind == Kind::Constant &&
      b->value != 0)
    return make_constant(a->value / b->value);
  if (is_const(b, 1)) return a;
  return make_binary(Kind::Quotient, std::move(a), std::move(b));
}

double int_pow(double base, int n) {
  // binary exponentiation; exact for small integer cases
  bool invert = n < 0;
  unsigned long long e = invert ? -(long long)n : (long long)n;
  double acc = 1, f = base;
  while (e) {
    if (e & 1) acc *= f;
    f *= f;
    e >>= 1;
  }
  return invert ? 1.0 / acc : acc;
}

NodePtr intpow(NodePtr a, int n) {
  if (n == 0) return make_constant(1);
  if (n == 1) return a;
  if (a->kind == Kind::Constant && !(a->value == 0 && n < 0))
    return make_constant(int_pow(a->value, n));
  auto node = std::make_shared<Node>();
  node->kind = Kind::IntPow;
  node->exponent = n;
  node->a = std::move(a);
  return node;
}

NodePtr realpow(NodePtr a, double r) {
  if (r == 0) return make_constant(1);
  if (r == 1) return a;
  if (a->kind == Kind::Constant && a->value > 0)
    return make_constant(std::pow(a->value, r));
  auto node = std::make_shared<Node>();
  node->kind = Kind::RealPow;
  node->value = r;
  node->a = std::move(a);
  return node;
}

NodePtr fn(Kind k, NodePtr a) {
  if (a->kind == Kind::Constant) {
    double v = a->value;
    switch (k) {
      case Kind::Exp: return make_constant(std::exp(v));
      case Kind::Sin: return make_constant(std::sin(v));
      case Kind::Cos: return make_constant(std::cos(v));
      case Kind::Ln:
        if (v > 0) return make_constant(std::log(v));
        break;  // invalid constant: keep the node, error at eval
      default: break;
    }
  }
  return make_unary(k, std::move(a));
}

std::string print(const NodePtr& n);  // forward

[[noreturn]] void domain_error(const std::string& reason, const NodePtr& n) {
  throw DomainError(reason + " in " + print(n));
}

double eval_node(const NodePtr& n, const Point4& pt) {
  switch (n->kind) {
    case Kind::Constant: return n->value;
    case Kind::Variable: return pt[static_cast<int>(n->var)];
    case Kind::Sum: return eval_node(n->a, pt) + eval_node(n->b, pt);
    case Kind::Product: return eval_node(n->a, pt) * eval_node(n->b, pt);
    case Kind::Quotient: {
      double num = eval_node(n->a, pt);
      double den = eval_node(n->b, pt);
      if (den == 0) domain_error("division by zero", n);
      return num / den;
    }
    case Kind::IntPow: {
      double base = eval_node(n->a, pt);
      if (base == 0 && n->exponent < 0)
        domain_error("zero base with negative exponent", n);
      return int_pow(base, n->exponent);
    }
    case Kind::RealPow: {
      double base = eval_node(n->a, pt);
      if (base < 0) domain_error("fractional power of negative base", n);
      if (base == 0 && n->value < 0)
        domain_error("zero base with negative exponent", n);
      return std::pow(base, n->value);
    }
    case Kind::Exp: return std::exp(eval_node(n->a, pt));
    case Kind::Ln: {
      double v = eval_node(n->a, pt);
      if (v <= 0) domain_error("ln of nonpositive value", n);
      return std::log(v);
    }
    case Kind::Sin: return std::sin(eval_node(n->a, pt));
    case Kind::Cos: return std::cos(eval_node(n->a, pt));
    case Kind::Negate: return -eval_node(n->a, pt);
  }
  return 0;  // unreachable
}

NodePtr diff_node(const NodePtr& n, Var v) {
  switch (n->kind) {
    case Kind::Constant: return make_constant(0);
    case Kind::Variable: return make_constant(n->var == v ? 1 : 0);
    case Kind::Sum: return sum(diff_node(n->a, v), diff_node(n->b, v));
    case Kind::Product:
      return sum(product(diff_node(n->a, v), n->b),
                 product(n->a, diff_node(n->b, v)));
    case Kind::Quotient:
      // (a'b - ab') / b^2
      return quotient(sum(product(diff_node(n->a, v), n->b),
                          negate(product(n->a, diff_node(n->b, v)))),
                      intpow(n->b, 2));
    case Kind::IntPow:
      return product(
          product(make_constant(n->exponent), intpow(n->a, n->exponent - 1)),
          diff_node(n->a, v));
    case Kind::RealPow:
      return product(
          product(make_constant(n->value), realpow(n->a, n->value - 1)),
          diff_node(n->a, v));
    case Kind::Exp: return product(fn(Kind::Exp, n->a), diff_node(n->a, v));
    case Kind::Ln: return quotient(diff_node(n->a, v), n->a);
    case Kind::Sin: return product(fn(Kind::Cos, n->a), diff_node(n->a, v));
    case Kind::Cos:
      return product(negate(fn(Kind::Sin, n->a)), diff_node(n->a, v));
    case Kind::Negate: return negate(diff_node(n->a, v));
  }
  return make_constant(0);  // unreachable
}

bool depends_node(const NodePtr& n, Var v) {
  switch (n->kind) {
    case Kind::Constant: return false;
    case Kind::Variable: return n->var == v;
    default:
      if (n->a && depends_node(n->a, v)) return true;
      return n->b && depends_node(n->b, v);
  }
}

std::string number_str(double v) {
  std::array<char, 40> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string print(const NodePtr& n) {
  switch (n->kind) {
    case Kind::Constant: return number_str(n->value);
    case Kind::Variable: return var_name(n->var);
    case Kind::Sum: return "(" + print(n->a) + " + " + print(n->b) + ")";
    case Kind::Product: return "(" + print(n->a) + " * " + print(n->b) + ")";
    case Kind::Quotient: return "(" + print(n->a) + " / " + print(n->b) + ")";
    case Kind::IntPow:
      return "(" + print(n->a) + "^" + std::to_string(n->exponent) + ")";
    case Kind::RealPow:
      return "(" + print(n->a) + "^" + number_str(n->value) + ")";
    case Kind::Exp: return "exp(" + print(n->a) + ")";
    case Kind::Ln: return "ln(" + print(n->a) + ")";
    case Kind::Sin: return "sin(" + print(n->a) + ")";
    case Kind::Cos: return "cos(" + print(n->a) + ")";
    case Kind::Negate: return "(-" + print(n->a) + ")";
  }
  return "";
}

}  // namespace
}  // namespace detail

using detail::Kind;

ScalarField::ScalarField() : node_(detail::make_constant(0)) {}

ScalarField ScalarField::constant(double c) {
  return ScalarField(detail::make_constant(c));
}

ScalarField ScalarField::variable(Var v) {
  return ScalarField(detail::make_variable(v));
}

ScalarField ScalarField::exp(const ScalarField& f) {
  return ScalarField(detail::fn(Kind::Exp, f.node_));
}

ScalarField ScalarField::ln(const ScalarField& f) {
  return ScalarField(detail::fn(Kind::Ln, f.node_));
}

ScalarField ScalarField::sin(const ScalarField& f) {
  return ScalarField(detail::fn(Kind::Sin, f.node_));
}

ScalarField ScalarField::cos(const ScalarField& f) {
  return ScalarField(detail::fn(Kind::Cos, f.node_));
}

ScalarField ScalarField::ipow(const ScalarField& base, int n) {
  return ScalarField(detail::intpow(base.node_, n));
}

ScalarField ScalarField::rpow(const ScalarField& base, double r) {
  return ScalarField(detail::realpow(base.node_, r));
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return ScalarField(detail::sum(a.node_, b.node_));
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return ScalarField(detail::sum(a.node_, detail::negate(b.node_)));
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return ScalarField(detail::product(a.node_, b.node_));
}

ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  return ScalarField(detail::quotient(a.node_, b.node_));
}

ScalarField ScalarField::operator-() const {
  return ScalarField(detail::negate(node_));
}

double ScalarField::eval(const Point4& pt) const {
  return detail::eval_node(node_, pt);
}

ScalarField ScalarField::diff(Var v) const {
  return ScalarField(detail::diff_node(node_, v));
}

Jet2 ScalarField::jet(const Point4& pt) const {
  Jet2 out;
  out.value = eval(pt);
  std::array<ScalarField, 4> first{};
  for (int i = 0; i < 4; ++i) {
    first[i] = diff(static_cast<Var>(i));
    out.grad[i] = first[i].eval(pt);
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      double v = first[i].diff(static_cast<Var>(j)).eval(pt);
      out.hess[i][j] = v;
      out.hess[j][i] = v;
    }
  }
  return out;
}

bool ScalarField::is_zero() const {
  return node_->kind == Kind::Constant && node_->value == 0;
}

bool ScalarField::is_constant() const {
  return node_->kind == Kind::Constant;
}

bool ScalarField::depends_on(Var v) const {
  return detail::depends_node(node_, v);
}

std::string ScalarField::str() const { return detail::print(node_); }

Jet2 fd_jet(const ScalarField& f, const Point4& pt, double h) {
  if (!(h > 0)) throw PreconditionError("fd_jet requires a positive step");
  auto at = [&](int i, double di, int j, double dj) {
    Point4 s = pt;
    s[i] += di;
    if (j >= 0) s[j] += dj;
    return f.eval(s);
  };
  Jet2 out;
  out.value = f.eval(pt);
  for (int i = 0; i < 4; ++i) {
    double fp = at(i, h, -1, 0);
    double fm = at(i, -h, -1, 0);
    out.grad[i] = (fp - fm) / (2 * h);
    out.hess[i][i] = (fp - 2 * out.value + fm) / (h * h);
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      double v = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) +
                  at(i, -h, j, -h)) /
                 (4 * h * h);
      out.hess[i][j] = v;
      out.hess[j][i] = v;
    }
  }
  return out;
}

}  // namespace mage
