#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mage {

// Chart variables on T*M in Darboux order.
enum class Var : int { X = 0, Y = 1, P = 2, Q = 3 };

constexpr std::array<Var, 4> kVars{Var::X, Var::Y, Var::P, Var::Q};

const char* var_name(Var v);

struct Point4 {
  double x = 0, y = 0, p = 0, q = 0;

  double operator[](int i) const {
    switch (i) {
      case 0: return x;
      case 1: return y;
      case 2: return p;
      default: return q;
    }
  }
  double& operator[](int i) {
    switch (i) {
      case 0: return x;
      case 1: return y;
      case 2: return p;
      default: return q;
    }
  }
};

struct Point2 {
  double x = 0, y = 0;
};

// Order-2 jet in the four chart variables; 2D callers use the x,y slots.
struct Jet2 {
  double value = 0;
  std::array<double, 4> grad{};
  std::array<std::array<double, 4>, 4> hess{};
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression text; position is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Evaluation outside the expression's domain (division by zero, ln of a
// nonpositive value, fractional power of a negative base).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Metric is numerically singular at the requested point.
class SingularError : public Error {
 public:
  using Error::Error;
};

// A documented operation precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

namespace detail {
struct Node;
using NodePtr = std::shared_ptr<const Node>;
}  // namespace detail

// Immutable symbolic scalar field over (x, y, p, q). Values are cheap to
// copy (shared tree) and safe to evaluate concurrently.
class ScalarField {
 public:
  ScalarField();  // the zero field

  static ScalarField constant(double c);
  static ScalarField variable(Var v);
  static ScalarField parse(std::string_view text);

  static ScalarField exp(const ScalarField& f);
  static ScalarField ln(const ScalarField& f);
  static ScalarField sin(const ScalarField& f);
  static ScalarField cos(const ScalarField& f);
  static ScalarField ipow(const ScalarField& base, int n);
  static ScalarField rpow(const ScalarField& base, double r);

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator/(const ScalarField& a, const ScalarField& b);
  ScalarField operator-() const;

  double eval(const Point4& pt) const;

  // Exact symbolic derivative; repeated application gives higher derivatives.
  ScalarField diff(Var v) const;

  // Value, gradient and (exactly symmetric) Hessian at a point.
  Jet2 jet(const Point4& pt) const;

  // Structurally the constant 0 / a constant.
  bool is_zero() const;
  bool is_constant() const;
  bool depends_on(Var v) const;

  // Canonical parenthesized infix form; parse(str()) is
  // evaluation-equivalent to the original field.
  std::string str() const;

 private:
  explicit ScalarField(detail::NodePtr n) : node_(std::move(n)) {}
  detail::NodePtr node_;
};

// Central-difference jet (2nd-order stencils); test oracle for jet().
Jet2 fd_jet(const ScalarField& f, const Point4& pt, double h = 1e-4);

}  // namespace mage
