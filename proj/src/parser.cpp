#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>

#include "scalar_field.hpp"

namespace mage {
namespace {

// Grammar (documented in docs/grammar.md):
//   expr    = term { ("+"|"-") term }
//   term    = factor { ("*"|"/") factor }
//   factor  = "-" factor | power
//   power   = primary [ "^" factor ]        (right associative)
//   primary = number | variable | function "(" expr ")" | "(" expr ")"
// The right operand of "^" must fold to a numeric constant.
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ScalarField run() {
    ScalarField f = expr();
    skip_ws();
    if (pos_ != text_.size())
      fail("unexpected trailing input");
    return f;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " at position " + std::to_string(pos_), pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace((unsigned char)text_[pos_]))
      ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::optional<char> peek() {
    skip_ws();
    if (pos_ >= text_.size()) return std::nullopt;
    return text_[pos_];
  }

  ScalarField expr() {
    ScalarField acc = term();
    for (;;) {
      if (consume('+'))
        acc = acc + term();
      else if (consume('-'))
        acc = acc - term();
      else
        return acc;
    }
  }

  ScalarField term() {
    ScalarField acc = factor();
    for (;;) {
      if (consume('*'))
        acc = acc * factor();
      else if (consume('/'))
        acc = acc / factor();
      else
        return acc;
    }
  }

  ScalarField factor() {
    if (consume('-')) return -factor();
    return power();
  }

  ScalarField power() {
    ScalarField base = primary();
    if (!consume('^')) return base;
    std::size_t expo_pos = pos_;
    ScalarField e = factor();
    if (!e.is_constant()) {
      pos_ = expo_pos;
      fail("exponent must be a numeric constant");
    }
    double v = e.eval({});
    double nearest = std::nearbyint(v);
    if (v == nearest && std::abs(v) <= 1e9)
      return ScalarField::ipow(base, static_cast<int>(nearest));
    return ScalarField::rpow(base, v);
  }

  ScalarField primary() {
    auto c = peek();
    if (!c) fail("unexpected end of input");
    if (*c == '(') {
      consume('(');
      ScalarField inner = expr();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit((unsigned char)*c) || *c == '.') return number();
    if (std::isalpha((unsigned char)*c)) return identifier();
    fail(std::string("unexpected character '") + *c + "'");
  }

  ScalarField number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit((unsigned char)text_[pos_]) || text_[pos_] == '.'))
      ++pos_;
    // exponent part of a literal, e.g. 1.5e-3
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_ + 1;
      if (mark < text_.size() && (text_[mark] == '+' || text_[mark] == '-'))
        ++mark;
      if (mark < text_.size() && std::isdigit((unsigned char)text_[mark])) {
        pos_ = mark;
        while (pos_ < text_.size() && std::isdigit((unsigned char)text_[pos_]))
          ++pos_;
      }
    }
    double v = 0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return ScalarField::constant(v);
  }

  ScalarField identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha((unsigned char)text_[pos_]))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name == "x") return ScalarField::variable(Var::X);
    if (name == "y") return ScalarField::variable(Var::Y);
    if (name == "p") return ScalarField::variable(Var::P);
    if (name == "q") return ScalarField::variable(Var::Q);
    if (name == "exp" || name == "ln" || name == "sin" || name == "cos") {
      if (!consume('(')) fail("expected '(' after function name");
      ScalarField arg = expr();
      if (!consume(')')) fail("expected ')'");
      if (name == "exp") return ScalarField::exp(arg);
      if (name == "ln") return ScalarField::ln(arg);
      if (name == "sin") return ScalarField::sin(arg);
      return ScalarField::cos(arg);
    }
    pos_ = start;
    fail("unknown identifier '" + name + "'");
  }
};

}  // namespace

ScalarField ScalarField::parse(std::string_view text) {
  return Parser(text).run();
}

}  // namespace mage
