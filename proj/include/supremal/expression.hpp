#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "supremal/core.hpp"

namespace supremal {

class ExprError : public std::runtime_error {
 public:
  ExprError(const std::string& what, size_t pos) : std::runtime_error(what), position(pos) {}
  size_t position;
};

/**
 * Closed-form scalar expression over a spatial point and a gradient vector.
 *
 * Grammar (recursive descent, no code injection):
 *   expr   := term (('+'|'-') term)*
 *   term   := factor (('*'|'/') factor)*
 *   factor := '-' factor | primary
 *   primary:= number | 'inf' | variable | fn '(' expr (',' expr)* ')' | '(' expr ')'
 *   fn     := abs | min | max | pow
 *   variable := x | x1 | x2 | xi | xi1 | xi2   (x == x1, xi == xi1)
 *
 * Immutable after construction; evaluation is reentrant.
 */
class Expr {
 public:
  enum class Kind { constant, var_x1, var_x2, var_xi1, var_xi2, neg, add, sub, mul, div, abs_fn, min_fn, max_fn, pow_fn };

  struct Context {
    Vec2 x{0.0, 0.0};
    Vec2 xi{0.0, 0.0};
    int dim = 1;
    bool allow_xi = true;  // field expressions may only use spatial variables
  };

  static std::shared_ptr<const Expr> parse(std::string_view text);

  static std::shared_ptr<const Expr> constant(double v);
  static std::shared_ptr<const Expr> variable(Kind k);
  static std::shared_ptr<const Expr> unary(Kind k, std::shared_ptr<const Expr> a);
  static std::shared_ptr<const Expr> binary(Kind k, std::shared_ptr<const Expr> a, std::shared_ptr<const Expr> b);
  /// |xi| as an expression: abs(xi) in 1-D, pow(xi1*xi1+xi2*xi2, 1/2) in 2-D.
  static std::shared_ptr<const Expr> gradient_norm(int dim);

  double eval(const Context& ctx) const;
  bool depends_on_x() const;
  bool depends_on_xi() const;
  std::string to_string() const;

  Kind kind;
  double value = 0.0;  // constants only
  std::shared_ptr<const Expr> a, b;

 private:
  Expr() = default;
};

using ExprPtr = std::shared_ptr<const Expr>;

}  // namespace supremal
