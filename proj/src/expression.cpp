#include "supremal/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace supremal {
namespace {

struct Parser {
  std::string_view text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) { throw ExprError(msg + " at position " + std::to_string(pos), pos); }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      if (eat('+')) {
        lhs = Expr::binary(Expr::Kind::add, lhs, parse_term());
      } else if (eat('-')) {
        lhs = Expr::binary(Expr::Kind::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    for (;;) {
      if (eat('*')) {
        lhs = Expr::binary(Expr::Kind::mul, lhs, parse_factor());
      } else if (eat('/')) {
        lhs = Expr::binary(Expr::Kind::div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_factor() {
    if (eat('-')) return Expr::unary(Expr::Kind::neg, parse_factor());
    return parse_primary();
  }

  ExprPtr parse_primary() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of expression");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      ExprPtr e = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  ExprPtr parse_number() {
    const char* begin = text.data() + pos;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos += static_cast<size_t>(end - begin);
    return Expr::constant(v);
  }

  ExprPtr parse_ident() {
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    std::string_view name = text.substr(start, pos - start);
    if (name == "inf") return Expr::constant(kInf);
    if (name == "x" || name == "x1") return Expr::variable(Expr::Kind::var_x1);
    if (name == "x2") return Expr::variable(Expr::Kind::var_x2);
    if (name == "xi" || name == "xi1") return Expr::variable(Expr::Kind::var_xi1);
    if (name == "xi2") return Expr::variable(Expr::Kind::var_xi2);
    if (name == "abs" || name == "min" || name == "max" || name == "pow") {
      if (!eat('(')) fail("expected '(' after function name");
      ExprPtr first = parse_expr();
      if (name == "abs") {
        if (!eat(')')) fail("expected ')'");
        return Expr::unary(Expr::Kind::abs_fn, first);
      }
      Expr::Kind k = name == "min"   ? Expr::Kind::min_fn
                     : name == "max" ? Expr::Kind::max_fn
                                     : Expr::Kind::pow_fn;
      ExprPtr acc = first;
      int args = 1;
      while (eat(',')) {
        acc = Expr::binary(k, acc, parse_expr());
        ++args;
      }
      if (!eat(')')) fail("expected ')'");
      if (args < 2) fail(std::string(name) + " needs at least two arguments");
      if (k == Expr::Kind::pow_fn && args != 2) fail("pow takes exactly two arguments");
      return acc;
    }
    throw ExprError("unknown identifier '" + std::string(name) + "'", start);
  }
};

}  // namespace

ExprPtr Expr::parse(std::string_view text) {
  Parser p{text};
  ExprPtr e = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing characters");
  return e;
}

ExprPtr Expr::constant(double v) {
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind = Kind::constant;
  e->value = v;
  return e;
}

ExprPtr Expr::variable(Kind k) {
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind = k;
  return e;
}

ExprPtr Expr::unary(Kind k, ExprPtr a) {
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind = k;
  e->a = std::move(a);
  return e;
}

ExprPtr Expr::binary(Kind k, ExprPtr a, ExprPtr b) {
  auto e = std::shared_ptr<Expr>(new Expr());
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

ExprPtr Expr::gradient_norm(int dim) {
  if (dim == 1) return unary(Kind::abs_fn, variable(Kind::var_xi1));
  ExprPtr x1 = variable(Kind::var_xi1);
  ExprPtr x2 = variable(Kind::var_xi2);
  ExprPtr sq = binary(Kind::add, binary(Kind::mul, x1, x1), binary(Kind::mul, x2, x2));
  return binary(Kind::pow_fn, sq, constant(0.5));
}

double Expr::eval(const Context& ctx) const {
  switch (kind) {
    case Kind::constant: return value;
    case Kind::var_x1: return ctx.x[0];
    case Kind::var_x2:
      if (ctx.dim < 2) throw ExprError("x2 used in a 1-D context", 0);
      return ctx.x[1];
    case Kind::var_xi1:
      if (!ctx.allow_xi) throw ExprError("gradient variable used in a spatial-only expression", 0);
      return ctx.xi[0];
    case Kind::var_xi2:
      if (!ctx.allow_xi) throw ExprError("gradient variable used in a spatial-only expression", 0);
      if (ctx.dim < 2) throw ExprError("xi2 used in a 1-D context", 0);
      return ctx.xi[1];
    case Kind::neg: return -a->eval(ctx);
    case Kind::add: return sat_add(a->eval(ctx), b->eval(ctx));
    case Kind::sub: return a->eval(ctx) - b->eval(ctx);
    case Kind::mul: return a->eval(ctx) * b->eval(ctx);
    case Kind::div: return a->eval(ctx) / b->eval(ctx);
    case Kind::abs_fn: return std::fabs(a->eval(ctx));
    case Kind::min_fn: return std::min(a->eval(ctx), b->eval(ctx));
    case Kind::max_fn: return std::max(a->eval(ctx), b->eval(ctx));
    case Kind::pow_fn: return std::pow(a->eval(ctx), b->eval(ctx));
  }
  return 0.0;
}

bool Expr::depends_on_x() const {
  switch (kind) {
    case Kind::var_x1:
    case Kind::var_x2: return true;
    case Kind::constant:
    case Kind::var_xi1:
    case Kind::var_xi2: return false;
    default: return (a && a->depends_on_x()) || (b && b->depends_on_x());
  }
}

bool Expr::depends_on_xi() const {
  switch (kind) {
    case Kind::var_xi1:
    case Kind::var_xi2: return true;
    case Kind::constant:
    case Kind::var_x1:
    case Kind::var_x2: return false;
    default: return (a && a->depends_on_xi()) || (b && b->depends_on_xi());
  }
}

std::string Expr::to_string() const {
  switch (kind) {
    case Kind::constant: {
      if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%g", value);
      return buf;
    }
    case Kind::var_x1: return "x";
    case Kind::var_x2: return "x2";
    case Kind::var_xi1: return "xi";
    case Kind::var_xi2: return "xi2";
    case Kind::neg: return "(-" + a->to_string() + ")";
    case Kind::add: return "(" + a->to_string() + " + " + b->to_string() + ")";
    case Kind::sub: return "(" + a->to_string() + " - " + b->to_string() + ")";
    case Kind::mul: return "(" + a->to_string() + " * " + b->to_string() + ")";
    case Kind::div: return "(" + a->to_string() + " / " + b->to_string() + ")";
    case Kind::abs_fn: return "abs(" + a->to_string() + ")";
    case Kind::min_fn: return "min(" + a->to_string() + ", " + b->to_string() + ")";
    case Kind::max_fn: return "max(" + a->to_string() + ", " + b->to_string() + ")";
    case Kind::pow_fn: return "pow(" + a->to_string() + ", " + b->to_string() + ")";
  }
  return "";
}

}  // namespace supremal
