#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "supremal/expression.hpp"

using namespace supremal;

namespace {
double ev(const std::string& text, double x, double xi) {
  Expr::Context ctx;
  ctx.x = {x, 0.0};
  ctx.xi = {xi, 0.0};
  ctx.dim = 1;
  return Expr::parse(text)->eval(ctx);
}
}  // namespace

TEST_CASE("arithmetic and precedence") {
  CHECK(ev("1 + 2 * 3", 0, 0) == 7.0);
  CHECK(ev("(1 + 2) * 3", 0, 0) == 9.0);
  CHECK(ev("2 - 3 - 4", 0, 0) == -5.0);
  CHECK(ev("8 / 2 / 2", 0, 0) == 2.0);
  CHECK(ev("-xi + 1", 0, 2) == -1.0);
  CHECK(ev("--3", 0, 0) == 3.0);
}

TEST_CASE("functions") {
  CHECK(ev("abs(xi)", 0, -2.5) == 2.5);
  CHECK(ev("min(1, 2)", 0, 0) == 1.0);
  CHECK(ev("max(1, 2, 5, 3)", 0, 0) == 5.0);
  CHECK(ev("pow(xi, 2)", 0, -3) == 9.0);
  CHECK(ev("max(1 - abs(xi), 0)", 0, 0.25) == doctest::Approx(0.75));
  CHECK(ev("min(pow(xi + 1, 2), pow(xi - 1, 2))", 0, 0) == 1.0);
}

TEST_CASE("variables and aliases") {
  CHECK(ev("x", 1.5, 0) == 1.5);
  CHECK(ev("x1", 1.5, 0) == 1.5);
  CHECK(ev("xi", 0, 2.0) == 2.0);
  Expr::Context ctx;
  ctx.x = {1.0, 2.0};
  ctx.xi = {3.0, 4.0};
  ctx.dim = 2;
  CHECK(Expr::parse("x2 + xi2")->eval(ctx) == 6.0);
  CHECK(Expr::parse("pow(xi1*xi1 + xi2*xi2, 0.5)")->eval(ctx) == doctest::Approx(5.0));
}

TEST_CASE("infinity literal saturates") {
  CHECK(std::isinf(ev("inf", 0, 0)));
  CHECK(std::isinf(ev("inf + 1", 0, 0)));
  CHECK(ev("min(inf, 3)", 0, 0) == 3.0);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(Expr::parse("1 +"), ExprError);
  CHECK_THROWS_AS(Expr::parse("foo(2)"), ExprError);
  CHECK_THROWS_AS(Expr::parse("min(1)"), ExprError);
  CHECK_THROWS_AS(Expr::parse("pow(1, 2, 3)"), ExprError);
  CHECK_THROWS_AS(Expr::parse("(1 + 2"), ExprError);
  CHECK_THROWS_AS(Expr::parse("1 2"), ExprError);
  try {
    Expr::parse("1 + @");
    CHECK(false);
  } catch (const ExprError& e) {
    CHECK(e.position == 4);
  }
}

TEST_CASE("dependency flags") {
  CHECK(Expr::parse("2 + abs(xi)")->depends_on_xi());
  CHECK_FALSE(Expr::parse("2 + abs(xi)")->depends_on_x());
  CHECK(Expr::parse("x * xi")->depends_on_x());
  CHECK_FALSE(Expr::parse("3.5")->depends_on_xi());
}

TEST_CASE("gradient variables rejected in spatial-only context") {
  Expr::Context ctx;
  ctx.allow_xi = false;
  CHECK_THROWS_AS(Expr::parse("xi + 1")->eval(ctx), ExprError);
  CHECK(Expr::parse("x + 1")->eval(ctx) == 1.0);
}

TEST_CASE("gradient_norm builder") {
  Expr::Context ctx;
  ctx.xi = {3.0, 4.0};
  ctx.dim = 2;
  CHECK(Expr::gradient_norm(2)->eval(ctx) == doctest::Approx(5.0));
  ctx.dim = 1;
  ctx.xi = {-2.0, 0.0};
  CHECK(Expr::gradient_norm(1)->eval(ctx) == 2.0);
}
