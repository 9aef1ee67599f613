#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "moutard/expr.hpp"
#include "test_util.hpp"

using namespace moutard;
using namespace tutil;

namespace {

double eval2(const std::string& text, double x, double y) {
  const double p[2] = {x, y};
  return Expression::parse(text).eval(std::span<const double>(p, 2));
}

} // namespace

TEST_CASE("numbers, precedence and associativity") {
  CHECK(eval2("1+2*3", 0, 0) == 7.0);
  CHECK(eval2("1+2*3^2", 0, 0) == 19.0);
  CHECK(eval2("2^3^2", 0, 0) == 512.0); // right associative
  CHECK(eval2("(1+2)*3", 0, 0) == 9.0);
  CHECK(eval2("7/2/2", 0, 0) == 1.75); // left associative
  CHECK(eval2("10-4-3", 0, 0) == 3.0);
  CHECK(eval2("-x1^2", 3, 0) == -9.0); // unary minus binds looser than ^
  CHECK(eval2("(-x1)^2", 3, 0) == 9.0);
  CHECK(eval2("--4", 0, 0) == 4.0);
  CHECK(eval2("1e-3 + 2.5E2", 0, 0) == doctest::Approx(250.001));
  CHECK(eval2(".5*4", 0, 0) == 2.0);
}

TEST_CASE("variables and constants") {
  CHECK(eval2("x1", 1.25, 0) == 1.25);
  CHECK(eval2("x2", 0, -3.5) == -3.5);
  CHECK(eval2("x1*x2 + 2", 3, 4) == 14.0);
  CHECK(eval2("pi", 0, 0) == doctest::Approx(M_PI));
  CHECK(eval2("e", 0, 0) == doctest::Approx(M_E));
  CHECK(Expression::parse("x1 + x2").max_variable() == 2);
  CHECK(Expression::parse("3.5").max_variable() == 0);
}

TEST_CASE("functions") {
  CHECK(eval2("exp(1)", 0, 0) == doctest::Approx(M_E));
  CHECK(eval2("log(e)", 0, 0) == doctest::Approx(1.0));
  CHECK(eval2("sin(pi/2)", 0, 0) == doctest::Approx(1.0));
  CHECK(eval2("cos(0)", 0, 0) == 1.0);
  CHECK(eval2("sqrt(16)", 0, 0) == 4.0);
  CHECK(eval2("abs(-3)", 0, 0) == 3.0);
  CHECK(eval2("tanh(0)", 0, 0) == 0.0);
  CHECK(eval2("cosh(0) + sinh(0)", 0, 0) == 1.0);
  CHECK(eval2("erf(0)", 0, 0) == 0.0);
  CHECK(eval2("pow(2, 10)", 0, 0) == 1024.0);
  CHECK(eval2("min(3, x1)", 1, 0) == 1.0);
  CHECK(eval2("max(3, x1)", 1, 0) == 3.0);
  CHECK(eval2("exp(-2*x1)", 0.5, 0) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("parse errors carry positions") {
  for (const char* bad : {"", "1 +", "(1+2", "x1 x2", "foo(1)", "pow(1)",
                          "1 + $", "x10", "xq", "min(1,2,3)"}) {
    CHECK_THROWS_AS(Expression::parse(bad), ParseError);
  }
  try {
    Expression::parse("1 + *2");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("column") != std::string::npos);
  }
}

TEST_CASE("sampling onto grids") {
  const Grid g = unit2(17);
  const Expression e = Expression::parse("(2+x1)^(-2)");
  const ScalarField f = e.sample(g);
  const ScalarField want = sample2(g, [](double x, double) {
    return std::pow(2.0 + x, -2.0);
  });
  CHECK(max_abs_diff(f, want) == 0.0);

  CHECK_THROWS_AS(Expression::parse("x3").sample(g), DimensionError);
  const Grid g3 = unit3(5);
  CHECK(Expression::parse("x3").sample(g3).max_abs() == 1.0);
}

TEST_CASE("evaluation is deterministic") {
  const Grid g = unit2(33);
  const Expression e = Expression::parse("exp(x1)*cos(x2) + x1^3/(1+x2)");
  const ScalarField a = e.sample(g);
  const ScalarField b = e.sample(g);
  CHECK(max_abs_diff(a, b) == 0.0);
}
