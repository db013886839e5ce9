#include <cmath>
#include <vector>

#include "bachlab/error.hpp"
#include "bachlab/expr.hpp"
#include "doctest.h"

using namespace bachlab;

namespace {
const Symbols kSym{{"x", "y"}, {"a"}};
}

TEST_CASE("evaluation follows precedence and associativity") {
  const std::vector<double> p{2.0, 3.0};
  const ParamMap a{{"a", 0.5}};
  CHECK(Expr::parse("1 + 2*3", kSym).eval(p, a) == 7.0);
  CHECK(Expr::parse("x^3^2", kSym).eval(p, a) == doctest::Approx(64.0));  // chains bind left
  CHECK(Expr::parse("x^(-2)", kSym).eval(p, a) == doctest::Approx(0.25));
  CHECK(Expr::parse("-x^2", kSym).eval(p, a) == -4.0);
  CHECK(Expr::parse("x - y - 1", kSym).eval(p, a) == -2.0);
  CHECK(Expr::parse("x / y / 2", kSym).eval(p, a) == doctest::Approx(1.0 / 3.0));
  CHECK(Expr::parse("a*sin(x)*exp(y)", kSym).eval(p, a) == doctest::Approx(0.5 * std::sin(2.0) * std::exp(3.0)));
  CHECK(Expr::parse("1.5e-1*x", kSym).eval(p, a) == doctest::Approx(0.3));
  CHECK(Expr::parse("pi", kSym).eval(p, a) == doctest::Approx(3.141592653589793));
}

TEST_CASE("printing round-trips") {
  for (const char* s : {"x^2 + y", "-(x - y)*a", "sin(x)^2 + cos(y)/(1 + x)", "exp(-x)*sqrt(2 + y)",
                        "x - (y - 1)", "x^(-3) + y^4", "(x*y)^3"}) {
    const Expr e = Expr::parse(s, kSym);
    const Expr r = Expr::parse(e.to_string(), kSym);
    const std::vector<double> p{0.7, 1.9};
    CHECK(r.eval(p, {{"a", 1.3}}) == doctest::Approx(e.eval(p, {{"a", 1.3}})).epsilon(1e-15));
    CHECK(r.to_string() == e.to_string());
  }
}

TEST_CASE("parse errors carry offsets") {
  CHECK_THROWS_AS(Expr::parse("x +", kSym), ParseError);
  CHECK_THROWS_AS(Expr::parse("foo(x)", kSym), ParseError);
  CHECK_THROWS_AS(Expr::parse("z", kSym), ParseError);
  CHECK_THROWS_AS(Expr::parse("(x", kSym), ParseError);
  CHECK_THROWS_AS(Expr::parse("x^1.5", kSym), ParseError);
  CHECK_THROWS_AS(Expr::parse("x^y", kSym), ParseError);
  try {
    Expr::parse("x + * y", kSym);
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("jets of expressions match hand derivatives") {
  const Expr e = Expr::parse("x^2*y + sin(x*y)", kSym);
  const std::vector<double> p{0.4, -1.2};
  const Jet j = eval_jet(e, p, {}, 2, 3);
  const double x = p[0], y = p[1];
  CHECK(j.value() == doctest::Approx(x * x * y + std::sin(x * y)));
  CHECK(j.partial(MultiIndex{1, 0}) == doctest::Approx(2 * x * y + y * std::cos(x * y)));
  CHECK(j.partial(MultiIndex{1, 1}) == doctest::Approx(2 * x + std::cos(x * y) - x * y * std::sin(x * y)));
  CHECK(j.partial(MultiIndex{0, 3}) == doctest::Approx(-x * x * x * std::cos(x * y)));
}

TEST_CASE("evaluation outside the domain throws") {
  const std::vector<double> p{-1.0, 0.0};
  CHECK_THROWS_AS(Expr::parse("log(x)", kSym).eval(p, {}), DomainError);
  CHECK_THROWS_AS(eval_jet(Expr::parse("sqrt(x)", kSym), p, {}, 2, 2), DomainError);
  CHECK_THROWS_AS(Expr::parse("1/y", kSym).eval(p, {}), DomainError);
}
