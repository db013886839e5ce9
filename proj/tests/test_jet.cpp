#include <cmath>
#include <numbers>

#include "bachlab/error.hpp"
#include "bachlab/jet.hpp"
#include "doctest.h"

using namespace bachlab;

namespace {

// f(x, y) = sin(x) * exp(y) at (x0, y0): d^a f = sin^(a0)(x0) e^y0
double dsin(int k, double x) {
  switch (k % 4) {
    case 0: return std::sin(x);
    case 1: return std::cos(x);
    case 2: return -std::sin(x);
    default: return -std::cos(x);
  }
}

}  // namespace

TEST_CASE("jet sizes are binomial") {
  CHECK(jet_size(1, 0) == 1);
  CHECK(jet_size(2, 2) == 6);
  CHECK(jet_size(3, 4) == 35);
  CHECK(jet_size(4, 5) == kMaxJetCoeffs);
  CHECK_THROWS_AS(jet_layout(4, 6), OrderError);
  CHECK_THROWS_AS(jet_layout(5, 1), OrderError);
  CHECK_THROWS_AS(Jet(2, kMaxJetOrder + 1), OrderError);
}

TEST_CASE("product of elementary functions matches closed-form partials") {
  const double x0 = 0.7, y0 = -0.3;
  const int order = 5;
  const Jet x = Jet::variable(0, x0, 2, order), y = Jet::variable(1, y0, 2, order);
  const Jet f = sin(x) * exp(y);
  for (int a = 0; a <= order; ++a)
    for (int b = 0; a + b <= order; ++b)
      CHECK(f.partial(MultiIndex{a, b}) == doctest::Approx(dsin(a, x0) * std::exp(y0)).epsilon(1e-13));
}

TEST_CASE("pythagorean identity holds to every order") {
  const Jet u = Jet::variable(0, 0.4, 3, 4) * Jet::variable(1, 1.1, 3, 4) + Jet::variable(2, -0.2, 3, 4);
  const Jet one = sin(u) * sin(u) + cos(u) * cos(u);
  CHECK(one.value() == doctest::Approx(1.0).epsilon(1e-15));
  for (std::size_t k = 1; k < one.size(); ++k) CHECK(std::abs(one[k]) < 1e-14);
}

TEST_CASE("reciprocal, division and negative powers agree") {
  const Jet x = Jet::variable(0, 1.3, 2, 4), y = Jet::variable(1, 0.6, 2, 4);
  const Jet d = 2.0 + x * y;
  const Jet a = reciprocal(d), b = 1.0 / d, c = pow(d, -1);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-13));
    CHECK(a[k] == doctest::Approx(c[k]).epsilon(1e-13));
  }
  // d/dx 1/(2 + x y) = -y / (2 + x y)^2
  CHECK(a.partial(MultiIndex{1, 0}) == doctest::Approx(-0.6 / std::pow(2.78, 2)).epsilon(1e-14));
}

TEST_CASE("sqrt and log invert their squares and exponentials") {
  const Jet x = Jet::variable(0, 0.8, 1, 5);
  const Jet s = sqrt(x * x + 1.0);
  const Jet back = s * s - 1.0 - x * x;
  for (std::size_t k = 0; k < back.size(); ++k) CHECK(std::abs(back[k]) < 1e-14);
  const Jet l = log(exp(x)) - x;
  for (std::size_t k = 0; k < l.size(); ++k) CHECK(std::abs(l[k]) < 1e-14);
}

TEST_CASE("univariate Taylor coefficients") {
  const auto c = univariate_taylor(ElemFn::Exp, 0.0, 5);
  double fact = 1.0;
  for (int k = 0; k <= 5; ++k) {
    if (k > 0) fact *= k;
    CHECK(c[static_cast<std::size_t>(k)] == doctest::Approx(1.0 / fact));
  }
  CHECK_THROWS_AS(univariate_taylor(ElemFn::Log, -1.0, 2), DomainError);
  CHECK_THROWS_AS(univariate_taylor(ElemFn::Sqrt, 0.0, 2), DomainError);
}

TEST_CASE("derivative lowers the order and truncation is a prefix") {
  const Jet x = Jet::variable(0, 0.5, 2, 4), y = Jet::variable(1, 0.25, 2, 4);
  const Jet f = x * x * y;
  const Jet fx = f.derivative(0);
  CHECK(fx.order() == 3);
  CHECK(fx.value() == doctest::Approx(2 * 0.5 * 0.25));
  CHECK(fx.partial(MultiIndex{0, 1}) == doctest::Approx(1.0));
  const Jet t = f.truncated(2);
  CHECK(t.order() == 2);
  for (std::size_t k = 0; k < t.size(); ++k) CHECK(t[k] == f[k]);
  CHECK_THROWS_AS(f.truncated(5), OrderError);
  CHECK_THROWS_AS(Jet::constant(1.0, 2, 0).derivative(0), OrderError);
}

TEST_CASE("mixing shapes throws") {
  const Jet a = Jet::variable(0, 0.0, 2, 3), b = Jet::variable(0, 0.0, 3, 3), c = Jet::variable(0, 0.0, 2, 2);
  CHECK_THROWS_AS(a + b, OrderError);
  CHECK_THROWS_AS(a * c, OrderError);
}

TEST_CASE("embedding relabels variables") {
  const Jet x = Jet::variable(0, 0.3, 1, 3);
  const int map[] = {2};
  const Jet e = embed(sin(x), 3, map);
  CHECK(e.dim() == 3);
  CHECK(e.partial(MultiIndex{0, 0, 1}) == doctest::Approx(std::cos(0.3)));
  CHECK(e.partial(MultiIndex{1, 0, 0}) == 0.0);
}
