#include <cmath>

#include "bachlab/error.hpp"
#include "bachlab/soliton.hpp"
#include "doctest.h"

using namespace bachlab;

TEST_CASE("named soliton examples have small residuals") {
  const Tolerances tol;
  for (const auto& id : soliton_example_ids()) {
    const NamedSoliton s = soliton_example(id, tol);
    const auto pts = residual_points(s.manifold, 40, 1);
    CAPTURE(id);
    const auto r = s.data.extended() || s.manifold.dim() != 4 ? extended_q_residual(s.manifold, s.data, pts, s.tolerance)
                                                              : bach_soliton_residual(s.manifold, s.data, pts, s.tolerance);
    CHECK(r.pass);
    CHECK(r.sup <= s.tolerance);
  }
  CHECK_THROWS_AS(soliton_example("nope", tol), SpecError);
}

TEST_CASE("Ho data is a soliton only in the kappa it was stated for") {
  const Tolerances tol;
  NamedSoliton s = soliton_example("ho-r2s2", tol);
  const auto pts = residual_points(s.manifold, 20, 2);
  s.data.bach_scale = 1.0;
  CHECK(bach_soliton_residual(s.manifold, s.data, pts, s.tolerance).sup > 0.01);
  // kappa = 1 analogue: f = -|x|^2/12, lambda = -1/12
  s.data.f = s.manifold.parse("-(x^2 + y^2)/12");
  s.data.lambda = -1.0 / 12.0;
  CHECK(bach_soliton_residual(s.manifold, s.data, pts, s.tolerance).sup < 1e-9);
}

TEST_CASE("Berger fiber residual vanishes at a = 1/2 and a = 1 only") {
  CHECK(std::abs(berger_fiber_residual(0.5)) < 1e-12);
  CHECK(std::abs(berger_fiber_residual(1.0)) < 1e-12);
  CHECK(berger_fiber_residual(0.7) > 0.0);
  CHECK(berger_fiber_residual(0.3) < 0.0);
  for (double a : {1.2, 1.5, 2.0, 3.0}) CHECK(berger_fiber_residual(a) < 0.0);
}

TEST_CASE("Berger solve") {
  const Tolerances tol;
  const auto sol = solve_berger_soliton(kBergerDefaultInterval, tol);
  REQUIRE(sol.bracketed);
  CHECK(sol.a == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.lambda == doctest::Approx(-0.25).epsilon(1e-10));
  CHECK(sol.soliton_residual < tol.berger_residual);
  const auto none = solve_berger_soliton({1.0 + 1e-9, 3.0}, tol);
  CHECK_FALSE(none.bracketed);
  CHECK_FALSE(none.message.empty());
}

TEST_CASE("soliton documents") {
  const auto spec = soliton_from_json(R"j({"manifold": "r2xs2", "f": "(x^2 + y^2)/6", "lambda": 0.16666666666666666,
                                          "q": "bach_flow", "bach_scale": -2})j");
  CHECK(spec.data.gradient());
  CHECK(spec.data.bach_scale == -2.0);
  CHECK_THROWS_AS(soliton_from_json(R"j({"manifold": "r2xs2", "f": "x", "X": ["1","0","0","0"]})j"), SpecError);
  CHECK_THROWS_AS(soliton_from_json(R"j({"manifold": "r2xs2", "f": "x", "speed": 1})j"), SpecError);
  CHECK_THROWS_AS(soliton_from_json(R"j({"manifold": "r2xs2", "X": ["1", "0"]})j"), SpecError);
  CHECK_THROWS_AS(soliton_from_json(R"j({"manifold": "r2xs2", "f": "x +"})j"), ParseError);
}

TEST_CASE("constructed q is a soliton by definition") {
  const Manifold m = named_manifold("flat_torus");
  SolitonData sd;
  sd.X = {m.parse("sin(x)*cos(y)"), m.parse("exp(0.3*sin(x + y))")};
  sd.phi = m.parse("0.2*cos(x)");
  sd.q = QSelector::Constructed;
  const auto r = extended_q_residual(m, sd, m.sample_points(30, 1), 1e-12);
  CHECK(r.sup < 1e-12);
}
