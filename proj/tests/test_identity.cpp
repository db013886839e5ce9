#include <filesystem>
#include <string>
#include <vector>

#include "bachlab/checks.hpp"
#include "bachlab/error.hpp"
#include "bachlab/identity.hpp"
#include "doctest.h"

using namespace bachlab;
namespace fs = std::filesystem;

TEST_CASE("every identity case in the repository passes") {
  const Tolerances tol;
  std::size_t seen = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(BACHLAB_SOURCE_DIR) / "cases" / "identity")) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    const IdentityCase c = identity_case_from_file(entry.path().string());
    const auto recs = identity_checks(c, tol);
    CAPTURE(entry.path().filename().string());
    REQUIRE_FALSE(recs.empty());
    for (const auto& r : recs) {
      CAPTURE(r.check_id);
      CAPTURE(r.value);
      CHECK(r.pass);
    }
  }
  CHECK(seen >= 8);
}

TEST_CASE("Bochner formula on a random-looking chart") {
  const Manifold m("bumpy", {charts::conformal_round_sphere("0.2*cos(theta) + 0.1*sin(theta)*cos(phi)")});
  const Expr h = m.parse("sin(theta)*cos(phi) + 0.3*cos(theta)^2");
  for (const auto& p : m.sample_points(10, 3)) CHECK(max_abs(bochner_pointwise(m, h, p)) < 1e-10);
}

TEST_CASE("Yano identity needs a conformal field") {
  const Manifold m = named_manifold("round_sphere");
  const Tolerances tol;
  const auto X = sphere_conformal_field(m);
  for (const auto& p : m.sample_points(10, 1)) CHECK(std::abs(yano_pointwise(m, X, p, tol)) < 1e-10);
  const std::vector<Expr> Y{m.parse("sin(phi)"), m.parse("cos(theta)")};
  CHECK_THROWS_AS(yano_pointwise(m, Y, std::vector<double>{1.0, 1.0}, tol), HypothesisError);
}

TEST_CASE("integral balances on the flat torus") {
  const Manifold m = named_manifold("flat_torus");
  const std::vector<Expr> X{m.parse("sin(x) + 0.5*cos(2*y)"), m.parse("exp(0.4*cos(x + y))")};
  const auto r = thm32_integrals(m, X, m.parse("0.3*sin(x)*cos(y)"));
  CHECK(r.first.relative() < 1e-12);
  CHECK(r.second.relative() < 1e-12);
}

// exp(a sin(2x - 2y)) factors put their leading aliased mode at (18, -18)
// for both 9- and 18-point trapezoid rules; the confirming step must not
// share it
TEST_CASE("convergence ladder refinement avoids nested aliasing") {
  const Manifold m = named_manifold("flat_torus");
  const std::vector<Expr> X{
      m.parse("0.68666006729171192*(-0.86559782518901285 + exp(0.5179247934621074*sin(0*x + 2*y + "
              "5.9244908635832356)) + -0.81518623198716778*cos(2*x + 2*y + 2.2677380167260726))"),
      m.parse("0.44757854240642658*(-0.89757350119928103 + exp(0.42140328794044635*sin(-2*x + 0*y + "
              "0.38379523035683272)) + 0.088747746248432735*cos(-1*x + -1*y + 1.9541939744491883))")};
  const Expr phi = m.parse("0.5*(0.8760288537738592 + exp(0.6222160836834143*sin(2*x + -2*y + 5.4633957878626243)) + "
                           "0.75727932231822037*cos(-2*x + 1*y + 0.88583005896999967))");
  const Tolerances tol;
  const auto lad = thm32_convergence(m, X, phi, tol);
  CHECK(lad.pass);
  CHECK(lad.first_shrink >= tol.integral_shrink);
  CHECK(lad.second_shrink >= tol.integral_shrink);
  // the nested 2N rule reproduces the coarse error
  const auto coarse = thm32_integrals(m.with_resolution_scale(0.1907), X, phi);
  const auto nested = thm32_integrals(m.with_resolution_scale(0.3815), X, phi);
  CHECK(coarse.nodes == 81);
  CHECK(nested.first.relative() > 0.5 * coarse.first.relative());
}

TEST_CASE("identity case documents") {
  CHECK_THROWS_AS(identity_case_from_json(R"j({"id": "lemma99", "manifold": "flat_torus"})j"), SpecError);
  CHECK_THROWS_AS(identity_case_from_json(R"j({"id": "yano", "manifold": "round_sphere", "extra": 1})j"), SpecError);
  const auto c = identity_case_from_json(
      R"j({"id": "yano", "manifold": "round_sphere", "X": ["-sin(theta)", "0"], "points": 7, "seed": 4})j");
  CHECK(c.points == 7);
  CHECK(c.seed == 4);
}

TEST_CASE("violated hypotheses become a failing record") {
  const Tolerances tol;
  const auto c = identity_case_from_json(
      R"j({"id": "yano", "manifold": "round_sphere", "X": ["sin(phi)", "cos(theta)"]})j");
  const auto recs = identity_checks(c, tol);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].check_id == "yano.hypotheses");
  CHECK_FALSE(recs[0].pass);
}

TEST_CASE("surface lemma on the round sphere") {
  const Tolerances tol;
  const auto r = lemma48_machinery(named_manifold("round_sphere"), tol, true);
  CHECK(r.hypothesis);
  CHECK(r.pass);
  CHECK(r.c_mean == doctest::Approx(4.0 / 3.0));
  CHECK_THROWS_AS(lemma48_machinery(Manifold("bumpy", {charts::surface_of_revolution("sin(t)*(1 + 0.2*cos(t)^2)")}),
                                    tol, true),
                  HypothesisError);
}
