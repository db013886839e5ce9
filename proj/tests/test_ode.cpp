#include <cmath>
#include <numbers>

#include "bachlab/error.hpp"
#include "bachlab/ode.hpp"
#include "doctest.h"

using namespace bachlab;
using namespace bachlab::ode;
using std::numbers::pi;

TEST_CASE("pole series solves the ODE to its order") {
  const double S0 = 0.7, c = -0.3, eps = 1e-3;
  const ProfileState s = pole_series(S0, c, eps);
  CHECK(s.rho == doctest::Approx(eps));
  CHECK(s.drho == doctest::Approx(1.0).epsilon(1e-6));
  const auto d = rhs(s, c);
  // S = S0 + s2 t^2 with 4 s2 = c - S0^2/3, so S'' = 2 s2 at the pole
  CHECK(d[1] == doctest::Approx(-0.5 * s.rho * s.S));
  CHECK(d[3] == doctest::Approx((c - S0 * S0 / 3.0) / 2.0).epsilon(1e-5));
  CHECK_THROWS_AS(rhs({0.0, 0.0, 1.0, 0.0, 0.0}, 0.0), DomainError);
}

TEST_CASE("flat plane is complete and open") {
  const auto r = integrate_profile(0.0, 0.0, Controls{});
  CHECK(r.outcome == Outcome::CompleteOpen);
  CHECK_FALSE(r.t_close.has_value());
  CHECK(r.last.rho == doctest::Approx(r.last.t).epsilon(1e-9));
  CHECK(r.S_max - r.S_min == 0.0);
}

TEST_CASE("round spheres close at pi r with constant S") {
  for (double radius : {1.0, 2.0, 0.75}) {
    const double S = 2.0 / (radius * radius);
    Controls ctl;
    ctl.keep_trajectory = true;
    const auto r = integrate_profile(S, S * S / 3.0, ctl);
    CAPTURE(radius);
    REQUIRE(r.outcome == Outcome::Closed);
    CHECK(std::abs(*r.t_close - pi * radius) < 1e-6);
    CHECK(r.S_max - r.S_min < 1e-8);
    for (const auto& st : r.trajectory) CHECK(std::abs(st.rho - radius * std::sin(st.t / radius)) < 1e-7);
  }
}

TEST_CASE("non-constant profiles do not close smoothly") {
  const auto r = integrate_profile(2.0, 1.0, Controls{});
  CHECK(r.outcome != Outcome::Closed);
  CHECK(r.outcome != Outcome::StepFailure);
}

TEST_CASE("negative c never closes and never fails a step") {
  ScanConfig cfg;
  cfg.S0 = {-2.0, 2.0, 9};
  cfg.c = {-2.0, -0.25, 8};
  cfg.extra.clear();
  const auto rep = scan(cfg);
  CHECK(rep.rows.size() == 72);
  CHECK(rep.closed == 0);
  CHECK(rep.failures == 0);
  CHECK(rep.corroborates);
}

TEST_CASE("empty grid gives an empty table") {
  const auto cfg = scan_config_from_json(R"j({"S0": {"min": 0, "max": 1, "count": 0}, "extra": []})j");
  const auto rep = scan(cfg);
  CHECK(rep.rows.empty());
  CHECK(scan_csv(rep) == "S0,c,class,t_close,S_min,S_max\n");
  CHECK(rep.corroborates);
}

TEST_CASE("default scan corroborates: only the round spheres close") {
  const auto rep = scan(ScanConfig{});
  CHECK(rep.rows.size() == 41 * 41 + 2);
  CHECK(rep.closed == 2);
  CHECK(rep.failures == 0);
  CHECK(rep.corroborates);
  CHECK(rep.max_closed_srange < 1e-8);
}

TEST_CASE("scan configuration is validated") {
  CHECK_THROWS_AS(scan_config_from_json(R"j({"S0": {"min": 0, "max": 1, "count": 2.5}})j"), SpecError);
  CHECK_THROWS_AS(scan_config_from_json(R"j({"S0": {"min": 1, "max": 0, "count": 3}})j"), SpecError);
  CHECK_THROWS_AS(scan_config_from_json(R"j({"grid": 1})j"), SpecError);
  CHECK_THROWS_AS(scan_config_from_json(R"j({"extra": [[1]]})j"), SpecError);
  CHECK_THROWS_AS(scan_config_from_json(R"j({"delta": -1})j"), SpecError);
  CHECK_THROWS_AS(scan_config_from_json("[1, 2"), SpecError);
}
