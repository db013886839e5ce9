#include <cmath>
#include <numbers>

#include "bachlab/catalog.hpp"
#include "bachlab/error.hpp"
#include "doctest.h"

using namespace bachlab;
using std::numbers::pi;

TEST_CASE("quadrature reproduces closed-form volumes") {
  struct V {
    const char* name;
    double volume;
  };
  for (const V& v : {V{"round_sphere", 4 * pi}, V{"round_sphere3", 2 * pi * pi}, V{"round_sphere4", 8 * pi * pi / 3},
                     V{"flat_torus", 4 * pi * pi}, V{"s2xs2", 16 * pi * pi}, V{"s1xs3", 4 * pi * pi * pi}}) {
    const Manifold m = named_manifold(v.name);
    CAPTURE(v.name);
    REQUIRE(m.volume().has_value());
    CHECK(*m.volume() == doctest::Approx(v.volume).epsilon(1e-14));
    const double q = integrate(m.quadrature(), [](std::span<const double>) { return 1.0; });
    CHECK(std::abs(q - v.volume) <= 1e-8 * v.volume);
  }
}

TEST_CASE("polar rule integrates ambient polynomials on the sphere exactly") {
  const Manifold m = named_manifold("round_sphere");
  // int z^2 = 4 pi / 3, int x^2 y^2 = 4 pi / 15
  const double z2 = integrate(m.quadrature(), [](std::span<const double> p) { return std::pow(std::cos(p[0]), 2); });
  CHECK(z2 == doctest::Approx(4 * pi / 3).epsilon(1e-14));
  const double x2y2 = integrate(m.quadrature(), [](std::span<const double> p) {
    const double s = std::sin(p[0]);
    return std::pow(s * std::cos(p[1]), 2) * std::pow(s * std::sin(p[1]), 2);
  });
  CHECK(x2y2 == doctest::Approx(4 * pi / 15).epsilon(1e-14));
}

TEST_CASE("resolution helpers") {
  const Manifold m = named_manifold("flat_torus");
  const auto n0 = m.quadrature().size();
  CHECK(m.with_resolution_scale(0.5).quadrature().size() * 4 == n0);
  const std::size_t side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n0))));
  CHECK(m.with_refined_resolution().quadrature().size() == (2 * side + 1) * (2 * side + 1));
  CHECK(m.with_resolution_scale(1e-6).quadrature().size() == 4);
}

TEST_CASE("sample points stay in the sample region and are seeded") {
  const Manifold m = named_manifold("round_sphere");
  const auto a = m.sample_points(64, 3), b = m.sample_points(64, 3), c = m.sample_points(64, 4);
  CHECK(a == b);
  CHECK(a != c);
  for (const auto& p : a) CHECK(m.in_sample_region(p));
}

TEST_CASE("products stack block-diagonal metrics") {
  const Manifold m = named_manifold("r2xs2");
  CHECK(m.dim() == 4);
  CHECK(m.factors().size() == 2);
  CHECK(m.factor_offset(1) == 2);
  const Tensor g = m.metric_values(std::vector<double>{0.0, 0.0, 1.0, 0.0});
  CHECK(g(3, 3) == doctest::Approx(std::pow(std::sin(1.0), 2)));
  CHECK(g(0, 2) == 0.0);
  CHECK_FALSE(m.compact());
}

TEST_CASE("manifold documents") {
  const Manifold m = manifold_from_json(R"j({"name": "t", "factors": [{"kind": "round_sphere", "params": {"r": 2}},
                                                                      {"kind": "circle"}]})j");
  CHECK(m.dim() == 3);
  CHECK(*m.volume() == doctest::Approx(16 * pi * 2 * pi));
  CHECK_THROWS_AS(manifold_from_json(R"j({"name": "t", "factors": [], "colour": 1})j"), SpecError);
  CHECK_THROWS_AS(manifold_from_json(R"j({"name": "t", "factors": [{"kind": "klein_bottle"}]})j"), SpecError);
  CHECK_THROWS_AS(manifold_from_json("{"), SpecError);
  CHECK_THROWS_AS(named_manifold("nope"), SpecError);
  CHECK_THROWS_AS(charts::round_sphere(2, -1.0).validate(), Error);
}
