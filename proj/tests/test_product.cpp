#include <vector>

#include "bachlab/corpus.hpp"
#include "bachlab/product.hpp"
#include "doctest.h"

using namespace bachlab;

TEST_CASE("line x N^3 closed form equals the pipeline Bach tensor") {
  corpus::Rng rng(13);
  for (const auto& n3 : corpus::three_manifolds(rng, 2)) {
    if (n3.name == "euclidean3") continue;
    const Manifold m("line_x_" + n3.name, {charts::line(), n3.chart});
    std::vector<double> p{0.3};
    const auto q = Manifold(n3.name, {n3.chart}).sample_points(1, 2)[0];
    p.insert(p.end(), q.begin(), q.end());
    CAPTURE(n3.name);
    CHECK(line_cross_3_discrepancy(m, p) < 1e-10);
  }
}

TEST_CASE("K x L closed form equals kSurfaceBachScale times the pipeline") {
  corpus::Rng rng(17);
  const auto surf = corpus::surfaces(rng, 2);
  for (std::size_t i = 0; i < surf.size(); ++i) {
    const ChartSpec& K = surf[i];
    const ChartSpec& L = surf[(i + 3) % surf.size()];
    const Manifold m("kxl", {K, L});
    const auto p = m.sample_points(1, 5)[0];
    CAPTURE(K.kind);
    CAPTURE(L.kind);
    CHECK(surface_product_discrepancy(m, p) < 1e-10);
  }
}

TEST_CASE("scalar relations on model 3-manifolds") {
  const std::vector<double> p{0.4, 1.1, 0.8};
  // round S^3: Ric = 2g, |Ric|^2 = 12, S = 6 so |Ric|^2 - S^2/3 = 0
  const auto s3 = factor_curvature(charts::round_sphere(3, 1.0), p);
  CHECK(s1n3_lambda(s3) == doctest::Approx(0.0).scale(1.0));
  CHECK(rn3_lambda(s3) == doctest::Approx(0.0).scale(1.0));
  CHECK(max_abs(remark45_residual(s3)) < 1e-12);
  // S^2 x R: Ric = diag(1, sin^2, 0), |Ric|^2 = 2, S = 2
  const ChartSpec s2r = charts::custom({"theta", "phi", "z"}, {{0, 3.14159}, {0, 6.28318}, {-1, 1}},
                                       {false, true, false},
                                       {{"1", "0", "0"}, {"0", "sin(theta)^2", "0"}, {"0", "0", "1"}}, {}, false);
  const auto f = factor_curvature(s2r, p);
  CHECK(f.ric_norm2 == doctest::Approx(2.0));
  CHECK(rn3_lambda(f) == doctest::Approx(-(2.0 - 4.0 / 3.0) / 24.0));
  CHECK(s1n3_lambda(f) == doctest::Approx((2.0 - 4.0 / 3.0) / 8.0));
  // c = Delta S + S^2/3 on the unit sphere
  CHECK(surface_c_invariant(factor_curvature(charts::round_sphere(2, 1.0), std::vector<double>{1.0, 0.3})) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("R2 x S2 components of the printed K x L formula") {
  const Manifold m = named_manifold("r2xs2");
  const std::vector<double> p{0.1, 0.2, 1.0, 0.5};
  // K = S^2, L = R^2
  const auto B = bach_surface_product(factor_curvature(m, 1, p), factor_curvature(m, 0, p));
  CHECK(B.ZW(0, 0) == doctest::Approx(-1.0 / 3.0));
  CHECK(B.ZW(1, 1) == doctest::Approx(-std::pow(std::sin(1.0), 2) / 3.0));
  CHECK(B.ZW(0, 1) == doctest::Approx(0.0).scale(1.0));
  CHECK(B.UV(0, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(B.UV(0, 1) == doctest::Approx(0.0).scale(1.0));
  CHECK(max_abs(B.ZU) == 0.0);
}
