#include <cmath>
#include <random>
#include <vector>

#include "bachlab/catalog.hpp"
#include "bachlab/corpus.hpp"
#include "bachlab/curvature.hpp"
#include "bachlab/error.hpp"
#include "doctest.h"
#include "fdref/fdref.hpp"

using namespace bachlab;

namespace {

CurvaturePack pack_at(const Manifold& m, const std::vector<double>& p, int order = 4) {
  return CurvaturePack::compute(m.metric_jet(p, order));
}

Manifold single(const ChartSpec& c) { return Manifold(c.kind, {c}); }

}  // namespace

TEST_CASE("space forms have constant sectional curvature") {
  struct Form {
    ChartSpec chart;
    std::vector<double> p;
    double k;
  };
  const std::vector<Form> forms{
      {charts::round_sphere(2, 1.0), {1.1, 0.4}, 1.0},
      {charts::round_sphere(2, 2.0), {0.7, 2.0}, 0.25},
      {charts::round_sphere(3, 1.0), {0.3, 1.2, 2.5}, 1.0},
      {charts::round_sphere(4, 1.5), {1.0, 1.3, 0.9, 0.2}, 1.0 / 2.25},
      {charts::hyperbolic_2(1.0), {0.2, 1.3}, -1.0},
      {charts::euclidean(3), {0.1, 0.2, 0.3}, 0.0},
  };
  for (const auto& f : forms) {
    const Manifold m = single(f.chart);
    const auto pk = pack_at(m, f.p);
    const int n = m.dim();
    const Tensor g = values(pk.metric().g), R = values(pk.riemann()), Ric = values(pk.ricci());
    CAPTURE(f.chart.kind);
    CHECK(pk.scalar().value() == doctest::Approx(n * (n - 1) * f.k).epsilon(1e-12).scale(1.0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        CHECK(Ric(a, b) == doctest::Approx((n - 1) * f.k * g(a, b)).scale(1.0).epsilon(1e-12));
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            CHECK(R(a, b, c, d) == doctest::Approx(f.k * (g(a, c) * g(b, d) - g(a, d) * g(b, c))).scale(1.0).epsilon(1e-12));
      }
    if (n > 2) CHECK(max_abs(values(pk.weyl())) < 1e-12);
    if (n > 2) CHECK(max_abs(values(pk.cotton())) < 1e-12);
    if (n == 4) CHECK(max_abs(values(pk.bach())) < 1e-12);
  }
}

TEST_CASE("Riemann symmetries and the second Bianchi identity on random metrics") {
  corpus::Rng rng(21);
  for (int dim = 2; dim <= 4; ++dim) {
    const Manifold m = single(corpus::random_metric(dim, rng));
    const std::vector<double> p(static_cast<std::size_t>(dim), 0.1);
    const auto pk = pack_at(m, p, 3);
    const Tensor R = values(pk.riemann());
    double worst = 0.0;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        for (int c = 0; c < dim; ++c)
          for (int d = 0; d < dim; ++d) {
            worst = std::max(worst, std::abs(R(a, b, c, d) + R(b, a, c, d)));
            worst = std::max(worst, std::abs(R(a, b, c, d) - R(c, d, a, b)));
            worst = std::max(worst, std::abs(R(a, b, c, d) + R(a, c, d, b) + R(a, d, b, c)));
          }
    CHECK(worst < 1e-12);
    CHECK(max_abs(values(pk.bianchi_defect())) < 1e-11);
  }
}

TEST_CASE("jet curvature matches the finite-difference oracle") {
  corpus::Rng rng(5);
  for (int dim = 2; dim <= 4; ++dim) {
    const Manifold m = single(corpus::random_metric(dim, rng));
    const std::vector<double> p(static_cast<std::size_t>(dim), -0.05);
    const auto fd = fdref::compute(m, p);
    const auto jet = fdref::from_pack(pack_at(m, p));
    for (const auto& [name, err] : fdref::compare(fd, jet)) {
      CAPTURE(name);
      CAPTURE(dim);
      CHECK(err < 1e-6);
    }
  }
}

TEST_CASE("Bach tensor: trace free, divergence free, conformal weight -2") {
  corpus::Rng rng(9);
  const ChartSpec c = corpus::random_metric(4, rng);
  const std::string u = "0.2*sin(x + 0.5*y) + 0.1*cos(z - w)";
  const Manifold m = single(c), mt = single(corpus::conformal_rescale(c, u));
  const std::vector<double> p{0.1, -0.2, 0.15, 0.05};
  const auto pk = pack_at(m, p, 5);
  CHECK(std::abs(trace(pk.bach(), pk.metric()).value()) < 1e-12);
  CHECK(max_abs(values(divergence_sym2(pk.bach(), pk.metric(), pk.christoffel()))) < 1e-10);
  const auto pkt = pack_at(mt, p);
  const double e2u = std::exp(2.0 * m.parse(u).eval(p, {}));
  const Tensor B = values(pk.bach()), Bt = values(pkt.bach());
  for (std::size_t k = 0; k < B.size(); ++k) CHECK(Bt[k] * e2u == doctest::Approx(B[k]).scale(1.0).epsilon(1e-10));
}

TEST_CASE("Einstein 4-manifolds are Bach flat") {
  const Manifold s2s2 = named_manifold("s2xs2");
  const auto pk = pack_at(s2s2, {1.0, 0.5, 2.0, 1.5});
  CHECK(max_abs(values(pk.bach())) < 1e-12);
  CHECK(max_abs(values(pk.weyl())) > 0.1);
}

TEST_CASE("R2 x S2 has the split Bach tensor B = (1/6)(g_S2 - g_R2)") {
  const Manifold m = named_manifold("r2xs2");
  const std::vector<double> p{0.3, -0.4, 1.2, 0.7};
  const auto pk = pack_at(m, p);
  const Tensor B = values(pk.bach()), g = values(pk.metric().g);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double sign = a < 2 ? -1.0 : 1.0;
      CHECK(B(a, b) == doctest::Approx(sign * g(a, b) / 6.0).scale(1.0).epsilon(1e-12));
    }
  // bach flow adds (1/12) Delta S g, zero for constant S
  CHECK(max_abs_diff(values(pk.bach_flow()), B) < 1e-12);
}

TEST_CASE("order bookkeeping and dimension guards") {
  const Manifold s2 = named_manifold("round_sphere");
  const std::vector<double> p{1.0, 1.0};
  CHECK_THROWS_AS(s2.metric_jet(p, kMaxJetOrder + 1), OrderError);
  const auto pk2 = pack_at(s2, p, 2);
  CHECK_NOTHROW(pk2.scalar());
  CHECK_THROWS_AS(pk2.grad_scalar(), OrderError);
  CHECK_THROWS_AS(pack_at(s2, p).schouten(), DomainError);
  const Manifold s3 = named_manifold("round_sphere3");
  CHECK_THROWS_AS(pack_at(s3, {0.5, 1.0, 0.5}).bach(), DomainError);
  const Manifold s4 = named_manifold("round_sphere4");
  CHECK_THROWS_AS(pack_at(s4, {1.0, 1.0, 1.0, 1.0}, 3).bach(), OrderError);
}
