#include "bachlab/product.hpp"

#include <algorithm>
#include <cmath>

#include "bachlab/error.hpp"

namespace bachlab {

double FactorCurvature::einstein_residual() const {
  Tensor E = ric;
  for (std::size_t k = 0; k < E.size(); ++k) E[k] -= s / dim * g[k];
  // |E|^2 = g^ia g^jb E_ij E_ab; use the inverse of g by Gauss-Jordan on values
  const int n = dim;
  std::vector<double> a(g.begin(), g.end()), inv(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i * n + i)] = 1.0;
  for (int c = 0; c < n; ++c) {
    const double piv = a[static_cast<std::size_t>(c * n + c)];
    for (int j = 0; j < n; ++j) {
      a[static_cast<std::size_t>(c * n + j)] /= piv;
      inv[static_cast<std::size_t>(c * n + j)] /= piv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[static_cast<std::size_t>(r * n + c)];
      for (int j = 0; j < n; ++j) {
        a[static_cast<std::size_t>(r * n + j)] -= f * a[static_cast<std::size_t>(c * n + j)];
        inv[static_cast<std::size_t>(r * n + j)] -= f * inv[static_cast<std::size_t>(c * n + j)];
      }
    }
  }
  double s2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          s2 += inv[static_cast<std::size_t>(i * n + p)] * inv[static_cast<std::size_t>(j * n + q)] * E(i, j) * E(p, q);
  return s2;
}

FactorCurvature factor_curvature(const ChartSpec& chart, std::span<const double> p) {
  const Manifold m(chart.kind, {chart});
  const CurvaturePack pk = CurvaturePack::compute(m.metric_jet(p, 4));
  FactorCurvature f;
  f.dim = chart.dim();
  f.g = values(pk.metric().g);
  f.ric = values(pk.ricci());
  f.ric2 = values(pk.ricci_squared());
  f.hess_s = values(pk.hess_scalar());
  f.lap_ric = values(pk.laplacian_ricci());
  f.s = pk.scalar().value();
  f.lap_s = pk.laplacian_scalar().value();
  f.ric_norm2 = pk.ricci_norm2().value();
  return f;
}

FactorCurvature factor_curvature(const Manifold& m, std::size_t k, std::span<const double> product_point) {
  if (k >= m.factors().size()) throw SpecError("factor index out of range");
  return factor_curvature(m.factors()[k], m.factor_point(k, product_point));
}

Tensor LineCross3Bach::assemble() const {
  Tensor B(4, 2, 0.0);
  B(0, 0) = tt;
  for (int i = 0; i < 3; ++i) {
    B(0, i + 1) = B(i + 1, 0) = tY(i);
    for (int j = 0; j < 3; ++j) B(i + 1, j + 1) = YZ(i, j);
  }
  return B;
}

LineCross3Bach bach_line_cross_3(const FactorCurvature& N) {
  if (N.dim != 3) throw SpecError("line x N^3 formula needs a 3-dimensional factor");
  LineCross3Bach b;
  const double S = N.s;
  b.tt = -N.lap_s / 12.0 - 0.25 * (N.ric_norm2 - S * S / 3.0);
  b.tY = Tensor(3, 1, 0.0);
  b.YZ = Tensor(3, 2, 0.0);
  // the printed display drops the '+' before the last bracket
  const double c = -N.lap_s / 12.0 + 0.75 * N.ric_norm2 - 5.0 / 12.0 * S * S;
  for (std::size_t k = 0; k < b.YZ.size(); ++k)
    b.YZ[k] = 0.5 * N.lap_ric[k] - N.hess_s[k] / 6.0 - 2.0 * N.ric2[k] + 7.0 / 6.0 * S * N.ric[k] + c * N.g[k];
  return b;
}

Tensor SurfaceProductBach::assemble() const {
  Tensor B(4, 2, 0.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      B(i, j) = ZW(i, j);
      B(i + 2, j + 2) = UV(i, j);
      B(i, j + 2) = B(j + 2, i) = ZU(i, j);
    }
  return B;
}

SurfaceProductBach bach_surface_product(const FactorCurvature& K, const FactorCurvature& L) {
  if (K.dim != 2 || L.dim != 2) throw SpecError("K x L formula needs two 2-dimensional factors");
  auto block = [](const FactorCurvature& A, const FactorCurvature& B) {
    Tensor t(2, 2, 0.0);
    const double c = A.lap_s - 0.5 * B.lap_s + 0.25 * (A.s * A.s - B.s * B.s);
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = A.hess_s[k] / 3.0 - c / 3.0 * A.g[k];
    return t;
  };
  SurfaceProductBach b;
  b.ZW = block(K, L);
  b.UV = block(L, K);
  b.ZU = Tensor(2, 2, 0.0);
  return b;
}

double s1n3_lambda(const FactorCurvature& N) { return (N.ric_norm2 - N.s * N.s / 3.0) / 8.0; }

double rn3_lambda(const FactorCurvature& N) { return -(N.ric_norm2 - N.s * N.s / 3.0) / 24.0; }

double rn3_trace_residual(const FactorCurvature& N, double lambda) {
  return N.lap_s / 8.0 - (N.ric_norm2 / 8.0 - N.s * N.s / 24.0 + 3.0 * lambda);
}

Tensor remark45_residual(const FactorCurvature& N) {
  Tensor r(N.dim, 2, 0.0);
  const double c = (N.ric_norm2 - 7.0 / 12.0 * N.s * N.s) / 3.0;
  for (std::size_t k = 0; k < r.size(); ++k)
    r[k] = 0.25 * N.lap_ric[k] - N.ric2[k] + 7.0 / 12.0 * N.s * N.ric[k] + c * N.g[k];
  return r;
}

double surface_c_invariant(const FactorCurvature& F) { return F.lap_s + F.s * F.s / 3.0; }

namespace {

void require_factors(const Manifold& m, int d0, int d1) {
  if (m.factors().size() != 2 || m.factors()[0].dim() != d0 || m.factors()[1].dim() != d1)
    throw SpecError("manifold '" + m.name() + "' is not a " + std::to_string(d0) + "x" + std::to_string(d1) + " product");
}

}  // namespace

double line_cross_3_discrepancy(const Manifold& m, std::span<const double> p) {
  require_factors(m, 1, 3);
  const Tensor closed = bach_line_cross_3(factor_curvature(m, 1, p)).assemble();
  const Tensor pipe = values(CurvaturePack::compute(m.metric_jet(p, 4)).bach());
  return max_abs_diff(closed, pipe);
}

double surface_product_discrepancy(const Manifold& m, std::span<const double> p) {
  require_factors(m, 2, 2);
  const Tensor closed = bach_surface_product(factor_curvature(m, 0, p), factor_curvature(m, 1, p)).assemble();
  Tensor pipe = values(CurvaturePack::compute(m.metric_jet(p, 4)).bach());
  for (auto& v : pipe) v *= kSurfaceBachScale;
  return max_abs_diff(closed, pipe);
}

}  // namespace bachlab
