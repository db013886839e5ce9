#pragma once

// Closed-form Bach components on products and the scalar relations derived
// from them, evaluated from curvature computed on each factor's own chart.
//
// Normalization. The line x N^3 formula reproduces the Bach tensor of
// curvature_engine exactly. The K^2 x L^2 formula, as printed, equals
// kSurfaceBachScale * B with kSurfaceBachScale = -2; bach_surface_product
// returns the printed formula and callers comparing it with the pipeline
// must scale accordingly (docs/conventions.md).

#include <span>

#include "bachlab/catalog.hpp"
#include "bachlab/curvature.hpp"

namespace bachlab {

inline constexpr double kSurfaceBachScale = -2.0;

/// Curvature data of one factor, computed on that factor alone.
struct FactorCurvature {
  int dim = 0;
  Tensor g, ric, ric2, hess_s, lap_ric;
  double s = 0.0, lap_s = 0.0, ric_norm2 = 0.0;

  /// |Ric - (S/n) g|^2
  double einstein_residual() const;
};

FactorCurvature factor_curvature(const ChartSpec& chart, std::span<const double> p);
/// Factor k of a product manifold at the projection of a product point.
FactorCurvature factor_curvature(const Manifold& m, std::size_t k, std::span<const double> product_point);

struct LineCross3Bach {
  double tt = 0.0;
  Tensor tY;  // rank 1, always zero
  Tensor YZ;  // rank 2 on N
  /// 4x4 tensor in (t, N) coordinates.
  Tensor assemble() const;
};

LineCross3Bach bach_line_cross_3(const FactorCurvature& N);

struct SurfaceProductBach {
  Tensor ZW;  // on K
  Tensor ZU;  // mixed block, always zero (2x2 as a rank-2 tensor of dim 2)
  Tensor UV;  // on L
  /// 4x4 tensor in (K, L) coordinates.
  Tensor assemble() const;
};

/// The printed K x L formula (scale kSurfaceBachScale relative to B).
SurfaceProductBach bach_surface_product(const FactorCurvature& K, const FactorCurvature& L);

/// 8 lambda = |Ric_N|^2 - S_N^2 / 3
double s1n3_lambda(const FactorCurvature& N);
/// lambda = -(|Ric|^2 - S^2/3) / 24
double rn3_lambda(const FactorCurvature& N);
/// (1/8) Delta S - [(1/8)|Ric|^2 - (1/24) S^2 + 3 lambda]
double rn3_trace_residual(const FactorCurvature& N, double lambda);
/// (1/4) Delta Ric - Ric^2 + (7/12) S Ric + (1/3)(|Ric|^2 - (7/12) S^2) g
Tensor remark45_residual(const FactorCurvature& N);
/// c = Delta S + S^2 / 3
double surface_c_invariant(const FactorCurvature& F);

/// Largest |closed form - pipeline| over all components at a point of a
/// line x N^3 product (factors: line or circle, then a 3-manifold).
double line_cross_3_discrepancy(const Manifold& m, std::span<const double> p);
/// Same for K x L against kSurfaceBachScale * B_pipeline.
double surface_product_discrepancy(const Manifold& m, std::span<const double> p);

}  // namespace bachlab
