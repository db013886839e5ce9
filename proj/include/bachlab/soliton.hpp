#pragma once

// Residuals of (extended) q-solitons
//
//   (1/2) L_X g = (1/2) q + phi g,
//
// the named Bach-soliton examples, the Berger-sphere parameter solve and the
// product-surface C-field machinery.
//
// Bach normalization: q = kappa B + (1/12)(Delta S) g with kappa the
// `bach_scale` field. kappa = 1 is the curvature_engine Bach tensor and the
// line x N^3 convention; the K x L examples are stated for kappa = -2
// (kSurfaceBachScale), see docs/conventions.md.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bachlab/catalog.hpp"
#include "bachlab/product.hpp"
#include "bachlab/tolerances.hpp"

namespace bachlab {

enum class QSelector {
  BachFlow,     // kappa B + (1/12) Delta S g
  Bach,         // kappa B
  Custom,       // component expressions
  Constructed,  // L_X g - 2 phi g
  Zero,
};

const char* to_string(QSelector q);
QSelector q_selector_from_string(const std::string& s);

struct SolitonData {
  std::vector<Expr> X;      // upper components; empty when f is set
  std::optional<Expr> f;    // potential, X = grad f
  std::optional<Expr> phi;  // extended form; otherwise the constant lambda
  double lambda = 0.0;
  double phi_lap_s = 0.0;  // adds phi_lap_s * Delta S to phi
  QSelector q = QSelector::BachFlow;
  double bach_scale = 1.0;
  std::vector<Expr> custom_q;  // n*n, row-major

  bool gradient() const { return f.has_value(); }
  bool extended() const { return phi.has_value(); }
  /// Shapes against the manifold; SpecError when malformed.
  void validate(const Manifold& m) const;
};

struct PointResidual {
  std::vector<double> point;
  Tensor R;  // (1/2) L_X g - (1/2) q - phi g
  double norm = 0.0;
};

struct ResidualReport {
  std::vector<PointResidual> points;
  double sup = 0.0;
  std::size_t argmax = 0;
  double tolerance = 0.0;
  bool pass = false;
};

/// |T|_g for a symmetric 2-tensor.
double norm_sym2(const Tensor& T, const Tensor& ginv);

Tensor soliton_residual_at(const Manifold& m, const SolitonData& sd, std::span<const double> p);
ResidualReport extended_q_residual(const Manifold& m, const SolitonData& sd,
                                   const std::vector<std::vector<double>>& points, double tolerance);
/// (1/2) L_X g = (1/2)(kappa B + (1/12) Delta S g) + lambda g; requires n = 4
/// and a constant lambda.
ResidualReport bach_soliton_residual(const Manifold& m, const SolitonData& sd,
                                     const std::vector<std::vector<double>>& points, double tolerance);

/// Sample points plus, for compact manifolds whose rule is small enough,
/// the quadrature nodes.
std::vector<std::vector<double>> residual_points(const Manifold& m, std::size_t count, std::uint64_t seed,
                                                 std::size_t max_nodes = 4096);

struct SolitonSpec {
  Manifold manifold;
  SolitonData data;
  std::optional<double> tolerance;
};

/// {"manifold": name | path | manifold object, "X": [..] | "f": "..",
///  "phi": ".." | "lambda": num, "q": "bach_flow" | "bach" | "custom" |
///  "constructed" | "zero", "bach_scale": num, "q_components": [[..]],
///  "tolerance": num}
SolitonSpec soliton_from_json(const std::string& text);
SolitonSpec soliton_from_file(const std::string& path);

// ---------------------------------------------------------------------------
// Berger spheres and R x N^3

/// Fiber-fiber component of remark45_residual (the R x N^3 soliton condition) in the orthonormal
/// left-invariant frame. The residual is diagonal there and trace-free
/// (S is constant), so the base entries are -1/2 of this one and it is the
/// largest-magnitude component.
double berger_fiber_residual(double a);

struct Prop44Report {
  double lambda = 0.0;          // the lambda used in f
  double lambda_formula = 0.0;  // -(|Ric|^2 - S^2/3)/24 on N
  double lambda_mismatch = 0.0;
  double invariant_spread = 0.0;  // max spread of S_N and |Ric_N|^2 over the points
  double f1_second_derivative_residual = 0.0;
  double traced_residual = 0.0;  // sup |div X - (Delta S/6 + 4 lambda)|
  ResidualReport soliton;
  bool pass = false;
};

/// R x N^3 with f = 2 lambda t^2 + a t + b (+ S_N/6, a constant here).
/// Throws HypothesisError when S_N or |Ric_N|^2 vary over the points.
Prop44Report prop44_profile_check(const Manifold& m, double lambda, double a, double b,
                                  const std::vector<std::vector<double>>& points, const Tolerances& tol);

struct BergerSolution {
  bool bracketed = false;
  Interval interval;
  double a = 0.0;
  double lambda = 0.0;
  double fiber_residual = 0.0;
  double soliton_residual = 0.0;
  int iterations = 0;
  std::string message;
};

inline constexpr Interval kBergerDefaultInterval{0.2, 0.9};

/// Bisection + secant on berger_fiber_residual over a grid of sub-brackets;
/// returns the first root away from the round point a = 1. A missing
/// bracket is reported through `bracketed`, not thrown.
BergerSolution solve_berger_soliton(Interval search, const Tolerances& tol, std::size_t samples = 200,
                                    std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Named examples

struct NamedSoliton {
  std::string id;
  std::string description;
  std::string paper_anchor;
  Manifold manifold;
  SolitonData data;
  double tolerance = 0.0;
};

std::vector<std::string> soliton_example_ids();
NamedSoliton soliton_example(const std::string& id, const Tolerances& tol);

// ---------------------------------------------------------------------------
// K^2 x L^2

struct SurfaceCPoint {
  std::vector<double> point;
  std::vector<double> C;  // upper components
  double rho1 = 0.0, rho2 = 0.0;
  double offblock = 0.0;    // |mixed block of (1/2) L_C g|_g
  double tracefree = 0.0;   // |block trace-free parts|_g
};

struct SurfaceCReport {
  std::vector<SurfaceCPoint> points;
  double max_offblock = 0.0;
  double max_tracefree = 0.0;
};

/// C = X + (kappa/12)(grad S_K + grad S_L) and (1/2) L_C g split as
/// rho1 g_K + rho2 g_L plus residual.
SurfaceCReport surface_C_field(const Manifold& m, const std::vector<Expr>& X,
                               const std::vector<std::vector<double>>& points,
                               double bach_scale = kSurfaceBachScale);

struct SurfacePhiPoint {
  double phi_constructed = 0.0;  // from the K block with X tangent to L
  double phi_formula = 0.0;      // -(1/12)(Delta S_L + S_L^2/2) + S_K^2/24
  double phi_printed = 0.0;      // twice the above
  double l_block_residual = 0.0;
  double l_block_printed_residual = 0.0;
  double k_gradient = 0.0;  // |d S_K|, hypothesis
};

struct SurfacePhiReport {
  std::vector<SurfacePhiPoint> points;
  double max_phi_mismatch = 0.0;
  double max_l_block_residual = 0.0;
  double max_printed_phi_mismatch = 0.0;
  double max_printed_l_block_residual = 0.0;
};

/// Throws HypothesisError when S_K is not constant.
SurfacePhiReport surface_phi_check(const Manifold& m, const std::vector<std::vector<double>>& points,
                            const Tolerances& tol, double bach_scale = kSurfaceBachScale);

struct SplittingReport {
  double split_mixed = 0.0;    // sup |mixed Hess| of the split f
  double control_mixed = 0.0;  // same for the non-split control
  double constant_hess = 0.0;  // sup |Hess| of a constant
  bool pass = false;
};

SplittingReport splitting_spotcheck(const Manifold& m, const Expr& split_f, const Expr& control_f,
                                    const std::vector<std::vector<double>>& points, double tolerance);

}  // namespace bachlab
