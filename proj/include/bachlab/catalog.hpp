#pragma once

// Manifold specifications, the catalog of named examples, and quadrature.
//
// A ChartSpec is one coordinate chart: names, a box, per-coordinate
// periodicity, metric entries as expressions, and parameters. A Manifold is
// an ordered product of charts with a block-diagonal metric; a single chart
// is the one-factor case.
//
// Quadrature is a tensor product of 1-D rules: trapezoid on periodic
// coordinates, Gauss-Legendre on the others, and Gauss-Legendre in cos(angle)
// on polar coordinates (the usual Gauss grid on spheres), which keeps nodes
// O(1/N) rather than O(1/N^2) from the poles. Weights include sqrt(det g).

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bachlab/curvature.hpp"
#include "bachlab/expr.hpp"
#include "bachlab/sampling.hpp"

namespace bachlab {

struct ChartSpec {
  std::string kind;
  std::vector<std::string> coords;
  std::vector<Interval> box;
  std::vector<bool> periodic;
  /// Polar coordinates (a density vanishing like sin at both ends, e.g. a
  /// sphere's theta) get Gauss-Legendre nodes in cos of the rescaled angle.
  std::vector<bool> polar;
  std::vector<Expr> g;  // n*n, row-major, symmetric
  ParamMap params;
  bool compact = false;      // the box with its periodicity is a closed manifold
  std::vector<int> resolution;  // quadrature nodes per coordinate
  double sample_margin = 0.05;  // fraction of each side kept away from in sampling
  std::optional<double> volume;  // closed form, when known
  std::string volume_formula;

  int dim() const { return static_cast<int>(coords.size()); }
  Symbols symbols() const;
  /// Throws SpecError on malformed shapes, DomainError on a non-positive
  /// metric at the box center.
  void validate() const;
};

/// Nodes and weights of a tensor-product rule, nodes stored flat.
struct QuadratureRule {
  int dim = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return weights.size(); }
  std::span<const double> node(std::size_t i) const {
    return {nodes.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

class Manifold {
 public:
  Manifold() = default;
  Manifold(std::string name, std::vector<ChartSpec> factors);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const std::vector<ChartSpec>& factors() const { return factors_; }
  /// First product coordinate belonging to factor k.
  int factor_offset(std::size_t k) const { return offsets_[k]; }
  const std::vector<std::string>& coordinates() const { return coords_; }
  const std::vector<Interval>& box() const { return box_; }
  const ParamMap& params() const { return params_; }
  Symbols symbols() const { return {coords_, param_names_}; }
  bool compact() const;
  std::optional<double> volume() const;

  /// Scalar expression over the product coordinates.
  Expr parse(std::string_view text) const { return Expr::parse(text, symbols()); }

  Tensor metric_values(std::span<const double> p) const;
  MetricJet metric_jet(std::span<const double> p, int order) const;
  Jet scalar_jet(const Expr& e, std::span<const double> p, int order) const;
  /// Rank-1 jet tensor from component expressions.
  JetTensor vector_jet(const std::vector<Expr>& comps, std::span<const double> p, int order) const;

  /// Copy with every quadrature resolution multiplied by s (rounded, >= 2).
  Manifold with_resolution_scale(double s) const;
  /// 2N+1 nodes per axis; shares no aliasing frequencies with the N-point
  /// periodic rule it refines.
  Manifold with_refined_resolution() const;

  /// Tensor-product rule with every factor resolution multiplied by `refine`.
  QuadratureRule quadrature(int refine = 1) const;
  /// Deterministic interior sample points.
  std::vector<std::vector<double>> sample_points(std::size_t count, std::uint64_t seed) const;

  /// Inside the sampling region: non-periodic coordinates at least
  /// sample_margin * length away from the box ends.
  bool in_sample_region(std::span<const double> p) const;

  /// Project a product point onto factor k.
  std::vector<double> factor_point(std::size_t k, std::span<const double> p) const;

 private:
  std::string name_;
  std::vector<ChartSpec> factors_;
  std::vector<int> offsets_;
  std::vector<std::string> coords_;
  std::vector<std::string> param_names_;
  std::vector<Interval> box_;
  ParamMap params_;
  int dim_ = 0;
};

/// sum_i w_i f(p_i); values are computed with parallel_map and summed by the
/// blocked dot kernel, so the result is bit-reproducible per resolution.
double integrate(const QuadratureRule& q, const std::function<double(std::span<const double>)>& f);
/// Several integrands in one pass; f writes `count` values per node.
std::vector<double> integrate_many(const QuadratureRule& q, std::size_t count,
                                   const std::function<void(std::span<const double>, std::span<double>)>& f);

// ---------------------------------------------------------------------------
// Catalog

namespace charts {
ChartSpec euclidean(int n, double extent = 2.0);
ChartSpec line(double extent = 2.0);
ChartSpec circle(double length = 2.0 * 3.141592653589793);
/// dim 2: (theta, phi); dim 3: Euler chart (phi, theta, psi); dim 4:
/// hyperspherical (chi, psi, theta, phi).
ChartSpec round_sphere(int dim, double r = 1.0);
/// Upper half plane (x, y), curvature -1/r^2; pointwise use only.
ChartSpec hyperbolic_2(double r = 1.0);
ChartSpec flat_torus(const std::vector<double>& lengths);
/// Left-invariant metric on SU(2) in the Euler chart (phi, theta, psi):
/// g = (1/4)[dtheta^2 + sin^2 theta dphi^2 + a^2 (dpsi + cos theta dphi)^2].
/// The psi (fiber) direction carries a^2; a = 1 is the unit round S^3.
ChartSpec berger_sphere(double a);
/// dt^2 + rho(t)^2 dtheta^2 on t in [t0, t1].
ChartSpec surface_of_revolution(const std::string& rho, double t0 = 0.0, double t1 = 3.141592653589793,
                                bool closed = true);
/// e^{2u} r^2 (dtheta^2 + sin^2 theta dphi^2), u over (theta, phi).
ChartSpec conformal_round_sphere(const std::string& u, double r = 1.0);
/// Fully user-defined chart.
ChartSpec custom(const std::vector<std::string>& coords, const std::vector<Interval>& box,
                 const std::vector<bool>& periodic, const std::vector<std::vector<std::string>>& metric,
                 const ParamMap& params, bool compact);
}  // namespace charts

struct CatalogEntry {
  std::string name;
  std::string description;
  int dim;
  std::string parameters;  // human-readable defaults
  std::string volume;
};

const std::vector<CatalogEntry>& catalog();

/// Named manifold with default parameters, e.g. "r2xs2", "round_sphere".
/// Throws SpecError for unknown names.
Manifold named_manifold(const std::string& name);

/// Manifold from a JSON document {"name", "factors": [{"kind", "params",
/// "resolution"}]}; unknown fields are rejected with SpecError.
Manifold manifold_from_json(const std::string& text);
Manifold manifold_from_file(const std::string& path);
/// A catalog name, or a path ending in .json.
Manifold manifold_from_ref(const std::string& ref);

}  // namespace bachlab
