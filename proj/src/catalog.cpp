#include "bachlab/catalog.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spec_json.hpp"

#include "bachlab/error.hpp"
#include "bachlab/parallel.hpp"
#include "bachlab/simd/jet_kernels.hpp"

namespace bachlab {

using json = nlohmann::json;
using std::numbers::pi;

namespace {

ChartSpec make_chart(std::string kind, std::vector<std::string> coords, std::vector<Interval> box,
                     std::vector<bool> periodic, const std::vector<std::vector<std::string>>& metric, ParamMap params,
                     bool compact, std::vector<int> resolution) {
  ChartSpec c;
  c.kind = std::move(kind);
  c.coords = std::move(coords);
  c.box = std::move(box);
  c.periodic = std::move(periodic);
  c.params = std::move(params);
  c.compact = compact;
  c.resolution = std::move(resolution);
  c.polar.assign(c.coords.size(), false);
  const Symbols sym = c.symbols();
  const std::size_t n = c.coords.size();
  if (metric.size() != n) throw SpecError("metric must have " + std::to_string(n) + " rows");
  for (const auto& row : metric) {
    if (row.size() != n) throw SpecError("metric rows must have " + std::to_string(n) + " entries");
    for (const auto& entry : row) c.g.push_back(Expr::parse(entry, sym));
  }
  c.validate();
  return c;
}

std::vector<std::vector<std::string>> diagonal(const std::vector<std::string>& d) {
  std::vector<std::vector<std::string>> m(d.size(), std::vector<std::string>(d.size(), "0"));
  for (std::size_t i = 0; i < d.size(); ++i) m[i][i] = d[i];
  return m;
}

// sqrt(det g) through Cholesky; throws DomainError if not positive definite.
double sqrt_det(const Tensor& g) {
  const int n = g.n();
  std::vector<double> L(static_cast<std::size_t>(n * n), 0.0);
  double det = 1.0;
  for (int j = 0; j < n; ++j) {
    double d = g(j, j);
    for (int k = 0; k < j; ++k) d -= L[static_cast<std::size_t>(j * n + k)] * L[static_cast<std::size_t>(j * n + k)];
    if (!(d > 0.0)) throw DomainError("metric is not positive definite at a quadrature node");
    const double ljj = std::sqrt(d);
    L[static_cast<std::size_t>(j * n + j)] = ljj;
    det *= ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = g(i, j);
      for (int k = 0; k < j; ++k) s -= L[static_cast<std::size_t>(i * n + k)] * L[static_cast<std::size_t>(j * n + k)];
      L[static_cast<std::size_t>(i * n + j)] = s / ljj;
    }
  }
  return det;
}

struct Rule1D {
  std::vector<double> x, w;
};

Rule1D rule_1d(const Interval& iv, bool periodic, bool polar, int n) {
  if (n < 1) throw SpecError("quadrature resolution must be positive");
  Rule1D r;
  r.x.resize(static_cast<std::size_t>(n));
  r.w.resize(static_cast<std::size_t>(n));
  if (periodic) {
    const double h = iv.length() / n;
    for (int i = 0; i < n; ++i) {
      r.x[static_cast<std::size_t>(i)] = iv.lo + i * h;
      r.w[static_cast<std::size_t>(i)] = h;
    }
    return r;
  }
  // Golub-Welsch rule; the glfixed tables lose ~1e-11 for untabulated n.
  const double lo = polar ? -1.0 : iv.lo, hi = polar ? 1.0 : iv.hi;
  std::unique_ptr<gsl_integration_fixed_workspace, decltype(&gsl_integration_fixed_free)> t(
      gsl_integration_fixed_alloc(gsl_integration_fixed_legendre, static_cast<std::size_t>(n), lo, hi, 0.0, 0.0),
      &gsl_integration_fixed_free);
  if (!t) throw NumericalError("could not build Gauss-Legendre rule");
  const double* x = gsl_integration_fixed_nodes(t.get());
  const double* w = gsl_integration_fixed_weights(t.get());
  r.x.assign(x, x + n);
  r.w.assign(w, w + n);
  if (polar) {
    // s = lo + (L/pi) acos(z), ds = (L/pi) dz / sqrt(1 - z^2)
    const double k = iv.length() / pi;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      const double z = r.x[i];
      r.x[i] = iv.lo + k * std::acos(z);
      r.w[i] *= k / std::sqrt((1.0 - z) * (1.0 + z));
    }
  }
  return r;
}

}  // namespace

Symbols ChartSpec::symbols() const {
  Symbols s;
  s.coordinates = coords;
  for (const auto& [k, v] : params) s.parameters.push_back(k);
  return s;
}

void ChartSpec::validate() const {
  const std::size_t n = coords.size();
  if (n < 1 || n > static_cast<std::size_t>(kMaxJetDim))
    throw SpecError("chart dimension must be between 1 and " + std::to_string(kMaxJetDim));
  if (box.size() != n || periodic.size() != n || resolution.size() != n)
    throw SpecError("chart '" + kind + "': box, periodic and resolution need one entry per coordinate");
  if (!polar.empty() && polar.size() != n) throw SpecError("chart '" + kind + "': polar needs one entry per coordinate");
  for (std::size_t i = 0; i < polar.size(); ++i)
    if (polar[i] && periodic[i]) throw SpecError("chart '" + kind + "': a coordinate cannot be both periodic and polar");
  if (g.size() != n * n) throw SpecError("chart '" + kind + "': metric has the wrong number of entries");
  for (const auto& iv : box)
    if (!(iv.hi > iv.lo)) throw SpecError("chart '" + kind + "': empty coordinate interval");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!g[i * n + j].same_tree(g[j * n + i]))
        throw SpecError("chart '" + kind + "': metric entries (" + std::to_string(i) + "," + std::to_string(j) +
                        ") and (" + std::to_string(j) + "," + std::to_string(i) + ") differ");
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = 0.5 * (box[i].lo + box[i].hi);
  Tensor gv(static_cast<int>(n), 2);
  for (std::size_t k = 0; k < n * n; ++k) gv[k] = g[k].eval(c, params);
  try {
    sqrt_det(gv);
  } catch (const DomainError&) {
    throw DomainError("chart '" + kind + "': metric is not positive definite at the box center");
  }
}

// ---------------------------------------------------------------------------

Manifold::Manifold(std::string name, std::vector<ChartSpec> factors) : name_(std::move(name)), factors_(std::move(factors)) {
  if (factors_.empty()) throw SpecError("manifold needs at least one factor");
  std::set<std::string> used_coords, used_params;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    const ChartSpec& f = factors_[k];
    f.validate();
    offsets_.push_back(dim_);
    dim_ += f.dim();
    for (std::size_t i = 0; i < f.coords.size(); ++i) {
      std::string c = f.coords[i];
      if (used_coords.count(c)) c += "_" + std::to_string(k + 1);
      if (used_coords.count(c)) throw SpecError("cannot disambiguate coordinate '" + f.coords[i] + "'");
      used_coords.insert(c);
      coords_.push_back(c);
      box_.push_back(f.box[i]);
    }
    for (const auto& [p, v] : f.params) {
      std::string q = p;
      if (used_params.count(q)) q += "_" + std::to_string(k + 1);
      used_params.insert(q);
      params_[q] = v;
      param_names_.push_back(q);
    }
  }
  if (dim_ > kMaxJetDim) throw SpecError("product dimension exceeds " + std::to_string(kMaxJetDim));
}

bool Manifold::compact() const {
  for (const auto& f : factors_)
    if (!f.compact) return false;
  return true;
}

std::optional<double> Manifold::volume() const {
  double v = 1.0;
  for (const auto& f : factors_) {
    if (!f.volume) return std::nullopt;
    v *= *f.volume;
  }
  return v;
}

std::vector<double> Manifold::factor_point(std::size_t k, std::span<const double> p) const {
  const int off = offsets_[k];
  return {p.begin() + off, p.begin() + off + factors_[k].dim()};
}

Tensor Manifold::metric_values(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim_) throw SpecError("point has the wrong number of coordinates");
  Tensor g(dim_, 2, 0.0);
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    const ChartSpec& f = factors_[k];
    const int off = offsets_[k];
    const int n = f.dim();
    const std::vector<double> fp = factor_point(k, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(off + i, off + j) = f.g[static_cast<std::size_t>(i * n + j)].eval(fp, f.params);
  }
  return g;
}

MetricJet Manifold::metric_jet(std::span<const double> p, int order) const {
  if (static_cast<int>(p.size()) != dim_) throw SpecError("point has the wrong number of coordinates");
  JetTensor g(dim_, 2, Jet(dim_, order));
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    const ChartSpec& f = factors_[k];
    const int off = offsets_[k];
    const int n = f.dim();
    std::vector<int> map(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) map[static_cast<std::size_t>(i)] = off + i;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        g(off + i, off + j) = eval_jet(f.g[static_cast<std::size_t>(i * n + j)], p, f.params, dim_, order, map);
        g(off + j, off + i) = g(off + i, off + j);
      }
  }
  return MetricJet::from_components(std::move(g));
}

Jet Manifold::scalar_jet(const Expr& e, std::span<const double> p, int order) const {
  return eval_jet(e, p, params_, dim_, order);
}

JetTensor Manifold::vector_jet(const std::vector<Expr>& comps, std::span<const double> p, int order) const {
  if (static_cast<int>(comps.size()) != dim_)
    throw SpecError("vector field needs " + std::to_string(dim_) + " components, got " + std::to_string(comps.size()));
  JetTensor v(dim_, 1, Jet(dim_, order));
  for (int i = 0; i < dim_; ++i) v(i) = scalar_jet(comps[static_cast<std::size_t>(i)], p, order);
  return v;
}

QuadratureRule Manifold::quadrature(int refine) const {
  if (!compact()) throw SpecError("manifold '" + name_ + "' has a non-compact factor; no quadrature");
  if (refine < 1) throw SpecError("quadrature refinement must be >= 1");
  std::vector<Rule1D> rules;
  for (const auto& f : factors_)
    for (int i = 0; i < f.dim(); ++i)
      rules.push_back(rule_1d(f.box[static_cast<std::size_t>(i)], f.periodic[static_cast<std::size_t>(i)],
                              !f.polar.empty() && f.polar[static_cast<std::size_t>(i)],
                              f.resolution[static_cast<std::size_t>(i)] * refine));
  std::size_t total = 1;
  for (const auto& r : rules) total *= r.x.size();

  QuadratureRule q;
  q.dim = dim_;
  q.nodes.resize(total * static_cast<std::size_t>(dim_));
  std::vector<double> base(total);
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rem = k;
    double w = 1.0;
    for (int d = dim_ - 1; d >= 0; --d) {
      const auto& r = rules[static_cast<std::size_t>(d)];
      const std::size_t i = rem % r.x.size();
      rem /= r.x.size();
      q.nodes[k * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(d)] = r.x[i];
      w *= r.w[i];
    }
    base[k] = w;
  }
  q.weights = parallel_map(total, [&](std::size_t k) { return base[k] * sqrt_det(metric_values(q.node(k))); });
  return q;
}

std::vector<std::vector<double>> Manifold::sample_points(std::size_t count, std::uint64_t seed) const {
  std::vector<Interval> shrunk;
  for (const auto& f : factors_)
    for (int i = 0; i < f.dim(); ++i) {
      Interval iv = f.box[static_cast<std::size_t>(i)];
      if (!f.periodic[static_cast<std::size_t>(i)]) {
        const double m = f.sample_margin * iv.length();
        iv.lo += m;
        iv.hi -= m;
      }
      shrunk.push_back(iv);
    }
  return halton_points(shrunk, count, seed, 0.0);
}

double integrate(const QuadratureRule& q, const std::function<double(std::span<const double>)>& f) {
  const std::vector<double> values = parallel_map(q.size(), [&](std::size_t k) { return f(q.node(k)); });
  return simd::active().dot(q.weights.data(), values.data(), values.size());
}

std::vector<double> integrate_many(const QuadratureRule& q, std::size_t count,
                                   const std::function<void(std::span<const double>, std::span<double>)>& f) {
  const std::vector<std::vector<double>> rows = parallel_map(q.size(), [&](std::size_t k) {
    std::vector<double> v(count, 0.0);
    f(q.node(k), v);
    return v;
  });
  std::vector<double> out(count), column(q.size());
  for (std::size_t c = 0; c < count; ++c) {
    for (std::size_t k = 0; k < q.size(); ++k) column[k] = rows[k][c];
    out[c] = simd::active().dot(q.weights.data(), column.data(), column.size());
  }
  return out;
}

bool Manifold::in_sample_region(std::span<const double> p) const {
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    const ChartSpec& f = factors_[k];
    for (int i = 0; i < f.dim(); ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (f.periodic[ui]) continue;
      const Interval iv = f.box[ui];
      const double m = f.sample_margin * iv.length();
      const double x = p[static_cast<std::size_t>(offsets_[k] + i)];
      if (x < iv.lo + m || x > iv.hi - m) return false;
    }
  }
  return true;
}

Manifold Manifold::with_resolution_scale(double s) const {
  std::vector<ChartSpec> f = factors_;
  for (auto& c : f)
    for (auto& r : c.resolution) r = std::max(2, static_cast<int>(std::lround(r * s)));
  Manifold m(name_, std::move(f));
  return m;
}

Manifold Manifold::with_refined_resolution() const {
  std::vector<ChartSpec> f = factors_;
  for (auto& c : f)
    for (auto& r : c.resolution) r = 2 * r + 1;
  return Manifold(name_, std::move(f));
}

// ---------------------------------------------------------------------------

namespace charts {

ChartSpec euclidean(int n, double extent) {
  static const char* names[] = {"x", "y", "z", "w"};
  if (n < 1 || n > 4) throw SpecError("euclidean dimension must be 1..4");
  std::vector<std::string> c(names, names + n);
  ChartSpec s = make_chart("euclidean", c, std::vector<Interval>(static_cast<std::size_t>(n), {-extent, extent}),
                           std::vector<bool>(static_cast<std::size_t>(n), false),
                           diagonal(std::vector<std::string>(static_cast<std::size_t>(n), "1")), {}, false,
                           std::vector<int>(static_cast<std::size_t>(n), 16));
  s.sample_margin = 0.0;
  return s;
}

ChartSpec line(double extent) {
  ChartSpec s = make_chart("line", {"t"}, {{-extent, extent}}, {false}, {{"1"}}, {}, false, {16});
  s.sample_margin = 0.0;
  return s;
}

ChartSpec circle(double length) {
  if (!(length > 0)) throw SpecError("circle length must be positive");
  ChartSpec s = make_chart("circle", {"t"}, {{0.0, length}}, {true}, {{"1"}}, {}, true, {32});
  s.volume = length;
  s.volume_formula = "L";
  return s;
}

ChartSpec round_sphere(int dim, double r) {
  if (!(r > 0)) throw SpecError("sphere radius must be positive");
  ParamMap p{{"r", r}};
  ChartSpec s;
  switch (dim) {
    case 2:
      s = make_chart("round_sphere", {"theta", "phi"}, {{0, pi}, {0, 2 * pi}}, {false, true},
                     diagonal({"r^2", "r^2*sin(theta)^2"}), p, true, {40, 80});
      s.polar = {true, false};
      s.volume = 4 * pi * r * r;
      s.volume_formula = "4 pi r^2";
      return s;
    case 3:
      s = make_chart("round_sphere", {"phi", "theta", "psi"}, {{0, 2 * pi}, {0, pi}, {0, 4 * pi}}, {true, false, true},
                     {{"r^2/4", "0", "r^2*cos(theta)/4"}, {"0", "r^2/4", "0"}, {"r^2*cos(theta)/4", "0", "r^2/4"}}, p,
                     true, {16, 24, 32});
      s.polar = {false, true, false};
      s.volume = 2 * pi * pi * r * r * r;
      s.volume_formula = "2 pi^2 r^3";
      return s;
    case 4:
      s = make_chart("round_sphere", {"chi", "psi", "theta", "phi"}, {{0, pi}, {0, pi}, {0, pi}, {0, 2 * pi}},
                     {false, false, false, true},
                     diagonal({"r^2", "r^2*sin(chi)^2", "r^2*sin(chi)^2*sin(psi)^2",
                               "r^2*sin(chi)^2*sin(psi)^2*sin(theta)^2"}),
                     p, true, {16, 16, 16, 16});
      s.polar = {true, false, true, false};  // psi carries sin^2: plain Gauss-Legendre
      s.volume = 8 * pi * pi * r * r * r * r / 3;
      s.volume_formula = "8 pi^2 r^4 / 3";
      return s;
    default: throw SpecError("round_sphere dimension must be 2, 3 or 4");
  }
}

ChartSpec hyperbolic_2(double r) {
  if (!(r > 0)) throw SpecError("hyperbolic radius must be positive");
  ChartSpec s = make_chart("hyperbolic_2", {"x", "y"}, {{-1.0, 1.0}, {0.5, 2.0}}, {false, false},
                           diagonal({"r^2/y^2", "r^2/y^2"}), {{"r", r}}, false, {16, 16});
  s.sample_margin = 0.0;
  return s;
}

ChartSpec flat_torus(const std::vector<double>& lengths) {
  static const char* names[] = {"x", "y", "z", "w"};
  const std::size_t n = lengths.size();
  if (n < 1 || n > 4) throw SpecError("flat_torus needs 1..4 lengths");
  std::vector<Interval> box;
  double vol = 1.0;
  for (double L : lengths) {
    if (!(L > 0)) throw SpecError("torus lengths must be positive");
    box.push_back({0.0, L});
    vol *= L;
  }
  ChartSpec s = make_chart("flat_torus", std::vector<std::string>(names, names + n), box, std::vector<bool>(n, true),
                           diagonal(std::vector<std::string>(n, "1")), {}, true, std::vector<int>(n, 48));
  s.volume = vol;
  s.volume_formula = "product of lengths";
  return s;
}

ChartSpec berger_sphere(double a) {
  if (!(a > 0)) throw SpecError("Berger parameter a must be positive");
  ChartSpec s = make_chart("berger_sphere", {"phi", "theta", "psi"}, {{0, 2 * pi}, {0, pi}, {0, 4 * pi}},
                           {true, false, true},
                           {{"(sin(theta)^2 + a^2*cos(theta)^2)/4", "0", "a^2*cos(theta)/4"},
                            {"0", "1/4", "0"},
                            {"a^2*cos(theta)/4", "0", "a^2/4"}},
                           {{"a", a}}, true, {16, 24, 32});
  s.polar = {false, true, false};
  s.volume = 2 * pi * pi * a;
  s.volume_formula = "2 pi^2 a";
  return s;
}

ChartSpec surface_of_revolution(const std::string& rho, double t0, double t1, bool closed) {
  const Expr r = Expr::parse(rho, Symbols{{"t"}, {}});
  const std::string rs = "(" + r.to_string() + ")^2";
  ChartSpec s = make_chart("surface_of_revolution", {"t", "theta"}, {{t0, t1}, {0, 2 * pi}}, {false, true},
                           diagonal({"1", rs}), {}, closed, {48, 32});
  s.polar = {closed, false};
  return s;
}

ChartSpec conformal_round_sphere(const std::string& u, double r) {
  const Expr ue = Expr::parse(u, Symbols{{"theta", "phi"}, {"r"}});
  const std::string f = "exp(2*(" + ue.to_string() + "))*r^2";
  ChartSpec s = make_chart("conformal_round_sphere", {"theta", "phi"}, {{0, pi}, {0, 2 * pi}}, {false, true},
                           diagonal({f, f + "*sin(theta)^2"}), {{"r", r}}, true, {40, 80});
  s.polar = {true, false};
  return s;
}

ChartSpec custom(const std::vector<std::string>& coords, const std::vector<Interval>& box,
                 const std::vector<bool>& periodic, const std::vector<std::vector<std::string>>& metric,
                 const ParamMap& params, bool compact) {
  return make_chart("chart", coords, box, periodic, metric, params, compact,
                    std::vector<int>(coords.size(), 32));
}

}  // namespace charts

// ---------------------------------------------------------------------------

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> c = {
      {"euclidean", "flat R^n on a box (pointwise only)", 4, "n=4, extent=2", "-"},
      {"line", "flat R on [-2,2] (pointwise only)", 1, "extent=2", "-"},
      {"circle", "S^1 of length L", 1, "length=2 pi", "L"},
      {"round_sphere", "round S^2(r) in (theta, phi)", 2, "r=1", "4 pi r^2"},
      {"round_sphere3", "round S^3(r) in the Euler chart (phi, theta, psi)", 3, "r=1", "2 pi^2 r^3"},
      {"round_sphere4", "round S^4(r) in hyperspherical coordinates", 4, "r=1", "8 pi^2 r^4 / 3"},
      {"hyperbolic_2", "H^2(-1/r^2), upper half plane (pointwise only)", 2, "r=1", "-"},
      {"flat_torus", "flat T^2 = R^2 / (2 pi Z)^2", 2, "lengths=[2 pi, 2 pi]", "product of lengths"},
      {"flat_torus3", "flat T^3 = R^3 / (2 pi Z)^3", 3, "lengths=[2 pi, 2 pi, 2 pi]", "product of lengths"},
      {"berger_sphere", "left-invariant SU(2) metric, fiber scaled by a", 3, "a=1.5", "2 pi^2 a"},
      {"surface_of_revolution", "dt^2 + rho(t)^2 dtheta^2", 2, "rho=sin(t), t in [0, pi]", "2 pi int rho dt"},
      {"conformal_round_sphere", "e^{2u} g_{S^2}", 2, "u=0.2*cos(theta), r=1", "int e^{2u} dvol"},
      {"r2xs2", "R^2 x S^2(1) (Ho soliton background)", 4, "-", "-"},
      {"r2xh2", "R^2 x H^2(-1) (Ho soliton background)", 4, "-", "-"},
      {"line_x_berger", "R x SU(2) with the Berger metric", 4, "a=1.5", "-"},
      {"circle_x_berger", "S^1 x SU(2) with the Berger metric", 4, "a=1.5", "2 pi * 2 pi^2 a"},
      {"s2xs2", "S^2(1) x S^2(1)", 4, "-", "16 pi^2"},
      {"s1xs3", "S^1 x S^3(1)", 4, "-", "4 pi^3"},
      {"k2xl2", "conformal sphere x surface of revolution", 4, "u=0.2*cos(theta), rho=sin(t)", "-"},
  };
  return c;
}

Manifold named_manifold(const std::string& name) {
  if (name == "euclidean") return {name, {charts::euclidean(4)}};
  if (name == "line") return {name, {charts::line()}};
  if (name == "circle") return {name, {charts::circle()}};
  if (name == "round_sphere") return {name, {charts::round_sphere(2)}};
  if (name == "round_sphere3") return {name, {charts::round_sphere(3)}};
  if (name == "round_sphere4") return {name, {charts::round_sphere(4)}};
  if (name == "hyperbolic_2") return {name, {charts::hyperbolic_2()}};
  if (name == "flat_torus") return {name, {charts::flat_torus({2 * pi, 2 * pi})}};
  if (name == "flat_torus3") return {name, {charts::flat_torus({2 * pi, 2 * pi, 2 * pi})}};
  if (name == "berger_sphere") return {name, {charts::berger_sphere(1.5)}};
  if (name == "surface_of_revolution") return {name, {charts::surface_of_revolution("sin(t)")}};
  if (name == "conformal_round_sphere") return {name, {charts::conformal_round_sphere("0.2*cos(theta)")}};
  if (name == "r2xs2") return {name, {charts::euclidean(2), charts::round_sphere(2)}};
  if (name == "r2xh2") return {name, {charts::euclidean(2), charts::hyperbolic_2()}};
  if (name == "line_x_berger") return {name, {charts::line(), charts::berger_sphere(1.5)}};
  if (name == "circle_x_berger") return {name, {charts::circle(), charts::berger_sphere(1.5)}};
  if (name == "s2xs2") return {name, {charts::round_sphere(2), charts::round_sphere(2)}};
  if (name == "s1xs3") return {name, {charts::circle(), charts::round_sphere(3)}};
  if (name == "k2xl2")
    return {name, {charts::conformal_round_sphere("0.2*cos(theta)"), charts::surface_of_revolution("sin(t)")}};
  throw SpecError("unknown catalog name '" + name + "'");
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using detail::num;
using detail::reject_unknown;
using detail::str;

ChartSpec factor_from_json(const json& f) {
  reject_unknown(f, {"kind", "params", "resolution"}, "factor");
  if (!f.contains("kind") || !f["kind"].is_string()) throw SpecError("factor needs a string 'kind'");
  const std::string kind = f["kind"].get<std::string>();
  const json p = f.value("params", json::object());
  ChartSpec c;
  if (kind == "euclidean") {
    reject_unknown(p, {"n", "extent"}, "euclidean params");
    c = charts::euclidean(static_cast<int>(num(p, "n", 2)), num(p, "extent", 2.0));
  } else if (kind == "line") {
    reject_unknown(p, {"extent"}, "line params");
    c = charts::line(num(p, "extent", 2.0));
  } else if (kind == "circle") {
    reject_unknown(p, {"length"}, "circle params");
    c = charts::circle(num(p, "length", 2 * pi));
  } else if (kind == "round_sphere") {
    reject_unknown(p, {"dim", "r"}, "round_sphere params");
    c = charts::round_sphere(static_cast<int>(num(p, "dim", 2)), num(p, "r", 1.0));
  } else if (kind == "hyperbolic_2") {
    reject_unknown(p, {"r"}, "hyperbolic_2 params");
    c = charts::hyperbolic_2(num(p, "r", 1.0));
  } else if (kind == "flat_torus") {
    reject_unknown(p, {"lengths"}, "flat_torus params");
    std::vector<double> L{2 * pi, 2 * pi};
    if (p.contains("lengths")) {
      if (!p["lengths"].is_array()) throw SpecError("flat_torus lengths must be an array");
      L = p["lengths"].get<std::vector<double>>();
    }
    c = charts::flat_torus(L);
  } else if (kind == "berger_sphere") {
    reject_unknown(p, {"a"}, "berger_sphere params");
    c = charts::berger_sphere(num(p, "a", 1.5));
  } else if (kind == "surface_of_revolution") {
    reject_unknown(p, {"rho", "t0", "t1", "closed"}, "surface_of_revolution params");
    const bool closed = p.contains("closed") ? p["closed"].get<bool>() : true;
    c = charts::surface_of_revolution(str(p, "rho", "sin(t)"), num(p, "t0", 0.0), num(p, "t1", pi), closed);
  } else if (kind == "conformal_round_sphere") {
    reject_unknown(p, {"u", "r"}, "conformal_round_sphere params");
    c = charts::conformal_round_sphere(str(p, "u", "0"), num(p, "r", 1.0));
  } else if (kind == "chart") {
    reject_unknown(p, {"coords", "box", "periodic", "polar", "metric", "parameters", "compact"}, "chart params");
    try {
      const auto coords = p.at("coords").get<std::vector<std::string>>();
      std::vector<Interval> box;
      for (const auto& b : p.at("box")) {
        const auto v = b.get<std::vector<double>>();
        if (v.size() != 2) throw SpecError("box entries are [lo, hi] pairs");
        box.push_back({v[0], v[1]});
      }
      const auto periodic = p.contains("periodic") ? p["periodic"].get<std::vector<bool>>()
                                                   : std::vector<bool>(coords.size(), false);
      const auto metric = p.at("metric").get<std::vector<std::vector<std::string>>>();
      ParamMap params;
      if (p.contains("parameters"))
        for (auto it = p["parameters"].begin(); it != p["parameters"].end(); ++it) params[it.key()] = it->get<double>();
      c = charts::custom(coords, box, periodic, metric, params, p.value("compact", false));
      if (p.contains("polar")) {
        c.polar = p["polar"].get<std::vector<bool>>();
        c.validate();
      }
    } catch (const json::exception& e) {
      throw SpecError(std::string("malformed chart params: ") + e.what());
    }
  } else {
    throw SpecError("unknown factor kind '" + kind + "'");
  }

  if (f.contains("resolution")) {
    const json& r = f["resolution"];
    if (!r.is_object()) throw SpecError("resolution must be an object");
    for (auto it = r.begin(); it != r.end(); ++it) {
      if (!it->is_number_integer() || it->get<int>() < 1) throw SpecError("resolution values must be positive integers");
      const int v = it->get<int>();
      if (it.key() == "n") {
        for (auto& x : c.resolution) x = v;
        continue;
      }
      bool found = false;
      for (std::size_t i = 0; i < c.coords.size(); ++i)
        if (c.coords[i] == it.key()) {
          c.resolution[i] = v;
          found = true;
        }
      if (!found) throw SpecError("resolution names unknown coordinate '" + it.key() + "'");
    }
  }
  return c;
}

}  // namespace

Manifold manifold_from_json(const std::string& text) {
  const json doc = detail::parse_json(text, "manifold spec");
  reject_unknown(doc, {"name", "factors"}, "manifold spec");
  if (!doc.contains("factors") || !doc["factors"].is_array() || doc["factors"].empty())
    throw SpecError("manifold spec needs a non-empty 'factors' array");
  std::vector<ChartSpec> factors;
  for (const auto& f : doc["factors"]) factors.push_back(factor_from_json(f));
  return Manifold(doc.value("name", std::string("manifold")), std::move(factors));
}

Manifold manifold_from_file(const std::string& path) { return manifold_from_json(detail::read_file(path)); }

Manifold manifold_from_ref(const std::string& ref) {
  if (ref.size() > 5 && ref.ends_with(".json")) return manifold_from_file(ref);
  return named_manifold(ref);
}

}  // namespace bachlab
