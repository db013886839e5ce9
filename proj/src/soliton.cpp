#include "bachlab/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "bachlab/error.hpp"
#include "bachlab/parallel.hpp"
#include "spec_json.hpp"

namespace bachlab {

using detail::json;

const char* to_string(QSelector q) {
  switch (q) {
    case QSelector::BachFlow: return "bach_flow";
    case QSelector::Bach: return "bach";
    case QSelector::Custom: return "custom";
    case QSelector::Constructed: return "constructed";
    case QSelector::Zero: return "zero";
  }
  return "?";
}

QSelector q_selector_from_string(const std::string& s) {
  if (s == "bach_flow") return QSelector::BachFlow;
  if (s == "bach") return QSelector::Bach;
  if (s == "custom") return QSelector::Custom;
  if (s == "constructed") return QSelector::Constructed;
  if (s == "zero") return QSelector::Zero;
  throw SpecError("unknown q selector '" + s + "'");
}

void SolitonData::validate(const Manifold& m) const {
  const auto n = static_cast<std::size_t>(m.dim());
  if (f && !X.empty()) throw SpecError("soliton data gives both X and f");
  if (!f && X.size() != n)
    throw SpecError("soliton data needs f or " + std::to_string(n) + " components of X, got " +
                    std::to_string(X.size()));
  if (q == QSelector::Custom && custom_q.size() != n * n)
    throw SpecError("custom q needs " + std::to_string(n * n) + " components");
  if (q != QSelector::Custom && !custom_q.empty()) throw SpecError("q components given for a non-custom q");
  if ((q == QSelector::BachFlow || q == QSelector::Bach || phi_lap_s != 0.0) && n != 4)
    throw SpecError("the Bach tensor is only used in dimension 4");
}

double norm_sym2(const Tensor& T, const Tensor& ginv) {
  const int n = T.n();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += ginv(i, k) * ginv(j, l) * T(i, j) * T(k, l);
  return std::sqrt(std::max(s, 0.0));
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct ResidualAt {
  Tensor R;
  Tensor ginv;
};

ResidualAt residual_with_metric(const Manifold& m, const SolitonData& sd, std::span<const double> p) {
  const int n = m.dim();
  const bool curvature = sd.q == QSelector::BachFlow || sd.q == QSelector::Bach || sd.phi_lap_s != 0.0;
  const MetricJet mj = m.metric_jet(p, curvature ? 4 : 2);
  std::optional<CurvaturePack> pk;
  if (curvature) pk = CurvaturePack::compute(mj);
  const JetTensor gamma = pk ? pk->christoffel() : christoffel(mj);

  Tensor half_lie(n, 2, 0.0);
  if (sd.gradient()) {
    half_lie = values(hessian_scalar(m.scalar_jet(*sd.f, p, 2), gamma));
  } else {
    half_lie = values(lie_derivative_metric(m.vector_jet(sd.X, p, 1), mj, gamma));
    for (auto& v : half_lie) v *= 0.5;
  }
  const Tensor g = values(mj.g);

  double phi = sd.phi ? sd.phi->eval(p, m.params()) : sd.lambda;
  if (sd.phi_lap_s != 0.0) phi += sd.phi_lap_s * pk->laplacian_scalar().value();

  Tensor q(n, 2, 0.0);
  switch (sd.q) {
    case QSelector::BachFlow:
    case QSelector::Bach: {
      const Tensor B = values(pk->bach());
      const double ls = sd.q == QSelector::BachFlow ? pk->laplacian_scalar().value() / 12.0 : 0.0;
      for (std::size_t k = 0; k < q.size(); ++k) q[k] = sd.bach_scale * B[k] + ls * g[k];
      break;
    }
    case QSelector::Custom:
      for (std::size_t k = 0; k < q.size(); ++k) q[k] = sd.custom_q[k].eval(p, m.params());
      break;
    case QSelector::Constructed:
      for (std::size_t k = 0; k < q.size(); ++k) q[k] = 2.0 * half_lie[k] - 2.0 * phi * g[k];
      break;
    case QSelector::Zero:
      break;
  }

  Tensor R(n, 2);
  for (std::size_t k = 0; k < R.size(); ++k) R[k] = half_lie[k] - 0.5 * q[k] - phi * g[k];
  return {std::move(R), values(mj.ginv)};
}

}  // namespace

Tensor soliton_residual_at(const Manifold& m, const SolitonData& sd, std::span<const double> p) {
  sd.validate(m);
  return residual_with_metric(m, sd, p).R;
}

ResidualReport extended_q_residual(const Manifold& m, const SolitonData& sd,
                                   const std::vector<std::vector<double>>& points, double tolerance) {
  sd.validate(m);
  ResidualReport rep;
  rep.tolerance = tolerance;
  rep.points = parallel_map(points.size(), [&](std::size_t i) {
    ResidualAt r = residual_with_metric(m, sd, points[i]);
    PointResidual pr;
    pr.point = points[i];
    pr.norm = norm_sym2(r.R, r.ginv);
    pr.R = std::move(r.R);
    return pr;
  });
  for (std::size_t i = 0; i < rep.points.size(); ++i)
    if (rep.points[i].norm > rep.sup) {
      rep.sup = rep.points[i].norm;
      rep.argmax = i;
    }
  rep.pass = rep.sup <= tolerance;
  return rep;
}

ResidualReport bach_soliton_residual(const Manifold& m, const SolitonData& sd,
                                     const std::vector<std::vector<double>>& points, double tolerance) {
  if (m.dim() != 4) throw SpecError("Bach solitons are four-dimensional; manifold has dimension " + std::to_string(m.dim()));
  if (sd.extended()) throw SpecError("Bach soliton residual takes a constant lambda, not phi");
  if (sd.q != QSelector::BachFlow) throw SpecError("Bach soliton residual uses q = bach_flow");
  return extended_q_residual(m, sd, points, tolerance);
}

std::vector<std::vector<double>> residual_points(const Manifold& m, std::size_t count, std::uint64_t seed,
                                                 std::size_t max_nodes) {
  std::vector<std::vector<double>> pts = m.sample_points(count, seed);
  if (!m.compact()) return pts;
  std::size_t total = 1;
  for (const auto& f : m.factors())
    for (int r : f.resolution) total *= static_cast<std::size_t>(r);
  if (total > max_nodes) return pts;
  const QuadratureRule q = m.quadrature(1);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto nd = q.node(i);
    pts.emplace_back(nd.begin(), nd.end());
  }
  return pts;
}

SolitonSpec soliton_from_json(const std::string& text) {
  const json doc = detail::parse_json(text, "soliton spec");
  detail::reject_unknown(doc, {"manifold", "X", "f", "phi", "lambda", "q", "bach_scale", "q_components", "tolerance"},
                         "soliton spec");
  if (!doc.contains("manifold")) throw SpecError("soliton spec needs 'manifold'");
  SolitonSpec spec;
  const json& mref = doc["manifold"];
  if (mref.is_string())
    spec.manifold = manifold_from_ref(mref.get<std::string>());
  else if (mref.is_object())
    spec.manifold = manifold_from_json(mref.dump());
  else
    throw SpecError("'manifold' must be a catalog name, a path or a manifold object");

  const Manifold& m = spec.manifold;
  SolitonData& sd = spec.data;
  try {
    if (doc.contains("X") && doc.contains("f")) throw SpecError("give either 'X' or 'f', not both");
    if (doc.contains("X"))
      for (const auto& c : doc["X"].get<std::vector<std::string>>()) sd.X.push_back(m.parse(c));
    else if (doc.contains("f"))
      sd.f = m.parse(doc["f"].get<std::string>());
    else
      throw SpecError("soliton spec needs 'X' or 'f'");
    if (doc.contains("phi") && doc.contains("lambda")) throw SpecError("give either 'phi' or 'lambda', not both");
    if (doc.contains("phi")) sd.phi = m.parse(doc["phi"].get<std::string>());
    sd.lambda = detail::num(doc, "lambda", 0.0);
    sd.q = q_selector_from_string(detail::str(doc, "q", "bach_flow"));
    sd.bach_scale = detail::num(doc, "bach_scale", 1.0);
    if (doc.contains("q_components"))
      for (const auto& row : doc["q_components"].get<std::vector<std::vector<std::string>>>())
        for (const auto& c : row) sd.custom_q.push_back(m.parse(c));
    if (doc.contains("tolerance")) spec.tolerance = detail::num(doc, "tolerance", 0.0);
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed soliton spec: ") + e.what());
  }
  sd.validate(m);
  return spec;
}

SolitonSpec soliton_from_file(const std::string& path) { return soliton_from_json(detail::read_file(path)); }

// ---------------------------------------------------------------------------

double berger_fiber_residual(double a) {
  const ChartSpec N = charts::berger_sphere(a);
  // left-invariant, so any interior point will do
  const double p[3] = {0.3, 1.1, 0.7};
  const FactorCurvature fc = factor_curvature(N, p);
  const Tensor R = remark45_residual(fc);
  return R(2, 2) / fc.g(2, 2);
}

Prop44Report prop44_profile_check(const Manifold& m, double lambda, double a, double b,
                                  const std::vector<std::vector<double>>& points, const Tolerances& tol) {
  if (m.factors().size() != 2 || m.factors()[0].dim() != 1 || m.factors()[1].dim() != 3)
    throw SpecError("profile check needs a line x N^3 product");
  if (points.empty()) throw SpecError("profile check needs sample points");
  Prop44Report rep;
  rep.lambda = lambda;

  const auto fcs = parallel_map(points.size(), [&](std::size_t i) { return factor_curvature(m, 1, points[i]); });
  double smin = fcs[0].s, smax = smin, rmin = fcs[0].ric_norm2, rmax = rmin;
  for (const auto& fc : fcs) {
    smin = std::min(smin, fc.s);
    smax = std::max(smax, fc.s);
    rmin = std::min(rmin, fc.ric_norm2);
    rmax = std::max(rmax, fc.ric_norm2);
  }
  rep.invariant_spread = std::max(smax - smin, rmax - rmin);
  const double scale = std::max({1.0, std::abs(smax), std::abs(rmax)});
  if (rep.invariant_spread > tol.pointwise_identity * scale)
    throw HypothesisError("S_N or |Ric_N|^2 is not constant (spread " + fmt(rep.invariant_spread) + ")");
  rep.lambda_formula = rn3_lambda(fcs[0]);
  rep.lambda_mismatch = std::abs(lambda - rep.lambda_formula);

  const std::string t = m.coordinates()[0];
  SolitonData sd;
  sd.f = m.parse(fmt(2.0 * lambda) + "*" + t + "^2 + " + fmt(a) + "*" + t + " + " + fmt(b) + " + " + fmt(fcs[0].s / 6.0));
  sd.lambda = lambda;
  sd.q = QSelector::BachFlow;
  sd.bach_scale = 1.0;

  struct Local {
    double f1, traced;
  };
  const auto loc = parallel_map(points.size(), [&](std::size_t i) {
    const CurvaturePack pk = CurvaturePack::compute(m.metric_jet(points[i], 4));
    const Jet f = m.scalar_jet(*sd.f, points[i], 2);
    const double f1 = f.derivative(0).derivative(0).value() - 4.0 * lambda;
    const double divx = laplacian_scalar(f, pk.metric(), pk.christoffel()).value();
    return Local{f1, divx - (pk.laplacian_scalar().value() / 6.0 + 4.0 * lambda)};
  });
  for (const auto& l : loc) {
    rep.f1_second_derivative_residual = std::max(rep.f1_second_derivative_residual, std::abs(l.f1));
    rep.traced_residual = std::max(rep.traced_residual, std::abs(l.traced));
  }
  rep.soliton = bach_soliton_residual(m, sd, points, tol.berger_residual);
  rep.pass = rep.lambda_mismatch <= tol.pointwise_identity && rep.f1_second_derivative_residual <= tol.pointwise_identity &&
             rep.traced_residual <= tol.pointwise_identity && rep.soliton.pass;
  return rep;
}

BergerSolution solve_berger_soliton(Interval search, const Tolerances& tol, std::size_t samples, std::uint64_t seed) {
  if (!(search.hi > search.lo) || search.lo <= 0.0) throw SpecError("Berger search interval must be a subset of (0, inf)");
  BergerSolution sol;
  sol.interval = search;

  constexpr int cells = 64;
  constexpr double round_exclusion = 1e-6;
  std::vector<double> xs(cells + 1), rs(cells + 1);
  for (int i = 0; i <= cells; ++i) {
    xs[i] = search.lo + (search.hi - search.lo) * i / cells;
    rs[i] = berger_fiber_residual(xs[i]);
  }

  std::optional<double> root;
  for (int i = 0; i < cells && !root; ++i) {
    double x;
    if (rs[i] == 0.0) {
      x = xs[i];
    } else if (rs[i] * rs[i + 1] < 0.0) {
      int it = 0;
      auto stop = [&](double lo, double hi) {
        ++it;
        return hi - lo < 1e-6;
      };
      auto br = boost::math::tools::bisect(berger_fiber_residual, xs[i], xs[i + 1], stop);
      // secant polish, kept inside the bracket
      double x0 = br.first, x1 = br.second;
      double f0 = berger_fiber_residual(x0), f1 = berger_fiber_residual(x1);
      for (int k = 0; k < 50 && f1 != f0; ++k) {
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        ++it;
        if (!(x2 > xs[i] && x2 < xs[i + 1])) break;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = berger_fiber_residual(x1);
        if (std::abs(x1 - x0) <= tol.root * std::max(1.0, std::abs(x1))) break;
      }
      x = std::abs(f1) <= std::abs(f0) ? x1 : x0;
      sol.iterations += it;
    } else {
      continue;
    }
    if (std::abs(x - 1.0) < round_exclusion) continue;
    root = x;
  }

  if (!root) {
    sol.message = "no sign change of the fiber residual on [" + fmt(search.lo) + ", " + fmt(search.hi) +
                  "] away from the round point a = 1";
    return sol;
  }
  sol.bracketed = true;
  sol.a = *root;
  sol.fiber_residual = berger_fiber_residual(sol.a);
  const Manifold m("line_x_berger", {charts::line(), charts::berger_sphere(sol.a)});
  const double p[4] = {0.0, 0.3, 1.1, 0.7};
  sol.lambda = rn3_lambda(factor_curvature(m, 1, p));
  const Prop44Report rep = prop44_profile_check(m, sol.lambda, 0.0, 0.0, m.sample_points(samples, seed), tol);
  sol.soliton_residual = rep.soliton.sup;
  sol.message = rep.pass ? "root found; full soliton residual within tolerance"
                         : "root found; full soliton residual exceeds tolerance";
  return sol;
}

// ---------------------------------------------------------------------------

std::vector<std::string> soliton_example_ids() {
  return {"ho-r2s2", "ho-r2h2", "ho-r2s2-std", "ho-r2h2-std", "s4-trivial", "berger-line", "berger-round"};
}

NamedSoliton soliton_example(const std::string& id, const Tolerances& tol) {
  NamedSoliton ex;
  ex.id = id;
  SolitonData& sd = ex.data;
  sd.q = QSelector::BachFlow;
  if (id == "ho-r2s2" || id == "ho-r2h2" || id == "ho-r2s2-std" || id == "ho-r2h2-std") {
    const bool sphere = id.starts_with("ho-r2s2");
    const bool standard = id.ends_with("-std");
    ex.manifold = named_manifold(sphere ? "r2xs2" : "r2xh2");
    if (standard) {
      sd.f = ex.manifold.parse("-(x^2 + y^2)/12");
      sd.lambda = -1.0 / 12.0;
      sd.bach_scale = 1.0;
    } else {
      sd.f = ex.manifold.parse("(x^2 + y^2)/6");
      sd.lambda = 1.0 / 6.0;
      sd.bach_scale = kSurfaceBachScale;
    }
    ex.description = std::string(sphere ? "R^2 x S^2(1)" : "R^2 x H^2(-1)") + ", f = " +
                     (standard ? "-|x|^2/12, lambda = -1/12, kappa = 1" : "|x|^2/6, lambda = 1/6, kappa = -2");
    ex.paper_anchor = sphere ? "gradient product examples on R^2 x S^2" : "hyperbolic analogue of the product examples";
    ex.tolerance = tol.ho_residual;
  } else if (id == "s4-trivial") {
    ex.manifold = named_manifold("round_sphere4");
    sd.X.assign(4, Expr::number(0.0));
    ex.description = "round S^4, X = 0, lambda = 0";
    ex.paper_anchor = "ambient obstruction flat with constant scalar curvature";
    ex.tolerance = tol.soliton_residual;
  } else if (id == "berger-line") {
    const BergerSolution s = solve_berger_soliton(kBergerDefaultInterval, tol, 16);
    if (!s.bracketed) throw NumericalError("Berger solve failed: " + s.message);
    ex.manifold = Manifold("line_x_berger", {charts::line(), charts::berger_sphere(s.a)});
    sd.f = ex.manifold.parse(fmt(2.0 * s.lambda) + "*t^2");
    sd.lambda = s.lambda;
    ex.description = "R x SU(2), Berger a = " + fmt(s.a) + ", f = 2 lambda t^2, lambda = " + fmt(s.lambda);
    ex.paper_anchor = "gradient product soliton on R x SU(2)";
    ex.tolerance = tol.berger_residual;
  } else if (id == "berger-round") {
    ex.manifold = Manifold("line_x_round_s3", {charts::line(), charts::berger_sphere(1.0)});
    sd.f = ex.manifold.parse("0.7*t + 0.2");
    ex.description = "R x S^3 (Berger a = 1), f linear in t, lambda = 0";
    ex.paper_anchor = "constant curvature metrics always satisfy the condition";
    ex.tolerance = tol.berger_residual;
  } else {
    throw SpecError("unknown soliton example '" + id + "'");
  }
  return ex;
}

// ---------------------------------------------------------------------------

namespace {

void require_surface_product(const Manifold& m) {
  if (m.factors().size() != 2 || m.factors()[0].dim() != 2 || m.factors()[1].dim() != 2)
    throw SpecError("needs a product of two surfaces");
}

/// Scalar curvature of factor k as a jet in the product variables.
Jet factor_scalar_jet(const Manifold& m, std::size_t k, std::span<const double> p) {
  const ChartSpec& c = m.factors()[k];
  const Manifold single(c.kind, {c});
  const CurvaturePack pk = CurvaturePack::compute(single.metric_jet(m.factor_point(k, p), 4));
  std::vector<int> map(static_cast<std::size_t>(c.dim()));
  for (int i = 0; i < c.dim(); ++i) map[static_cast<std::size_t>(i)] = m.factor_offset(k) + i;
  return embed(pk.scalar(), m.dim(), map);
}

}  // namespace

SurfaceCReport surface_C_field(const Manifold& m, const std::vector<Expr>& X,
                               const std::vector<std::vector<double>>& points, double bach_scale) {
  require_surface_product(m);
  SurfaceCReport rep;
  rep.points = parallel_map(points.size(), [&](std::size_t i) {
    const auto& p = points[i];
    const MetricJet mj = m.metric_jet(p, 2);
    const JetTensor gamma = christoffel(mj);
    const JetTensor gk = gradient_vector(factor_scalar_jet(m, 0, p), mj);
    const JetTensor gl = gradient_vector(factor_scalar_jet(m, 1, p), mj);
    JetTensor C = m.vector_jet(X, p, 1);
    for (int a = 0; a < 4; ++a) C(a) += (bach_scale / 12.0) * (gk(a).truncated(1) + gl(a).truncated(1));
    Tensor h = values(lie_derivative_metric(C, mj, gamma));
    for (auto& v : h) v *= 0.5;
    const Tensor g = values(mj.g), ginv = values(mj.ginv);

    SurfaceCPoint sp;
    sp.point = p;
    for (int a = 0; a < 4; ++a) sp.C.push_back(C(a).value());
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        sp.rho1 += 0.5 * ginv(a, b) * h(a, b);
        sp.rho2 += 0.5 * ginv(a + 2, b + 2) * h(a + 2, b + 2);
      }
    Tensor off(4, 2, 0.0), tf(4, 2, 0.0);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const bool ka = a < 2, kb = b < 2;
        if (ka != kb)
          off(a, b) = h(a, b);
        else
          tf(a, b) = h(a, b) - (ka ? sp.rho1 : sp.rho2) * g(a, b);
      }
    sp.offblock = norm_sym2(off, ginv);
    sp.tracefree = norm_sym2(tf, ginv);
    return sp;
  });
  for (const auto& sp : rep.points) {
    rep.max_offblock = std::max(rep.max_offblock, sp.offblock);
    rep.max_tracefree = std::max(rep.max_tracefree, sp.tracefree);
  }
  return rep;
}

SurfacePhiReport surface_phi_check(const Manifold& m, const std::vector<std::vector<double>>& points, const Tolerances& tol,
                            double bach_scale) {
  require_surface_product(m);
  SurfacePhiReport rep;
  rep.points = parallel_map(points.size(), [&](std::size_t i) {
    const auto& p = points[i];
    const ChartSpec& kc = m.factors()[0];
    const CurvaturePack kp = CurvaturePack::compute(Manifold(kc.kind, {kc}).metric_jet(m.factor_point(0, p), 4));
    SurfacePhiPoint lp;
    lp.k_gradient = std::sqrt(norm2_oneform(kp.grad_scalar(), kp.metric()).value());

    const FactorCurvature K = factor_curvature(m, 0, p), L = factor_curvature(m, 1, p);
    const Tensor B = values(CurvaturePack::compute(m.metric_jet(p, 4)).bach());
    const Tensor ginv = values(m.metric_jet(p, 0).ginv);
    double trk = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) trk += ginv(a, b) * bach_scale * B(a, b);
    lp.phi_constructed = -0.25 * trk;
    lp.phi_formula = -(L.lap_s + 0.5 * L.s * L.s) / 12.0 + K.s * K.s / 24.0;
    lp.phi_printed = 2.0 * lp.phi_formula;

    const double bracket = K.s * K.s / 3.0 - L.lap_s - L.s * L.s / 3.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const double lhs = 0.5 * bach_scale * B(a + 2, b + 2) + lp.phi_constructed * L.g(a, b);
        const double rhs = L.hess_s(a, b) / 6.0 + 0.25 * bracket * L.g(a, b);
        const double printed = L.hess_s(a, b) / 6.0 + bracket * L.g(a, b);
        lp.l_block_residual = std::max(lp.l_block_residual, std::abs(lhs - rhs));
        lp.l_block_printed_residual = std::max(lp.l_block_printed_residual, std::abs(lhs - printed));
      }
    return lp;
  });
  for (const auto& lp : rep.points) {
    if (lp.k_gradient > tol.pointwise_identity)
      throw HypothesisError("scalar curvature of K is not constant (|dS_K| = " + fmt(lp.k_gradient) + ")");
    rep.max_phi_mismatch = std::max(rep.max_phi_mismatch, std::abs(lp.phi_constructed - lp.phi_formula));
    rep.max_printed_phi_mismatch = std::max(rep.max_printed_phi_mismatch, std::abs(lp.phi_constructed - lp.phi_printed));
    rep.max_l_block_residual = std::max(rep.max_l_block_residual, lp.l_block_residual);
    rep.max_printed_l_block_residual = std::max(rep.max_printed_l_block_residual, lp.l_block_printed_residual);
  }
  return rep;
}

SplittingReport splitting_spotcheck(const Manifold& m, const Expr& split_f, const Expr& control_f,
                                    const std::vector<std::vector<double>>& points, double tolerance) {
  if (m.factors().size() < 2) throw SpecError("splitting check needs a product manifold");
  const int cut = m.factor_offset(1);
  const int n = m.dim();
  const Expr constant = Expr::number(1.7);
  struct Local {
    double split, control, constant;
  };
  const auto loc = parallel_map(points.size(), [&](std::size_t i) {
    const auto& p = points[i];
    const JetTensor gamma = christoffel(m.metric_jet(p, 1));
    auto mixed = [&](const Expr& f) {
      const Tensor H = values(hessian_scalar(m.scalar_jet(f, p, 2), gamma));
      double mx = 0.0;
      for (int a = 0; a < cut; ++a)
        for (int b = cut; b < n; ++b) mx = std::max(mx, std::abs(H(a, b)));
      return mx;
    };
    const double c = max_abs(values(hessian_scalar(m.scalar_jet(constant, p, 2), gamma)));
    return Local{mixed(split_f), mixed(control_f), c};
  });
  SplittingReport rep;
  for (const auto& l : loc) {
    rep.split_mixed = std::max(rep.split_mixed, l.split);
    rep.control_mixed = std::max(rep.control_mixed, l.control);
    rep.constant_hess = std::max(rep.constant_hess, l.constant);
  }
  rep.pass = rep.split_mixed <= tolerance && rep.constant_hess <= tolerance && rep.control_mixed > tolerance;
  return rep;
}

}  // namespace bachlab
