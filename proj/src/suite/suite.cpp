#include "bachlab/suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "bachlab/corpus.hpp"
#include "bachlab/curvature.hpp"
#include "bachlab/identity.hpp"
#include "bachlab/ode.hpp"
#include "bachlab/product.hpp"
#include "bachlab/soliton.hpp"
#include "fdref/fdref.hpp"

namespace bachlab::suite {

namespace {

constexpr double kPi = 3.141592653589793;

corpus::Rng stream(const Config& cfg, int k) {
  std::seed_seq ss{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                   static_cast<std::uint32_t>(k)};
  return corpus::Rng(ss);
}

// NaN is sticky so a broken evaluation can never pass
void track(double& worst, double v) {
  if (std::isnan(worst)) return;
  if (std::isnan(v) || v > worst) worst = v;
}

std::string g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string chart_text(const ChartSpec& c) {
  std::string s = c.kind;
  for (const auto& x : c.coords) s += "|" + x;
  for (const auto& e : c.g) s += "|" + e.to_string();
  return s;
}

std::string points_text(const std::vector<std::vector<double>>& pts) {
  std::string s;
  for (const auto& p : pts)
    for (double x : p) s += corpus::fmt(x) + ",";
  return s;
}

std::vector<Expr> parse_all(const Manifold& m, const std::vector<std::string>& v) {
  std::vector<Expr> out;
  for (const auto& s : v) out.push_back(m.parse(s));
  return out;
}

double sup_abs(const Tensor& t) {
  double s = 0.0;
  for (double v : t) track(s, std::abs(v));
  return s;
}

// ---------------------------------------------------------------------------

std::vector<CheckRecord> fd_oracle(const Config& cfg) {
  auto rng = stream(cfg, 1);
  std::vector<CheckRecord> out;
  const int dims[] = {2, 3, 4, 3, 4};
  for (int i = 0; i < 5; ++i) {
    const ChartSpec c = corpus::random_metric(dims[i], rng);
    const Manifold m("random_metric_" + std::to_string(i), {c});
    const auto pts = m.sample_points(3, cfg.seed);
    double worst = 0.0;
    std::string which;
    for (const auto& p : pts) {
      const auto pack = CurvaturePack::compute(m.metric_jet(p, 4));
      for (const auto& [name, v] : fdref::compare(fdref::compute(m, p), fdref::from_pack(pack))) {
        const double before = worst;
        track(worst, v);
        if (worst != before || which.empty()) which = name;
      }
    }
    out.push_back(make_check("fd_oracle." + m.name(), "curvature quantities through Delta Ric and Bach",
                             chart_text(c) + points_text(pts), worst, cfg.tol.fd_relative, Relation::AtMost, 0.0,
                             "dim " + std::to_string(dims[i]) + ", worst quantity " + which));
  }
  return out;
}

std::vector<CheckRecord> bach_properties(const Config& cfg) {
  auto rng = stream(cfg, 2);
  std::vector<CheckRecord> out;
  const std::string anchor = "Bach tensor is trace-free, divergence-free, and conformally invariant";
  for (int i = 0; i < 5; ++i) {
    const ChartSpec c = corpus::random_metric(4, rng);
    const Manifold m("random4_" + std::to_string(i), {c});
    const auto pts = m.sample_points(2, cfg.seed);
    const std::string inputs = chart_text(c) + points_text(pts);
    double tr = 0.0, div = 0.0;
    std::vector<Tensor> B0;
    for (const auto& p : pts) {
      const auto pk = CurvaturePack::compute(m.metric_jet(p, 5));
      track(tr, std::abs(trace(pk.bach(), pk.metric()).value()));
      track(div, sup_abs(values(divergence_sym2(pk.bach(), pk.metric(), pk.christoffel()))));
      B0.push_back(values(pk.bach()));
    }
    out.push_back(make_check("bach.trace." + m.name(), anchor, inputs, tr, cfg.tol.bach_trace));
    out.push_back(make_check("bach.divergence." + m.name(), anchor, inputs, div, cfg.tol.bach_divergence));
    for (int j = 0; j < 3; ++j) {
      const std::string u = corpus::random_function(c, rng, 0.3);
      const ChartSpec cr = corpus::conformal_rescale(c, u);
      const Manifold mr(m.name() + "_u" + std::to_string(j), {cr});
      const Expr ue = m.parse(u);
      double worst = 0.0;
      for (std::size_t k = 0; k < pts.size(); ++k) {
        const Tensor Br = values(CurvaturePack::compute(mr.metric_jet(pts[k], 4)).bach());
        const double w = std::exp(-2.0 * ue.eval(pts[k], m.params()));
        double d = 0.0;
        for (std::size_t q = 0; q < Br.size(); ++q) track(d, std::abs(Br[q] - w * B0[k][q]));
        track(worst, d / std::max(1.0, sup_abs(B0[k])));
      }
      out.push_back(make_check("bach.conformal." + mr.name(), anchor, inputs + "|u=" + u, worst,
                               cfg.tol.bach_conformal, Relation::AtMost, 0.0, "B(e^{2u} g) vs e^{-2u} B(g)"));
    }
  }
  return out;
}

std::vector<CheckRecord> product_formulas(const Config& cfg) {
  auto rng = stream(cfg, 3);
  std::vector<CheckRecord> out;
  for (const auto& N : corpus::three_manifolds(rng, 3)) {
    const Manifold m("line_x_" + N.name, {charts::line(), N.chart});
    const auto pts = m.sample_points(3, cfg.seed);
    double worst = 0.0;
    for (const auto& p : pts) track(worst, line_cross_3_discrepancy(m, p));
    out.push_back(make_check("product.line_x_n3." + N.name, "line x N^3 Bach components", chart_text(N.chart) + points_text(pts),
                             worst, cfg.tol.product_formula));
  }
  const auto surf = corpus::surfaces(rng, 3);
  const std::pair<std::size_t, std::size_t> pairs[] = {{0, 1}, {3, 4}, {5, 6}, {0, 5}, {1, 3}, {4, 7}, {2, 6}};
  for (const auto& [a, b] : pairs) {
    const std::string name = surf[a].kind + std::to_string(a) + "_x_" + surf[b].kind + std::to_string(b);
    const Manifold m(name, {surf[a], surf[b]});
    const auto pts = m.sample_points(3, cfg.seed);
    double worst = 0.0;
    for (const auto& p : pts) track(worst, surface_product_discrepancy(m, p));
    out.push_back(make_check("product.k_x_l." + name, "K^2 x L^2 Bach components",
                             chart_text(surf[a]) + chart_text(surf[b]) + points_text(pts), worst, cfg.tol.product_formula,
                             Relation::AtMost, 0.0, "against -2 B of the general pipeline"));
  }
  return out;
}

CheckRecord example_check(const NamedSoliton& ex, std::size_t count, std::uint64_t seed, double tol) {
  const auto pts = ex.manifold.sample_points(count, seed);
  const auto rep = bach_soliton_residual(ex.manifold, ex.data, pts, tol);
  return make_check("soliton." + ex.id, ex.paper_anchor, ex.id + points_text(pts), rep.sup, tol, Relation::AtMost, 0.0,
                    ex.description + "; Bach scale " + g(ex.data.bach_scale) + ", " + std::to_string(pts.size()) +
                        " sample points");
}

std::vector<CheckRecord> ho_solitons(const Config& cfg) {
  std::vector<CheckRecord> out;
  for (const char* id : {"ho-r2s2", "ho-r2h2", "ho-r2s2-std", "ho-r2h2-std"}) {
    const auto ex = soliton_example(id, cfg.tol);
    out.push_back(example_check(ex, 200, cfg.seed, cfg.tol.ho_residual));
  }
  return out;
}

std::vector<CheckRecord> berger(const Config& cfg) {
  std::vector<CheckRecord> out;
  const std::string anchor = "gradient product soliton on R x SU(2)";
  const auto sol = solve_berger_soliton(kBergerDefaultInterval, cfg.tol, 200, cfg.seed);
  const std::string inputs = "berger|" + corpus::fmt(kBergerDefaultInterval.lo) + "," + corpus::fmt(kBergerDefaultInterval.hi);
  out.push_back(make_flag("berger.bracketed", anchor, inputs, sol.bracketed, sol.message));
  out.push_back(make_flag("berger.non_round_root", anchor, inputs, sol.bracketed && sol.a != 1.0,
                          "a* = " + corpus::fmt(sol.a) + ", lambda = " + corpus::fmt(sol.lambda)));
  out.push_back(make_check("berger.fiber_condition", anchor, inputs, std::abs(sol.fiber_residual),
                           cfg.tol.berger_residual));
  out.push_back(make_check("berger.soliton_residual", anchor, inputs, sol.soliton_residual, cfg.tol.berger_residual,
                           Relation::AtMost, 0.0, "full R x SU(2) residual at a*"));
  const auto round = soliton_example("berger-round", cfg.tol);
  out.push_back(make_check("berger.round_lambda", round.paper_anchor, "berger-round", round.data.lambda, 0.0,
                           Relation::Equal, 0.0));
  out.push_back(example_check(round, 200, cfg.seed, cfg.tol.berger_residual));
  return out;
}

std::vector<CheckRecord> integral_identities(const Config& cfg) {
  auto rng = stream(cfg, 6);
  std::vector<CheckRecord> out;
  const Manifold sphere = named_manifold("round_sphere");
  const Manifold torus("flat_torus", {charts::flat_torus({2 * kPi, 2 * kPi})});
  for (int k = 0; k < 10; ++k) {
    const bool on_sphere = k < 5;
    const Manifold& m = on_sphere ? sphere : torus;
    const auto Xs = on_sphere ? corpus::sphere_vector_field(rng) : corpus::torus_vector_field(rng);
    const auto phis = on_sphere ? corpus::sphere_function(rng, 0.5) : corpus::torus_function(rng, 0.5);
    const std::string name = (on_sphere ? "s2_" : "t2_") + std::to_string(k % 5);
    const std::string inputs = m.name() + "|" + Xs[0] + "|" + Xs[1] + "|" + phis;
    const auto lad = thm32_convergence(m, parse_all(m, Xs), m.parse(phis), cfg.tol);
    const std::string a1 = "integral identity for extended q-solitons (first)";
    const std::string a2 = "integral identity for extended q-solitons (second)";
    out.push_back(make_check("integrals." + name + ".first", a1, inputs, lad.production.first.relative(),
                             cfg.tol.integral_identity, Relation::AtMost, 0.0,
                             "relative to largest term, " + std::to_string(lad.production.nodes) + " nodes"));
    out.push_back(make_check("integrals." + name + ".second", a2, inputs, lad.production.second.relative(),
                             cfg.tol.integral_identity));
    out.push_back(make_check("integrals." + name + ".first_shrink", a1, inputs, lad.first_shrink, cfg.tol.integral_shrink,
                             Relation::AtLeast, 0.0,
                             lad.first_exact ? "exact at the coarsest resolution" : "imbalance " + g(lad.first_relative) + " at the coarsest passing resolution"));
    out.push_back(make_check("integrals." + name + ".second_shrink", a2, inputs, lad.second_shrink,
                             cfg.tol.integral_shrink, Relation::AtLeast, 0.0,
                             lad.second_exact ? "exact at the coarsest resolution" : "imbalance " + g(lad.second_relative) + " at the coarsest passing resolution"));
  }
  return out;
}

std::vector<CheckRecord> conformal_fields(const Config& cfg) {
  auto rng = stream(cfg, 7);
  std::vector<CheckRecord> out;
  for (int j = 0; j < 4; ++j) {
    const std::string u = j == 0 ? std::string("0") : corpus::sphere_conformal_factor(rng);
    const Manifold m("conformal_sphere_" + std::to_string(j), {charts::conformal_round_sphere(u)});
    const auto mob = corpus::sphere_mobius_field(rng);
    const std::vector<std::pair<std::string, std::vector<Expr>>> fields = {
        {"grad_z", sphere_conformal_field(m)}, {"mobius", parse_all(m, mob)}};
    const auto pts = m.sample_points(50, cfg.seed);
    for (const auto& [fname, X] : fields) {
      const std::string name = m.name() + "." + fname;
      const std::string inputs = "u=" + u + "|" + fname + "|" + (fname == "mobius" ? mob[0] + mob[1] : std::string());
      double yano = 0.0;
      std::string note;
      try {
        for (const auto& p : pts) track(yano, std::abs(yano_pointwise(m, X, p, cfg.tol)));
      } catch (const HypothesisError& e) {
        yano = std::nan("");
        note = e.what();
      }
      out.push_back(make_check("yano." + name, "Yano identity for conformal fields", inputs + points_text(pts), yano,
                               cfg.tol.pointwise_identity, Relation::AtMost, 0.0, note));
      double be = std::nan("");
      note.clear();
      try {
        const auto r = bourguignon_ezin(m, X, BianchiTensor::Ricci, cfg.tol);
        be = std::abs(r.integral) / r.abs_scale;
        note = "int |S| = " + g(r.abs_scale) + ", " + std::to_string(r.nodes) + " nodes";
      } catch (const HypothesisError& e) {
        note = e.what();
      }
      out.push_back(make_check("bourguignon_ezin." + name, "Bourguignon-Ezin: int L_X S vanishes", inputs, be,
                               cfg.tol.integral_identity, Relation::AtMost, 0.0, note));
    }
  }
  return out;
}

std::vector<CheckRecord> surface_lemma(const Config& cfg) {
  auto rng = stream(cfg, 8);
  std::vector<CheckRecord> out;
  auto surf = corpus::surfaces(rng, 3);
  surf.push_back(charts::flat_torus({2 * kPi, 2 * kPi}));
  for (std::size_t i = 0; i < surf.size(); ++i) {
    const Manifold m(surf[i].kind + "_" + std::to_string(i), {surf[i]});
    const std::string h = corpus::random_function(surf[i], rng, 0.5);
    const auto pts = m.sample_points(20, cfg.seed);
    double worst = 0.0;
    for (const auto& p : pts) track(worst, sup_abs(bochner_pointwise(m, m.parse(h), p)));
    out.push_back(make_check("bochner." + m.name(), "Bochner identity div Hess h = Ric(grad h) + d Delta h",
                             chart_text(surf[i]) + "|h=" + h + points_text(pts), worst, cfg.tol.pointwise_identity));
  }
  struct Closed {
    std::string name;
    ChartSpec chart;
    bool hypothesis;
  };
  std::vector<Closed> closed = {
      {"round_sphere_r1", charts::round_sphere(2, 1.0), true},
      {"round_sphere_r2", charts::round_sphere(2, 2.0), true},
      {"flat_torus", charts::flat_torus({2 * kPi, 2 * kPi}), true},
      {"conformal_sphere", charts::conformal_round_sphere(corpus::sphere_conformal_factor(rng)), false},
      {"revolution", charts::surface_of_revolution("sin(t)*(1 + 0.2*cos(t)^2)"), false},
  };
  for (const auto& c : closed) {
    const Manifold m(c.name, {c.chart});
    const auto r = lemma48_machinery(m, cfg.tol, c.hypothesis);
    const std::string inputs = chart_text(c.chart);
    if (c.hypothesis) {
      const double floor = std::max(r.hess_norm_integral, 1.0);
      out.push_back(make_check("surface_lemma." + c.name + ".quarter_identity",
                               "int |Hess S|^2 = (1/4) int (Delta S)^2 when Delta S + S^2/3 is constant", inputs,
                               std::abs(r.hess_norm_integral - r.quarter_lap_integral) / floor, cfg.tol.integral_identity,
                               Relation::AtMost, 0.0, "c = " + g(r.c_mean) + ", S spread " + g(r.s_spread)));
    }
    out.push_back(make_check("surface_lemma." + c.name + ".hess_bound", "pointwise |Hess S|^2 >= (Delta S)^2 / 2",
                             inputs, r.cauchy_schwarz_margin, -cfg.tol.pointwise_identity, Relation::AtLeast, 0.0,
                             "min of |Hess S|^2 - (Delta S)^2/2 over the nodes"));
    out.push_back(make_flag("surface_lemma." + c.name + ".machinery", "integration by parts for int |Hess S|^2", inputs,
                            r.pass,
                            "int |Hess S|^2 = " + g(r.hess_norm_integral) + ", parts " + g(r.parts_integral)));
  }
  return out;
}

std::vector<CheckRecord> ode_scan(const Config& cfg) {
  std::vector<CheckRecord> out;
  const std::string anchor = "rotationally symmetric surfaces with Delta S + S^2/3 = c";
  ode::ScanConfig sc;
  sc.controls = ode::Controls::from(cfg.tol);
  sc.closed_srange = cfg.tol.ode_closed_srange;
  const auto rep = ode::scan(sc);
  const std::string inputs = "scan|default grid";
  out.push_back(make_check("ode.closed_s_range", anchor, inputs, rep.max_closed_srange, cfg.tol.ode_closed_srange,
                           Relation::AtMost, 0.0,
                           std::to_string(rep.closed) + " closed, " + std::to_string(rep.open) + " open, " +
                               std::to_string(rep.blowup) + " blow-up, " + std::to_string(rep.failures) +
                               " step failures"));
  out.push_back(make_check("ode.closed_cells", anchor, inputs, static_cast<double>(rep.closed), 1.0, Relation::AtLeast));

  ode::Controls k = ode::Controls::from(cfg.tol);
  k.keep_trajectory = true;
  const auto r = ode::integrate_profile(2.0, 4.0 / 3.0, k);
  const std::string rin = "profile|2|4/3";
  out.push_back(make_flag("ode.round.closed", anchor, rin, r.outcome == ode::Outcome::Closed, ode::to_string(r.outcome)));
  out.push_back(make_check("ode.round.closure_time", anchor, rin, r.t_close ? std::abs(*r.t_close - kPi) : std::nan(""),
                           cfg.tol.ode_closure_time, Relation::AtMost, 0.0, "t_close - pi"));
  double sup = 0.0;
  for (const auto& s : r.trajectory)
    if (s.t <= kPi - k.epsilon) track(sup, std::abs(s.rho - std::sin(s.t)));
  out.push_back(make_check("ode.round.profile", anchor, rin, sup, cfg.tol.ode_round_profile, Relation::AtMost, 0.0,
                           "sup |rho - sin t| over " + std::to_string(r.trajectory.size()) + " steps"));
  ode::Controls k2 = k;
  k2.rtol *= 0.5;
  k2.atol *= 0.5;
  const auto r2 = ode::integrate_profile(2.0, 4.0 / 3.0, k2);
  out.push_back(make_check("ode.round.convergence", anchor, rin,
                           r.t_close && r2.t_close ? std::abs(*r.t_close - *r2.t_close) : std::nan(""),
                           cfg.tol.ode_convergence, Relation::AtMost, 0.0, "closure time change under halved rtol"));
  return out;
}

std::vector<CheckRecord> sign_laws(const Config& cfg) {
  auto rng = stream(cfg, 10);
  std::vector<CheckRecord> out;
  const double zero = cfg.tol.sign_law_zero;
  for (const auto& N : corpus::three_manifolds(rng, 3)) {
    const Manifold m(N.name, {N.chart});
    const auto pts = m.sample_points(3, cfg.seed);
    double s1_min = INFINITY, rn_max = -INFINITY, e_max = 0.0;
    bool iff_s1 = true, iff_rn = true;
    for (const auto& p : pts) {
      const auto F = factor_curvature(N.chart, p);
      const double s1 = s1n3_lambda(F), rn = rn3_lambda(F), e = F.einstein_residual();
      s1_min = std::min(s1_min, s1);
      rn_max = std::max(rn_max, rn);
      e_max = std::max(e_max, e);
      const bool einstein = e <= cfg.tol.einstein;
      iff_s1 = iff_s1 && ((std::abs(s1) <= zero) == einstein);
      iff_rn = iff_rn && ((std::abs(rn) <= zero) == einstein);
    }
    const std::string inputs = chart_text(N.chart) + points_text(pts);
    const std::string note = "Einstein residual " + g(e_max);
    out.push_back(make_check("sign_law.s1n3." + N.name, "S^1 x N^3 soliton constant is non-negative", inputs, s1_min,
                             -zero, Relation::AtLeast, 0.0, note));
    out.push_back(make_check("sign_law.rn3." + N.name, "R x N^3 soliton constant is non-positive", inputs, rn_max, zero,
                             Relation::AtMost, 0.0, note));
    out.push_back(make_flag("sign_law.s1n3_zero_iff_einstein." + N.name, "S^1 x N^3 soliton constant vanishes iff Einstein",
                            inputs, iff_s1, note));
    out.push_back(make_flag("sign_law.rn3_zero_iff_einstein." + N.name, "R x N^3 soliton constant vanishes iff Einstein",
                            inputs, iff_rn, note));
  }
  return out;
}

}  // namespace

bool Criterion::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e = {
      {1, "jet curvature vs finite-difference oracle", fd_oracle},
      {2, "Bach trace, divergence, conformal weight", bach_properties},
      {3, "closed-form product Bach components", product_formulas},
      {4, "Ho product solitons", ho_solitons},
      {5, "Berger soliton root", berger},
      {6, "integral identities on S^2 and T^2", integral_identities},
      {7, "Yano and Bourguignon-Ezin on conformal spheres", conformal_fields},
      {8, "surface lemma machinery", surface_lemma},
      {9, "ODE scan corroboration", ode_scan},
      {10, "sign laws on the 3-manifold corpus", sign_laws},
  };
  return e;
}

Criterion run_one(const Entry& e, const Config& cfg) {
  Criterion c;
  c.index = e.index;
  c.title = e.title;
  try {
    c.checks = e.run(cfg);
  } catch (const std::exception& ex) {
    c.checks.push_back(make_flag("error", e.title, "", false, ex.what()));
  }
  return c;
}

std::vector<Criterion> run_all(const Config& cfg) {
  std::vector<Criterion> out;
  for (const auto& e : entries()) out.push_back(run_one(e, cfg));
  return out;
}

Report suite_report(const Config& cfg, const std::vector<Criterion>& results) {
  Report r;
  r.command = "suite all";
  r.config["seed"] = std::to_string(cfg.seed);
  r.tolerances = cfg.tol.as_map();
  for (const auto& c : results) r.checks.insert(r.checks.end(), c.checks.begin(), c.checks.end());
  return r;
}

}  // namespace bachlab::suite
