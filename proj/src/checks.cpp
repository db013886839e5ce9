#include "bachlab/checks.hpp"

#include <cmath>
#include <cstdio>

#include "bachlab/error.hpp"

namespace bachlab {

namespace {

std::string g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string exprs_text(const std::vector<Expr>& v) {
  std::string s;
  for (const auto& e : v) s += e.to_string() + ";";
  return s;
}

std::string case_text(const IdentityCase& c) {
  std::string s = c.id + "|" + c.manifold.name() + "|" + exprs_text(c.X) + "|" + exprs_text(c.T);
  if (c.phi) s += "|phi=" + c.phi->to_string();
  if (c.h) s += "|h=" + c.h->to_string();
  return s + "|" + std::to_string(c.points) + "|" + std::to_string(c.seed);
}

double sup_abs(const Tensor& t) {
  double s = 0.0;
  for (double v : t) s = std::isnan(v) || std::isnan(s) ? NAN : std::max(s, std::abs(v));
  return s;
}

template <class F>
double sup_over(const std::vector<std::vector<double>>& pts, F&& f) {
  double s = 0.0;
  for (const auto& p : pts) {
    const double v = f(p);
    s = std::isnan(v) || std::isnan(s) ? NAN : std::max(s, v);
  }
  return s;
}

const char* anchor_for(const std::string& id) {
  if (id == "lemma35") return "<L_X g, T> as a divergence plus (div T)(X)";
  if (id == "thm32") return "integral identities for extended q-solitons";
  if (id == "divlie") return "divergence of L_X g against the trace-free q";
  if (id == "yano") return "Yano identity for conformal fields";
  if (id == "be") return "Bourguignon-Ezin: int L_X tr q vanishes";
  if (id == "thm38") return "conformality of X from the trace-free integral identity";
  if (id == "bochner") return "Bochner identity div Hess h = Ric(grad h) + d Delta h";
  return "int |Hess S|^2 = (1/4) int (Delta S)^2 when Delta S + S^2/3 is constant";
}

}  // namespace

std::vector<CheckRecord> identity_checks(const IdentityCase& c, const Tolerances& tol) {
  const Manifold& m = c.manifold;
  const std::string anchor = anchor_for(c.id);
  const std::string inputs = case_text(c);
  const auto pts = m.sample_points(c.points, c.seed);
  const double ptol = c.tolerance.value_or(tol.pointwise_identity);
  const double itol = c.tolerance.value_or(tol.integral_identity);
  std::vector<CheckRecord> out;
  try {
    if (c.id == "lemma35") {
      const double v = sup_over(pts, [&](const auto& p) { return std::abs(lemma35_pointwise(m, c.T, c.X, p)); });
      out.push_back(make_check("lemma35.pointwise", anchor, inputs, v, ptol));
    } else if (c.id == "divlie") {
      const double v = sup_over(pts, [&](const auto& p) { return sup_abs(div_lie_identity(m, c.X, *c.phi, p)); });
      out.push_back(make_check("divlie.pointwise", anchor, inputs, v, ptol));
    } else if (c.id == "yano") {
      const double v = sup_over(pts, [&](const auto& p) { return std::abs(yano_pointwise(m, c.X, p, tol)); });
      out.push_back(make_check("yano.pointwise", anchor, inputs, v, ptol));
    } else if (c.id == "bochner") {
      const double v = sup_over(pts, [&](const auto& p) { return sup_abs(bochner_pointwise(m, *c.h, p)); });
      out.push_back(make_check("bochner.pointwise", anchor, inputs, v, ptol));
    } else if (c.id == "thm32") {
      Tolerances t = tol;
      t.integral_identity = itol;
      const auto lad = thm32_convergence(m, c.X, *c.phi, t);
      const std::string nodes = std::to_string(lad.production.nodes) + " nodes";
      out.push_back(make_check("thm32.first", anchor, inputs, lad.production.first.relative(), itol, Relation::AtMost,
                               0.0, "relative to largest term, " + nodes));
      out.push_back(make_check("thm32.second", anchor, inputs, lad.production.second.relative(), itol,
                               Relation::AtMost, 0.0, "relative to largest term, " + nodes));
      out.push_back(make_check("thm32.first_shrink", anchor, inputs, lad.first_shrink, tol.integral_shrink,
                               Relation::AtLeast, 0.0, lad.first_exact ? "exact at the coarsest resolution" : "imbalance " + g(lad.first_relative) + " before doubling"));
      out.push_back(make_check("thm32.second_shrink", anchor, inputs, lad.second_shrink, tol.integral_shrink,
                               Relation::AtLeast, 0.0, lad.second_exact ? "exact at the coarsest resolution" : "imbalance " + g(lad.second_relative) + " before doubling"));
    } else if (c.id == "be") {
      const auto r = bourguignon_ezin(m, c.X, c.q, tol);
      out.push_back(make_check("be.integral", anchor, inputs, std::abs(r.integral) / r.abs_scale, itol,
                               Relation::AtMost, 0.0,
                               "int L_X tr q = " + g(r.integral) + ", int |tr q| = " + g(r.abs_scale)));
    } else if (c.id == "thm38") {
      const auto r = thm38_eq54(m, c.X, *c.phi, tol, true);
      out.push_back(make_flag("thm38.consistent", anchor, inputs, r.consistent,
                              "integral " + g(r.eq54) + " of scale " + g(r.eq54_scale) + ", sup |L0_X g| " +
                                  g(r.tracefree_lie) + (r.conformal ? ", conformal" : ", not conformal")));
    } else if (c.id == "lemma48") {
      const auto r = lemma48_machinery(m, tol, true);
      const double floor = std::max(r.hess_norm_integral, 1.0);
      out.push_back(make_check("lemma48.quarter_identity", anchor, inputs,
                               std::abs(r.hess_norm_integral - r.quarter_lap_integral) / floor, itol, Relation::AtMost,
                               0.0, "c = " + g(r.c_mean)));
      out.push_back(make_check("lemma48.hess_bound", "pointwise |Hess S|^2 >= (Delta S)^2 / 2", inputs,
                               r.cauchy_schwarz_margin, -ptol, Relation::AtLeast));
      out.push_back(make_check("lemma48.constant_s", anchor, inputs, r.s_spread, ptol, Relation::AtMost, 0.0,
                               "spread of S over the nodes"));
      out.push_back(make_flag("lemma48.machinery", anchor, inputs, r.pass));
    } else {
      throw SpecError("unknown identity id '" + c.id + "'");
    }
  } catch (const HypothesisError& e) {
    out.push_back(make_flag(c.id + ".hypotheses", anchor, inputs, false, e.what()));
  }
  return out;
}

std::vector<CheckRecord> soliton_checks(const std::string& id, const std::string& anchor, const Manifold& m,
                                        const SolitonData& sd, double tolerance, std::size_t points,
                                        std::uint64_t seed) {
  sd.validate(m);
  const auto pts = residual_points(m, points, seed);
  const bool bach_form = sd.q == QSelector::BachFlow && !sd.extended() && m.dim() == 4;
  const auto rep = bach_form ? bach_soliton_residual(m, sd, pts, tolerance) : extended_q_residual(m, sd, pts, tolerance);
  std::string inputs = id + "|" + m.name() + "|" + exprs_text(sd.X) + "|" + (sd.f ? sd.f->to_string() : "") + "|" +
                       (sd.phi ? sd.phi->to_string() : g(sd.lambda)) + "|" + to_string(sd.q) + "|" + g(sd.bach_scale) +
                       "|" + std::to_string(pts.size()) + "|" + std::to_string(seed);
  std::string note = std::to_string(pts.size()) + " points, q = " + to_string(sd.q) + ", Bach scale " + g(sd.bach_scale);
  if (!rep.points.empty()) {
    note += ", worst at (";
    const auto& p = rep.points[rep.argmax].point;
    for (std::size_t i = 0; i < p.size(); ++i) note += (i ? ", " : "") + g(p[i]);
    note += ")";
  }
  return {make_check("soliton." + id, anchor, inputs, rep.sup, tolerance, Relation::AtMost, 0.0, note)};
}

std::vector<CheckRecord> berger_checks(Interval search, const Tolerances& tol, std::uint64_t seed) {
  const auto sol = solve_berger_soliton(search, tol, 200, seed);
  const std::string anchor = "gradient product soliton on R x SU(2)";
  const std::string inputs = "berger|" + g(search.lo) + "," + g(search.hi) + "|" + std::to_string(seed);
  std::vector<CheckRecord> out;
  out.push_back(make_flag("berger.bracketed", anchor, inputs, sol.bracketed, sol.message));
  if (!sol.bracketed) return out;
  out.push_back(make_check("berger.fiber_condition", anchor, inputs, std::abs(sol.fiber_residual), tol.berger_residual,
                           Relation::AtMost, 0.0, "a* = " + g(sol.a) + ", lambda = " + g(sol.lambda)));
  out.push_back(make_check("berger.soliton_residual", anchor, inputs, sol.soliton_residual, tol.berger_residual,
                           Relation::AtMost, 0.0, std::to_string(sol.iterations) + " iterations"));
  return out;
}

}  // namespace bachlab
