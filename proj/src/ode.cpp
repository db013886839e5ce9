#include "bachlab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <boost/numeric/odeint.hpp>

#include "bachlab/error.hpp"
#include "bachlab/parallel.hpp"
#include "spec_json.hpp"

namespace bachlab::ode {

namespace odeint = boost::numeric::odeint;
using detail::json;

namespace {

using State = std::array<double, 4>;  // rho, rho', S, S'

void field(const State& x, State& dx, double c) {
  dx[0] = x[1];
  dx[1] = -0.5 * x[0] * x[2];
  dx[2] = x[3];
  dx[3] = c - x[2] * x[2] / 3.0 - (x[1] / x[0]) * x[3];
}

ProfileState unpack(double t, const State& x) { return {t, x[0], x[1], x[2], x[3]}; }

Grid read_grid(const json& j, const char* key, Grid def) {
  if (!j.contains(key)) return def;
  const json& g = j[key];
  detail::reject_unknown(g, {"min", "max", "count"}, std::string("scan grid '") + key + "'");
  Grid out;
  out.lo = detail::num(g, "min", def.lo);
  out.hi = detail::num(g, "max", def.hi);
  const double count = detail::num(g, "count", static_cast<double>(def.count));
  if (count < 0 || count != std::floor(count)) throw SpecError(std::string("grid '") + key + "' count must be a non-negative integer");
  out.count = static_cast<std::size_t>(count);
  if (out.count > 1 && !(out.hi > out.lo)) throw SpecError(std::string("grid '") + key + "' needs max > min");
  return out;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::array<double, 4> rhs(const ProfileState& s, double c) {
  if (!(s.rho > 0.0)) throw DomainError("profile ODE needs rho > 0");
  State dx;
  field({s.rho, s.drho, s.S, s.dS}, dx, c);
  return dx;
}

ProfileState pole_series(double S0, double c, double eps) {
  const double s2 = (c - S0 * S0 / 3.0) / 4.0;
  return {eps, eps - (S0 / 12.0) * eps * eps * eps, 1.0 - (S0 / 4.0) * eps * eps, S0 + s2 * eps * eps, 2.0 * s2 * eps};
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Closed: return "Closed";
    case Outcome::CompleteOpen: return "CompleteOpen";
    case Outcome::CurvatureBlowUp: return "CurvatureBlowUp";
    case Outcome::StepFailure: return "StepFailure";
  }
  return "?";
}

Controls Controls::from(const Tolerances& tol) {
  Controls c;
  c.rtol = tol.ode_rtol;
  c.cap = tol.ode_cap;
  return c;
}

ProfileResult integrate_profile(double S0, double c, const Controls& ctl) {
  if (!(ctl.epsilon > 0.0) || !(ctl.delta > 0.0) || !(ctl.t_max > ctl.epsilon) || !(ctl.rtol > 0.0))
    throw SpecError("ODE controls need epsilon > 0, delta > 0, t_max > epsilon, rtol > 0");
  ProfileResult res;
  const ProfileState s0 = pole_series(S0, c, ctl.epsilon);
  State x{s0.rho, s0.drho, s0.S, s0.dS};
  res.S_min = res.S_max = x[2];
  if (ctl.keep_trajectory) res.trajectory.push_back(s0);

  auto sys = [c](const State& y, State& dy, double) { field(y, dy, c); };
  auto stepper = odeint::make_dense_output(ctl.atol, ctl.rtol, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(x, ctl.epsilon, 1e-3);

  while (true) {
    if (res.steps >= ctl.max_steps) {
      res.outcome = Outcome::StepFailure;
      res.message = "step limit reached";
      break;
    }
    const double t0 = stepper.current_time();
    std::pair<double, double> span;
    try {
      span = stepper.do_step(sys);
    } catch (const std::exception& e) {
      res.outcome = Outcome::StepFailure;
      res.message = e.what();
      break;
    }
    ++res.steps;
    const double t1 = span.second;
    State y = stepper.current_state();
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(y[2]) || !std::isfinite(y[3])) {
      res.outcome = Outcome::StepFailure;
      res.message = "non-finite state";
      break;
    }
    if (t1 - t0 < 1e-14 * std::max(1.0, t1)) {
      res.outcome = Outcome::StepFailure;
      res.message = "step size underflow";
      break;
    }

    if (y[0] < ctl.delta && y[1] < 0.0) {
      // bisect the dense output for rho = delta
      double lo = t0, hi = t1;
      State z;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        stepper.calc_state(mid, z);
        (z[0] < ctl.delta ? hi : lo) = mid;
      }
      stepper.calc_state(hi, z);
      res.S_min = std::min(res.S_min, z[2]);
      res.S_max = std::max(res.S_max, z[2]);
      res.last = unpack(hi, z);
      if (ctl.keep_trajectory) res.trajectory.push_back(res.last);
      if (std::abs(z[1] + 1.0) <= ctl.cap && std::abs(z[3]) <= ctl.cap) {
        res.outcome = Outcome::Closed;
        res.t_close = hi + z[0] / (-z[1]);
      } else {
        // rho reaches zero without a smooth cap: a conical or cusp point
        res.outcome = Outcome::CurvatureBlowUp;
        res.message = "singular closure";
      }
      return res;
    }
    res.S_min = std::min(res.S_min, y[2]);
    res.S_max = std::max(res.S_max, y[2]);
    res.last = unpack(t1, y);
    if (ctl.keep_trajectory) res.trajectory.push_back(res.last);
    if (std::abs(y[2]) > ctl.blowup) {
      res.outcome = Outcome::CurvatureBlowUp;
      res.message = "|S| exceeded the blow-up threshold";
      break;
    }
    if (y[0] <= 0.0) {
      res.outcome = Outcome::CurvatureBlowUp;
      res.message = "singular closure";
      break;
    }
    if (t1 >= ctl.t_max) {
      res.outcome = Outcome::CompleteOpen;
      break;
    }
  }
  return res;
}

std::vector<double> Grid::values() const {
  std::vector<double> v;
  if (count == 0) return v;
  if (count == 1) return {lo};
  for (std::size_t i = 0; i < count; ++i)
    v.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return v;
}

ScanConfig scan_config_from_json(const std::string& text) {
  const json doc = detail::parse_json(text, "scan config");
  detail::reject_unknown(doc, {"S0", "c", "extra", "epsilon", "delta", "t_max", "rtol", "atol", "blowup", "cap",
                               "closed_srange"},
                         "scan config");
  ScanConfig cfg;
  cfg.S0 = read_grid(doc, "S0", cfg.S0);
  cfg.c = read_grid(doc, "c", cfg.c);
  if (doc.contains("extra")) {
    cfg.extra.clear();
    if (!doc["extra"].is_array()) throw SpecError("'extra' must be an array of [S0, c] pairs");
    for (const auto& e : doc["extra"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw SpecError("'extra' entries must be [S0, c]");
      cfg.extra.push_back({e[0].get<double>(), e[1].get<double>()});
    }
  }
  Controls& k = cfg.controls;
  k.epsilon = detail::num(doc, "epsilon", k.epsilon);
  k.delta = detail::num(doc, "delta", k.delta);
  k.t_max = detail::num(doc, "t_max", k.t_max);
  k.rtol = detail::num(doc, "rtol", k.rtol);
  k.atol = detail::num(doc, "atol", k.atol);
  k.blowup = detail::num(doc, "blowup", k.blowup);
  k.cap = detail::num(doc, "cap", k.cap);
  cfg.closed_srange = detail::num(doc, "closed_srange", cfg.closed_srange);
  if (!(k.epsilon > 0.0) || !(k.delta > 0.0) || !(k.t_max > k.epsilon) || !(k.rtol > 0.0) || !(k.atol > 0.0))
    throw SpecError("scan config needs epsilon, delta, rtol, atol > 0 and t_max > epsilon");
  return cfg;
}

ScanConfig scan_config_from_file(const std::string& path) { return scan_config_from_json(detail::read_file(path)); }

ScanReport scan(const ScanConfig& cfg) {
  std::vector<std::array<double, 2>> cells;
  const auto s0 = cfg.S0.values();
  const auto cs = cfg.c.values();
  for (double a : s0)
    for (double b : cs) cells.push_back({a, b});
  cells.insert(cells.end(), cfg.extra.begin(), cfg.extra.end());

  Controls ctl = cfg.controls;
  ctl.keep_trajectory = false;
  auto results = parallel_map(cells.size(), [&](std::size_t i) { return integrate_profile(cells[i][0], cells[i][1], ctl); });

  ScanReport rep;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    ScanRow row{cells[i][0], cells[i][1], std::move(results[i])};
    switch (row.result.outcome) {
      case Outcome::Closed: {
        ++rep.closed;
        const double range = row.result.S_max - row.result.S_min;
        rep.max_closed_srange = std::max(rep.max_closed_srange, range);
        if (range > cfg.closed_srange) rep.corroborates = false;
        break;
      }
      case Outcome::CompleteOpen: ++rep.open; break;
      case Outcome::CurvatureBlowUp: ++rep.blowup; break;
      case Outcome::StepFailure: ++rep.failures; break;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::string scan_csv(const ScanReport& r) {
  std::string out = "S0,c,class,t_close,S_min,S_max\n";
  for (const auto& row : r.rows) {
    out += g17(row.S0) + "," + g17(row.c) + "," + to_string(row.result.outcome) + "," +
           (row.result.t_close ? g17(*row.result.t_close) : std::string()) + "," + g17(row.result.S_min) + "," +
           g17(row.result.S_max) + "\n";
  }
  return out;
}

std::string scan_json(const ScanReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j;
    j["S0"] = row.S0;
    j["c"] = row.c;
    j["class"] = to_string(row.result.outcome);
    j["t_close"] = row.result.t_close ? json(*row.result.t_close) : json(nullptr);
    j["S_min"] = row.result.S_min;
    j["S_max"] = row.result.S_max;
    rows.push_back(std::move(j));
  }
  json doc;
  doc["rows"] = std::move(rows);
  doc["summary"] = {{"closed", r.closed},
                    {"complete_open", r.open},
                    {"curvature_blowup", r.blowup},
                    {"step_failure", r.failures},
                    {"max_closed_s_range", r.max_closed_srange},
                    {"corroborates", r.corroborates}};
  return doc.dump(2) + "\n";
}

}  // namespace bachlab::ode
