// bachlab command line. Exit codes: 0 pass, 1 check failure, 2 usage or
// spec error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bachlab/catalog.hpp"
#include "bachlab/checks.hpp"
#include "bachlab/curvature.hpp"
#include "bachlab/error.hpp"
#include "bachlab/ode.hpp"
#include "bachlab/parallel.hpp"
#include "bachlab/suite.hpp"

using namespace bachlab;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit { kPass = 0, kCheckFailure = 1, kUsage = 2, kNumerical = 3 };

struct Globals {
  std::vector<std::string> tol;
  std::optional<std::uint64_t> seed;
  double resolution = 1.0;
  std::string out;
  unsigned threads = 0;
  Tolerances tolerances;
  std::map<std::string, std::string> echo;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw SpecError("cannot write '" + g.out + "'");
  f << text;
}

int finish(Globals& g, Report r) {
  r.config.insert(g.echo.begin(), g.echo.end());
  r.tolerances = g.tolerances.as_map();
  emit(g, r.to_json());
  std::fprintf(stderr, "%zu checks, %zu passed, %zu failed\n", r.checks.size(), r.passed(), r.failed());
  return r.failed() ? kCheckFailure : kPass;
}

Manifold scaled(const Globals& g, Manifold m) { return g.resolution == 1.0 ? m : m.with_resolution_scale(g.resolution); }

ojson tensor_json(const Tensor& t) {
  if (t.rank() == 0) return t[0];
  std::function<ojson(std::size_t, int)> rec = [&](std::size_t base, int depth) -> ojson {
    ojson a = ojson::array();
    std::size_t stride = 1;
    for (int r = depth + 1; r < t.rank(); ++r) stride *= static_cast<std::size_t>(t.n());
    for (int i = 0; i < t.n(); ++i) {
      const std::size_t off = base + static_cast<std::size_t>(i) * stride;
      if (depth + 1 == t.rank())
        a.push_back(t[off]);
      else
        a.push_back(rec(off, depth + 1));
    }
    return a;
  };
  return rec(0, 0);
}

std::vector<double> parse_point(const Manifold& m, const std::string& text) {
  std::map<std::string, double> given;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw SpecError("point entries look like name=value, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    try {
      std::size_t used = 0;
      const double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
      if (!given.emplace(name, v).second) throw SpecError("coordinate '" + name + "' given twice");
    } catch (const std::logic_error&) {
      throw SpecError("bad coordinate value in '" + item + "'");
    }
  }
  std::vector<double> p;
  for (const auto& c : m.coordinates()) {
    const auto it = given.find(c);
    if (it == given.end()) throw SpecError("point is missing coordinate '" + c + "'");
    p.push_back(it->second);
    given.erase(it);
  }
  if (!given.empty()) throw SpecError("unknown coordinate '" + given.begin()->first + "'");
  return p;
}

int cmd_catalog_list(Globals& g) {
  std::string text;
  char line[512];
  for (const auto& e : catalog()) {
    std::snprintf(line, sizeof line, "%-24s dim %d  %s\n", e.name.c_str(), e.dim, e.description.c_str());
    text += line;
  }
  text += "\nsoliton examples:\n";
  for (const auto& id : soliton_example_ids()) {
    const auto ex = soliton_example(id, g.tolerances);
    std::snprintf(line, sizeof line, "%-24s %s\n", id.c_str(), ex.description.c_str());
    text += line;
  }
  emit(g, text);
  return kPass;
}

int cmd_catalog_show(Globals& g, const std::string& name) {
  for (const auto& e : catalog()) {
    if (e.name != name) continue;
    ojson j;
    j["name"] = e.name;
    j["description"] = e.description;
    j["dim"] = e.dim;
    j["parameters"] = e.parameters;
    j["volume"] = e.volume;
    const Manifold m = named_manifold(name);
    j["coordinates"] = m.coordinates();
    ojson box = ojson::array();
    for (const auto& iv : m.box()) box.push_back({iv.lo, iv.hi});
    j["box"] = box;
    j["compact"] = m.compact();
    emit(g, j.dump(2) + "\n");
    return kPass;
  }
  for (const auto& id : soliton_example_ids()) {
    if (id != name) continue;
    const auto ex = soliton_example(id, g.tolerances);
    ojson j;
    j["example"] = id;
    j["description"] = ex.description;
    j["paper_anchor"] = ex.paper_anchor;
    j["manifold"] = ex.manifold.name();
    j["dim"] = ex.manifold.dim();
    j["tolerance"] = ex.tolerance;
    emit(g, j.dump(2) + "\n");
    return kPass;
  }
  throw SpecError("unknown catalog entry '" + name + "'");
}

int cmd_curvature(Globals& g, const std::string& spec, const std::string& point, int order) {
  const Manifold m = manifold_from_ref(spec);
  const auto p = parse_point(m, point);
  const auto pack = CurvaturePack::compute(m.metric_jet(p, order));
  ojson j;
  j["manifold"] = m.name();
  j["coordinates"] = m.coordinates();
  j["point"] = p;
  j["jet_order"] = order;
  const MetricJet& mj = pack.metric();
  j["metric"] = tensor_json(values(mj.g));
  j["metric_inverse"] = tensor_json(values(mj.ginv));
  auto put = [&](const char* key, auto&& get) {
    try {
      if constexpr (std::is_same_v<std::decay_t<decltype(get())>, Jet>)
        j[key] = get().value();
      else
        j[key] = tensor_json(values(get()));
    } catch (const OrderError&) {
    } catch (const DomainError&) {
    }
  };
  put("christoffel", [&]() -> const JetTensor& { return pack.christoffel(); });
  put("riemann", [&]() -> const JetTensor& { return pack.riemann(); });
  put("ricci", [&]() -> const JetTensor& { return pack.ricci(); });
  put("scalar", [&]() -> const Jet& { return pack.scalar(); });
  put("ricci_squared", [&]() -> const JetTensor& { return pack.ricci_squared(); });
  put("ricci_norm2", [&]() -> const Jet& { return pack.ricci_norm2(); });
  put("schouten", [&]() -> const JetTensor& { return pack.schouten(); });
  put("weyl", [&]() -> const JetTensor& { return pack.weyl(); });
  put("grad_scalar", [&]() -> const JetTensor& { return pack.grad_scalar(); });
  put("grad_ricci", [&]() -> const JetTensor& { return pack.grad_ricci(); });
  put("cotton", [&]() -> const JetTensor& { return pack.cotton(); });
  put("hess_scalar", [&]() -> const JetTensor& { return pack.hess_scalar(); });
  put("laplacian_scalar", [&]() -> const Jet& { return pack.laplacian_scalar(); });
  put("laplacian_ricci", [&]() -> const JetTensor& { return pack.laplacian_ricci(); });
  put("bach", [&]() -> const JetTensor& { return pack.bach(); });
  put("bach_flow", [&]() -> const JetTensor& { return pack.bach_flow(); });
  emit(g, j.dump(2) + "\n");
  return kPass;
}

int cmd_check_identity(Globals& g, const std::string& id, const std::string& path) {
  IdentityCase c = identity_case_from_file(path);
  if (!id.empty() && id != c.id) throw SpecError("--id " + id + " does not match the case id '" + c.id + "'");
  c.manifold = scaled(g, c.manifold);
  if (g.seed) c.seed = *g.seed;
  g.echo["case"] = path;
  g.echo["id"] = c.id;
  g.echo["seed"] = std::to_string(c.seed);
  Report r;
  r.command = "check identity";
  r.checks = identity_checks(c, g.tolerances);
  return finish(g, r);
}

int cmd_check_soliton(Globals& g, const std::string& example, const std::string& path, std::size_t points) {
  if (example.empty() == path.empty()) throw SpecError("give exactly one of --example and --case");
  const std::uint64_t seed = g.seed.value_or(1);
  Report r;
  r.command = "check soliton";
  g.echo["seed"] = std::to_string(seed);
  g.echo["points"] = std::to_string(points);
  if (!example.empty()) {
    const auto ex = soliton_example(example, g.tolerances);
    g.echo["example"] = example;
    r.checks = soliton_checks(ex.id, ex.paper_anchor, scaled(g, ex.manifold), ex.data, ex.tolerance, points, seed);
  } else {
    const auto spec = soliton_from_file(path);
    g.echo["case"] = path;
    r.checks = soliton_checks("case", "q-soliton equation", scaled(g, spec.manifold), spec.data,
                              spec.tolerance.value_or(g.tolerances.soliton_residual), points, seed);
  }
  return finish(g, r);
}

int cmd_solve_berger(Globals& g, const std::string& interval) {
  Interval iv = kBergerDefaultInterval;
  if (!interval.empty()) {
    const auto comma = interval.find(',');
    if (comma == std::string::npos) throw SpecError("--interval takes a,b");
    try {
      iv = {std::stod(interval.substr(0, comma)), std::stod(interval.substr(comma + 1))};
    } catch (const std::logic_error&) {
      throw SpecError("bad --interval '" + interval + "'");
    }
    if (!(iv.lo > 0.0) || !(iv.hi > iv.lo)) throw SpecError("--interval needs 0 < a < b");
  }
  const std::uint64_t seed = g.seed.value_or(1);
  g.echo["interval"] = interval.empty() ? "default" : interval;
  g.echo["seed"] = std::to_string(seed);
  Report r;
  r.command = "solve berger";
  r.checks = berger_checks(iv, g.tolerances, seed);
  return finish(g, r);
}

int cmd_ode_scan(Globals& g, const std::string& config, const std::string& format) {
  ode::ScanConfig cfg = config.empty() ? ode::ScanConfig{} : ode::scan_config_from_file(config);
  if (config.empty()) {
    cfg.controls = ode::Controls::from(g.tolerances);
    cfg.closed_srange = g.tolerances.ode_closed_srange;
  }
  const auto rep = ode::scan(cfg);
  const bool csv = format == "csv" || (format.empty() && g.out.size() > 4 && g.out.substr(g.out.size() - 4) == ".csv");
  emit(g, csv ? ode::scan_csv(rep) : ode::scan_json(rep));
  std::fprintf(stderr, "%zu cells: %zu closed, %zu open, %zu blow-up, %zu step failures; max closed S-range %.3g\n",
               rep.rows.size(), rep.closed, rep.open, rep.blowup, rep.failures, rep.max_closed_srange);
  if (!rep.corroborates) return kCheckFailure;
  return rep.failures ? kNumerical : kPass;
}

int cmd_suite(Globals& g) {
  suite::Config cfg;
  cfg.seed = g.seed.value_or(1);
  cfg.tol = g.tolerances;
  const auto results = suite::run_all(cfg);
  for (const auto& c : results) {
    std::size_t ok = 0;
    for (const auto& k : c.checks) ok += k.pass ? 1 : 0;
    std::fprintf(stderr, "[%s] %-50s %zu/%zu\n", c.pass() ? "PASS" : "FAIL", c.title.c_str(), ok, c.checks.size());
  }
  Report r = suite::suite_report(cfg, results);
  return finish(g, r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bachlab: Bach-flow soliton verification toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "tolerance override name=value (repeatable)");
  app.add_option("--seed", g.seed, "random seed for sampling");
  app.add_option("--resolution", g.resolution, "quadrature resolution multiplier")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output path (default stdout)");
  app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
  app.fallthrough();

  auto* catalog_cmd = app.add_subcommand("catalog", "named manifolds and examples");
  catalog_cmd->require_subcommand(1);
  auto* cat_list = catalog_cmd->add_subcommand("list", "list named manifolds and soliton examples");
  auto* cat_show = catalog_cmd->add_subcommand("show", "describe one entry");
  std::string show_name;
  cat_show->add_option("name", show_name, "entry name")->required();

  auto* curv = app.add_subcommand("curvature", "curvature dump at a point");
  std::string manifold_ref, point;
  int order = 4;
  curv->add_option("--manifold", manifold_ref, "catalog name or JSON manifold spec")->required();
  curv->add_option("--point", point, "coordinates, e.g. theta=1,phi=0.5")->required();
  curv->add_option("--order", order, "metric jet order (4 reaches Bach)")->check(CLI::Range(2, 5));

  auto* check = app.add_subcommand("check", "verify an identity or a soliton");
  check->require_subcommand(1);
  auto* chk_id = check->add_subcommand("identity", "identity case");
  std::string identity_id, case_path;
  chk_id->add_option("--id", identity_id, "lemma35|thm32|divlie|yano|be|thm38|bochner|lemma48");
  chk_id->add_option("--case", case_path, "identity case JSON")->required();
  auto* chk_sol = check->add_subcommand("soliton", "soliton example or spec");
  std::string example, sol_case;
  std::size_t points = 200;
  chk_sol->add_option("--example", example, "named example id");
  chk_sol->add_option("--case", sol_case, "soliton spec JSON");
  chk_sol->add_option("--points", points, "sample points");

  auto* solve = app.add_subcommand("solve", "root finding");
  solve->require_subcommand(1);
  auto* solve_berger = solve->add_subcommand("berger", "non-round Berger soliton");
  std::string interval;
  solve_berger->add_option("--interval", interval, "search interval a,b for the fiber scale");

  auto* ode_cmd = app.add_subcommand("ode", "rotationally symmetric profile ODE");
  ode_cmd->require_subcommand(1);
  auto* ode_scan = ode_cmd->add_subcommand("scan", "shooting scan over (S0, c)");
  std::string ode_config, ode_format;
  ode_scan->add_option("--config", ode_config, "scan config JSON (defaults: 41x41 grid)");
  ode_scan->add_option("--format", ode_format, "csv or json (default from --out extension)")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* suite_cmd = app.add_subcommand("suite", "acceptance suite");
  suite_cmd->require_subcommand(1);
  auto* suite_all = suite_cmd->add_subcommand("all", "run every criterion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    set_thread_count(g.threads);
    for (const auto& t : g.tol) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw SpecError("--tol takes name=value, got '" + t + "'");
      double v = 0.0;
      try {
        v = std::stod(t.substr(eq + 1));
      } catch (const std::logic_error&) {
        throw SpecError("bad tolerance value in '" + t + "'");
      }
      g.tolerances.set(t.substr(0, eq), v);
    }
    if (g.resolution != 1.0) g.echo["resolution"] = std::to_string(g.resolution);

    if (cat_list->parsed()) return cmd_catalog_list(g);
    if (cat_show->parsed()) return cmd_catalog_show(g, show_name);
    if (curv->parsed()) return cmd_curvature(g, manifold_ref, point, order);
    if (chk_id->parsed()) return cmd_check_identity(g, identity_id, case_path);
    if (chk_sol->parsed()) return cmd_check_soliton(g, example, sol_case, points);
    if (solve_berger->parsed()) return cmd_solve_berger(g, interval);
    if (ode_scan->parsed()) return cmd_ode_scan(g, ode_config, ode_format);
    if (suite_all->parsed()) return cmd_suite(g);
    std::cerr << app.help();
    return kUsage;
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kUsage;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis not met: " << e.what() << "\n";
    return kCheckFailure;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
}
