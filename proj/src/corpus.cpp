#include "bachlab/corpus.hpp"

#include <cmath>
#include <cstdio>

#include "bachlab/error.hpp"

namespace bachlab::corpus {

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

const char* kNames[] = {"x", "y", "z", "w"};

// a*sin(b.x + c) with random b, c; keeps |value| <= |a|
std::string wave(const std::vector<std::string>& vars, Rng& rng, double a) {
  std::string arg = fmt(uniform(rng, -1.0, 1.0));
  for (const auto& v : vars) arg += " + " + fmt(uniform(rng, -1.5, 1.5)) + "*" + v;
  const bool use_cos = uniform(rng, 0.0, 1.0) < 0.5;
  return fmt(a) + "*" + (use_cos ? "cos(" : "sin(") + arg + ")";
}

std::string ambient(const std::string& which) {
  if (which == "x") return "sin(theta)*cos(phi)";
  if (which == "y") return "sin(theta)*sin(phi)";
  return "cos(theta)";
}

}  // namespace

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ChartSpec random_metric(int dim, Rng& rng) {
  if (dim < 2 || dim > 4) throw SpecError("random metrics have dimension 2..4");
  std::vector<std::string> coords(kNames, kNames + dim);
  std::vector<std::vector<std::string>> g(static_cast<std::size_t>(dim), std::vector<std::string>(static_cast<std::size_t>(dim)));
  // diagonal >= 1 - 0.25 - 0.05; off-diagonal row sums <= 3 * 0.08
  for (int i = 0; i < dim; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    g[ui][ui] = "1 + " + wave(coords, rng, 0.25) + " + " + fmt(0.05) + "*exp(" + wave(coords, rng, 0.8) + ")";
    for (int j = 0; j < i; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      g[ui][uj] = g[uj][ui] = wave(coords, rng, 0.08);
    }
  }
  std::vector<Interval> box(static_cast<std::size_t>(dim), Interval{-0.5, 0.5});
  ChartSpec c = charts::custom(coords, box, std::vector<bool>(static_cast<std::size_t>(dim), false), g, {}, false);
  c.kind = "random_metric";
  c.sample_margin = 0.0;
  return c;
}

ChartSpec conformal_rescale(const ChartSpec& c, const std::string& u) {
  const Expr ue = Expr::parse(u, c.symbols());
  ChartSpec out = c;
  out.kind = c.kind + "_rescaled";
  for (auto& e : out.g) e = Expr::parse("exp(2*(" + ue.to_string() + "))*(" + e.to_string() + ")", c.symbols());
  out.validate();
  return out;
}

std::string random_function(const ChartSpec& c, Rng& rng, double amplitude) {
  return wave(c.coords, rng, amplitude) + " + " + wave(c.coords, rng, 0.5 * amplitude);
}

std::vector<ThreeManifold> three_manifolds(Rng& rng, int random_count) {
  std::vector<ThreeManifold> out;
  out.push_back({"round_s3", charts::round_sphere(3, 1.0), true});
  out.push_back({"round_s3_r2", charts::round_sphere(3, 2.0), true});
  out.push_back({"euclidean3", charts::euclidean(3), true});
  out.push_back({"hyperbolic3",
                 charts::custom({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {0.5, 2}}, {false, false, false},
                                {{"1/z^2", "0", "0"}, {"0", "1/z^2", "0"}, {"0", "0", "1/z^2"}}, {}, false),
                 true});
  out.push_back({"berger_0.7", charts::berger_sphere(0.7), false});
  out.push_back({"berger_1.5", charts::berger_sphere(1.5), false});
  out.push_back({"s2_x_r",
                 charts::custom({"theta", "phi", "z"}, {{0, 3.141592653589793}, {0, 6.283185307179586}, {-1, 1}},
                                {false, true, false},
                                {{"1", "0", "0"}, {"0", "sin(theta)^2", "0"}, {"0", "0", "1"}}, {}, false),
                 false});
  for (int k = 0; k < random_count; ++k) out.push_back({"random3_" + std::to_string(k), random_metric(3, rng), false});
  return out;
}

std::vector<ChartSpec> surfaces(Rng& rng, int random_count) {
  std::vector<ChartSpec> out;
  out.push_back(charts::round_sphere(2, 1.0));
  out.push_back(charts::hyperbolic_2(1.0));
  out.push_back(charts::euclidean(2));
  out.push_back(charts::conformal_round_sphere("0.2*cos(theta) + 0.1*sin(theta)*cos(phi)"));
  out.push_back(charts::surface_of_revolution("sin(t)*(1 + 0.2*cos(t)^2)"));
  for (int k = 0; k < random_count; ++k) out.push_back(random_metric(2, rng));
  return out;
}

std::string sphere_function(Rng& rng, double amplitude) {
  const std::string x = ambient("x"), y = ambient("y"), z = ambient("z");
  return fmt(amplitude) + "*(" + fmt(uniform(rng, -1, 1)) + " + exp(" + fmt(uniform(rng, -0.6, 0.6)) + "*" + x +
         " + " + fmt(uniform(rng, -0.6, 0.6)) + "*" + y + ") * cos(" + fmt(uniform(rng, -1, 1)) + "*" + z + " + " +
         fmt(uniform(rng, -1, 1)) + "))";
}

// coordinate components of grad x_i and J grad x_i on the unit sphere
const char* const kGrad[3][2] = {{"cos(theta)*cos(phi)", "-sin(phi)/sin(theta)"},
                                 {"cos(theta)*sin(phi)", "cos(phi)/sin(theta)"},
                                 {"-sin(theta)", "0"}};
const char* const kJGrad[3][2] = {{"sin(phi)", "cos(theta)*cos(phi)/sin(theta)"},
                                  {"-cos(phi)", "cos(theta)*sin(phi)/sin(theta)"},
                                  {"0", "1"}};

std::vector<std::string> sphere_vector_field(Rng& rng) {
  std::string th = "0", ph = "0";
  for (int i = 0; i < 3; ++i)
    for (const auto* basis : {kGrad, kJGrad}) {
      const std::string h = "(" + sphere_function(rng, uniform(rng, 0.3, 1.0)) + ")";
      th += " + " + h + "*(" + basis[i][0] + ")";
      ph += " + " + h + "*(" + basis[i][1] + ")";
    }
  return {th, ph};
}

std::vector<std::string> sphere_mobius_field(Rng& rng) {
  std::string th = "0", ph = "0";
  for (int i = 0; i < 3; ++i)
    for (const auto* basis : {kGrad, kJGrad}) {
      const std::string a = fmt(uniform(rng, -1.0, 1.0));
      th += " + " + a + "*(" + basis[i][0] + ")";
      ph += " + " + a + "*(" + basis[i][1] + ")";
    }
  return {th, ph};
}

std::string torus_function(Rng& rng, double amplitude) {
  auto k = [&] { return fmt(std::floor(uniform(rng, -2.0, 3.0))); };
  return fmt(amplitude) + "*(" + fmt(uniform(rng, -1, 1)) + " + exp(" + fmt(uniform(rng, 0.2, 0.7)) + "*sin(" + k() +
         "*x + " + k() + "*y + " + fmt(uniform(rng, 0, 6)) + ")) + " + fmt(uniform(rng, -1, 1)) + "*cos(" + k() +
         "*x + " + k() + "*y + " + fmt(uniform(rng, 0, 6)) + "))";
}

std::vector<std::string> torus_vector_field(Rng& rng) {
  return {torus_function(rng, uniform(rng, 0.3, 1.0)), torus_function(rng, uniform(rng, 0.3, 1.0))};
}

std::string sphere_conformal_factor(Rng& rng) {
  const std::string x = ambient("x"), y = ambient("y"), z = ambient("z");
  return fmt(uniform(rng, -0.3, 0.3)) + "*" + z + " + " + fmt(uniform(rng, -0.2, 0.2)) + "*" + x + "*" + y + " + " +
         fmt(uniform(rng, -0.15, 0.15)) + "*exp(" + fmt(uniform(rng, -0.5, 0.5)) + "*" + y + ")";
}

}  // namespace bachlab::corpus
