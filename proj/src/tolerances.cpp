#include "bachlab/tolerances.hpp"

#include <utility>

#include "bachlab/error.hpp"

namespace bachlab {

namespace {

using Field = double Tolerances::*;

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> f = {
      {"fd_relative", &Tolerances::fd_relative},
      {"riemann_symmetry", &Tolerances::riemann_symmetry},
      {"bianchi", &Tolerances::bianchi},
      {"bach_trace", &Tolerances::bach_trace},
      {"bach_divergence", &Tolerances::bach_divergence},
      {"bach_conformal", &Tolerances::bach_conformal},
      {"product_formula", &Tolerances::product_formula},
      {"ho_residual", &Tolerances::ho_residual},
      {"soliton_residual", &Tolerances::soliton_residual},
      {"berger_residual", &Tolerances::berger_residual},
      {"pointwise_identity", &Tolerances::pointwise_identity},
      {"integral_identity", &Tolerances::integral_identity},
      {"integral_shrink", &Tolerances::integral_shrink},
      {"conformal", &Tolerances::conformal},
      {"einstein", &Tolerances::einstein},
      {"sign_law_zero", &Tolerances::sign_law_zero},
      {"volume", &Tolerances::volume},
      {"ode_closed_srange", &Tolerances::ode_closed_srange},
      {"ode_round_profile", &Tolerances::ode_round_profile},
      {"ode_closure_time", &Tolerances::ode_closure_time},
      {"ode_convergence", &Tolerances::ode_convergence},
      {"ode_cap", &Tolerances::ode_cap},
      {"ode_rtol", &Tolerances::ode_rtol},
      {"root", &Tolerances::root},
  };
  return f;
}

Field lookup(std::string_view name) {
  for (const auto& [n, f] : fields())
    if (n == name) return f;
  throw SpecError("unknown tolerance '" + std::string(name) + "'");
}

}  // namespace

const std::vector<std::string>& Tolerances::names() {
  static const std::vector<std::string> n = [] {
    std::vector<std::string> v;
    for (const auto& [name, f] : fields()) v.push_back(name);
    return v;
  }();
  return n;
}

double Tolerances::get(std::string_view name) const { return this->*lookup(name); }

void Tolerances::set(std::string_view name, double value) {
  if (!(value > 0.0)) throw SpecError("tolerance '" + std::string(name) + "' must be positive");
  this->*lookup(name) = value;
}

std::map<std::string, double> Tolerances::as_map() const {
  std::map<std::string, double> m;
  for (const auto& [n, f] : fields()) m[n] = this->*f;
  return m;
}

}  // namespace bachlab
