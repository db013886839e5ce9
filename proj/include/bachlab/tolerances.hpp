#pragma once

// Every numerical threshold used by checks, in one table. Runs may override
// entries by name (`--tol name=value` on the command line).

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bachlab {

struct Tolerances {
  double fd_relative = 1e-6;          // jet vs finite-difference oracle
  double riemann_symmetry = 1e-9;
  double bianchi = 1e-7;
  double bach_trace = 1e-8;
  double bach_divergence = 1e-6;
  double bach_conformal = 1e-6;
  double product_formula = 1e-8;
  double ho_residual = 1e-9;
  double soliton_residual = 1e-7;
  double berger_residual = 1e-7;
  double pointwise_identity = 1e-7;
  double integral_identity = 1e-7;    // relative to the largest term
  double integral_shrink = 10.0;      // required imbalance reduction on doubling
  double conformal = 1e-9;            // sup |trace-free part of L_X g|
  double einstein = 1e-10;            // |Ric - (S/n) g|^2 for "Einstein"
  double sign_law_zero = 1e-9;
  double volume = 1e-8;
  double ode_closed_srange = 1e-5;
  double ode_round_profile = 1e-7;
  double ode_closure_time = 1e-6;
  double ode_convergence = 1e-8;     // closure-time change when rtol is halved
  double ode_cap = 1e-4;              // |rho' + 1|, |S'| at the closure event
  double ode_rtol = 1e-10;
  double root = 1e-13;                // root-finder bracket width

  /// Names in declaration order.
  static const std::vector<std::string>& names();
  double get(std::string_view name) const;
  /// Throws SpecError on an unknown name.
  void set(std::string_view name, double value);
  std::map<std::string, double> as_map() const;
};

}  // namespace bachlab
