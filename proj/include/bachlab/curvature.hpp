#pragma once

// Curvature of a Riemannian metric at a point, from the jet of its
// components in a coordinate chart.
//
// Index conventions (docs/conventions.md):
//   christoffel  G(k,i,j)   = Gamma^k_ij
//   riemann_up   R(l,i,j,k) = R^l_ijk, R(d_i, d_j) d_k = R^l_ijk d_l
//   riemann      R(a,b,c,d) = R_abcd with R_abab > 0 on round spheres
//   ricci        Ric_bd = g^ac R_abcd
//   schouten     P = (Ric - S g / (2(n-1))) / (n-2)
//   cotton       C(k,i,j) = nabla_k P_ij - nabla_i P_kj
//   weyl         W = R - P (Kulkarni-Nomizu) g
//   bach         B_ab = nabla^c C_cab + P^cd W_acbd          (n = 4)
//   covariant derivatives put the new index first: (nabla T)(m, i, j)
//   Laplacians are tr_g Hess (nonpositive spectrum).
//
// Jet-order bookkeeping: a metric of order N gives Gamma at N-1, curvature
// at N-2, Cotton and nabla Ric at N-3, Bach, Hess S and Delta Ric at N-4.
// Reading a quantity whose order would be negative throws OrderError.

#include <optional>
#include <string>

#include "bachlab/error.hpp"
#include "bachlab/tensor.hpp"

namespace bachlab {

struct MetricJet {
  int n = 0;
  int order = 0;
  JetTensor g;     // g_ij
  JetTensor ginv;  // g^ij

  /// Validates symmetry and positive definiteness at the base point and
  /// inverts by jet Gauss-Jordan; checks g^ik g_kj = delta to 1e-12.
  static MetricJet from_components(JetTensor g);
};

JetTensor christoffel(const MetricJet& m);

/// nabla T for an all-lower tensor T (rank 0..3); new index first.
JetTensor covariant_derivative(const JetTensor& T, const JetTensor& gamma);

/// Index raising/lowering on a chosen slot.
JetTensor raise_index(const JetTensor& T, const MetricJet& m, int slot);
JetTensor lower_index(const JetTensor& T, const MetricJet& m, int slot);

Jet trace(const JetTensor& T, const MetricJet& m);
JetTensor trace_free(const JetTensor& T, const MetricJet& m);
/// <A, B>_g for two (0,2) tensors.
Jet inner_sym2(const JetTensor& A, const JetTensor& B, const MetricJet& m);
/// Norm squared of a 1-form.
Jet norm2_oneform(const JetTensor& w, const MetricJet& m);

JetTensor gradient_oneform(const Jet& f);  // df
JetTensor hessian_scalar(const Jet& f, const JetTensor& gamma);
Jet laplacian_scalar(const Jet& f, const MetricJet& m, const JetTensor& gamma);
/// Rough Laplacian g^kl nabla_k nabla_l T of a (0,2) tensor.
JetTensor laplacian_sym2(const JetTensor& T, const MetricJet& m, const JetTensor& gamma);
/// (div T)_j = g^ik nabla_i T_kj
JetTensor divergence_sym2(const JetTensor& T, const MetricJet& m, const JetTensor& gamma);
/// div X = nabla_i X^i for a vector field given by upper components.
Jet divergence_vector(const JetTensor& X_up, const JetTensor& gamma);
/// (L_X g)_ij = nabla_i X_j + nabla_j X_i
JetTensor lie_derivative_metric(const JetTensor& X_up, const MetricJet& m, const JetTensor& gamma);
/// X(f) = X^i d_i f
Jet directional_derivative(const JetTensor& X_up, const Jet& f);
/// Upper components of grad f.
JetTensor gradient_vector(const Jet& f, const MetricJet& m);
/// i_X T, a 1-form: (i_X T)_j = X^i T_ij
JetTensor contract_vector(const JetTensor& X_up, const JetTensor& T);
/// Divergence of a 1-form: g^ij nabla_i w_j
Jet divergence_oneform(const JetTensor& w, const MetricJet& m, const JetTensor& gamma);

/// All curvature objects at a point. Immutable once computed.
class CurvaturePack {
 public:
  static CurvaturePack compute(const MetricJet& m);

  int n() const { return metric_.n; }
  const MetricJet& metric() const { return metric_; }
  const JetTensor& christoffel() const { return get(gamma_, "Christoffel symbols", 1); }
  const JetTensor& riemann_up() const { return get(riem_up_, "Riemann tensor", 2); }
  const JetTensor& riemann() const { return get(riem_, "Riemann tensor", 2); }
  const JetTensor& ricci() const { return get(ric_, "Ricci tensor", 2); }
  const Jet& scalar() const { return get(scal_, "scalar curvature", 2); }
  /// (Ric^2)_ij = Ric_ik g^kl Ric_lj
  const JetTensor& ricci_squared() const { return get(ric2_, "Ric^2", 2); }
  const Jet& ricci_norm2() const { return get(ric_norm2_, "|Ric|^2", 2); }
  const JetTensor& schouten() const;
  const JetTensor& weyl() const;
  const JetTensor& grad_scalar() const { return get(grad_s_, "dS", 3); }
  const JetTensor& grad_ricci() const { return get(grad_ric_, "nabla Ric", 3); }
  const JetTensor& cotton() const;
  const JetTensor& hess_scalar() const { return get(hess_s_, "Hess S", 4); }
  const Jet& laplacian_scalar() const { return get(lap_s_, "Delta S", 4); }
  const JetTensor& laplacian_ricci() const { return get(lap_ric_, "Delta Ric", 4); }
  const JetTensor& bach() const;
  /// B + (1/12) Delta S g, the tensor driving the four-dimensional flow.
  const JetTensor& bach_flow() const;

  /// div Ric - dS/2 (contracted second Bianchi identity).
  JetTensor bianchi_defect() const;

 private:
  template <class T>
  const T& get(const std::optional<T>& v, const char* what, int consumed) const {
    if (!v) throw OrderError(std::string(what) + " needs metric jet order >= " + std::to_string(consumed) +
                             " (have " + std::to_string(metric_.order) + ")");
    return *v;
  }

  MetricJet metric_;
  std::optional<JetTensor> gamma_, riem_up_, riem_, ric_, ric2_, schouten_, weyl_, grad_s_, grad_ric_, cotton_,
      hess_s_, lap_ric_, bach_, bach_flow_;
  std::optional<Jet> scal_, ric_norm2_, lap_s_;
};

}  // namespace bachlab
