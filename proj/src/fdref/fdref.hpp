#pragma once

// Finite-difference curvature reference. Uses only pointwise metric
// evaluation: nested 6th-order central differences on a lattice around the
// base point, memoized per offset. Riemann comes from the classical
// second-derivative formula, not from derivatives of Gamma.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bachlab/catalog.hpp"

namespace bachlab::fdref {

struct FdCurvature {
  Tensor gamma;       // Gamma^k_ij
  Tensor riemann;     // R_abcd
  Tensor ricci;
  double scalar = 0.0;
  Tensor ricci_squared;
  double ricci_norm2 = 0.0;
  Tensor schouten;
  Tensor weyl;
  Tensor grad_scalar;
  Tensor grad_ricci;  // (k, i, j) = nabla_k Ric_ij
  Tensor cotton;      // (k, i, j) = nabla_k P_ij - nabla_i P_kj
  Tensor hess_scalar;
  double laplacian_scalar = 0.0;
  Tensor laplacian_ricci;
  Tensor bach;
  Tensor bach_flow;
  std::size_t metric_evaluations = 0;
};

FdCurvature compute(const Manifold& m, std::span<const double> p, double h = 0.02);

/// The same quantities read off a jet-based pack (values only).
FdCurvature from_pack(const CurvaturePack& pack);

/// Per-quantity max |a - b| / max(1, |b|_inf), b the reference.
std::vector<std::pair<std::string, double>> compare(const FdCurvature& fd, const FdCurvature& other);

}  // namespace bachlab::fdref
