#pragma once

// Pointwise and integral identities behind the soliton rigidity results.
//
// Integral identities are tested on constructed soliton data: given X and
// phi, q := L_X g - 2 phi g satisfies the extended soliton equation by
// definition. "Conformal" means |trace-free part of L_X g|_g <= tol.conformal
// at every evaluation point.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bachlab/catalog.hpp"
#include "bachlab/tolerances.hpp"

namespace bachlab {

/// Rank-2 jet tensor from n*n component expressions.
JetTensor sym2_jet(const Manifold& m, const std::vector<Expr>& comps, std::span<const double> p, int order);

/// <L_X g, T> - [2 div(i_X T) - 2 (div T)(X)]
double lemma35_pointwise(const Manifold& m, const std::vector<Expr>& T, const std::vector<Expr>& X,
                         std::span<const double> p);

/// div(L_X g) - div(q0) - (2/n) d(div X), q0 the trace-free part of the
/// constructed q.
Tensor div_lie_identity(const Manifold& m, const std::vector<Expr>& X, const Expr& phi, std::span<const double> p);

/// |trace-free part of L_X g|_g at p.
double conformal_defect(const Manifold& m, const std::vector<Expr>& X, std::span<const double> p);

/// L_X S + 2 sigma S + 2(n-1) Delta sigma, sigma = div X / n. Throws
/// HypothesisError when X is not conformal at p.
double yano_pointwise(const Manifold& m, const std::vector<Expr>& X, std::span<const double> p, const Tolerances& tol);

/// div(Hess h) - Ric(grad h) - d(Delta h)
Tensor bochner_pointwise(const Manifold& m, const Expr& h, std::span<const double> p);

struct IntegralBalance {
  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 0.0;  // largest |integral| of any single term
  double imbalance() const { return std::abs(lhs - rhs); }
  double relative() const { return scale > 0.0 ? imbalance() / scale : imbalance(); }
};

struct Thm32Result {
  IntegralBalance first;   // int(phi tr q + (tr q)^2/(2n) + (div q)(X)) = -(1/2) int |q0|^2
  IntegralBalance second;  // int (div q0)(X) = -(1/2) int |L0_X g|^2
  std::size_t nodes = 0;
};

/// Requires a compact manifold.
Thm32Result thm32_integrals(const Manifold& m, const std::vector<Expr>& X, const Expr& phi);

struct LadderStep {
  double scale = 0.0;  // resolution multiplier
  std::size_t nodes = 0;
  double relative = 0.0;
};

/// Relative imbalance treated as exact integration on the ladder.
inline constexpr double kLadderRoundoff = 1e-13;

struct Thm32Ladder {
  std::vector<LadderStep> first, second;
  /// Coarsest step meeting the tolerance, and the shrink factor of the
  /// imbalance when that resolution is doubled.
  double first_relative = 0.0, first_shrink = 0.0;
  double second_relative = 0.0, second_shrink = 0.0;
  /// The coarsest step already integrates to roundoff; shrink is reported
  /// as infinite.
  bool first_exact = false, second_exact = false;
  Thm32Result production;  // resolution multiplier 1
  bool pass = false;
};

/// Walks resolution multipliers upward until both balances are within
/// tol.integral_identity, then doubles once and measures the shrink.
/// Balances at roundoff already on the coarsest step count as exact.
Thm32Ladder thm32_convergence(const Manifold& m, const std::vector<Expr>& X, const Expr& phi, const Tolerances& tol);

enum class BianchiTensor { Ricci, ScalarTimesMetric };

struct BourguignonEzinResult {
  double integral = 0.0;      // int L_X tr q
  double abs_scale = 0.0;     // int |tr q|
  double conformal = 0.0;     // sup |L0_X g| over the nodes
  double bianchi = 0.0;       // sup |div q - (1/2) d tr q|
  std::size_t nodes = 0;
  bool pass = false;
};

/// Throws HypothesisError when X is not conformal or q fails the
/// Bianchi-type condition.
BourguignonEzinResult bourguignon_ezin(const Manifold& m, const std::vector<Expr>& X, BianchiTensor q,
                                       const Tolerances& tol);

struct Thm38Result {
  double eq54 = 0.0;            // int(|q0|^2 + ((n-2)/n) L_X tr q)
  double eq54_scale = 0.0;      // int |q0|^2 + int |((n-2)/n) L_X tr q|
  double lie_trace_integral = 0.0;
  double bianchi = 0.0;         // sup |div q - (1/2) d tr q|
  double tracefree_lie = 0.0;   // sup |L0_X g|
  bool hypotheses = false;
  bool conformal = false;       // the measured verdict
  bool consistent = false;      // hypotheses and vanishing eq54 imply conformal
  std::size_t nodes = 0;
};

/// With enforce = true, violated hypotheses throw HypothesisError;
/// otherwise they are recorded (controls).
Thm38Result thm38_eq54(const Manifold& m, const std::vector<Expr>& X, const Expr& phi, const Tolerances& tol,
                       bool enforce = true);

struct Lemma48Result {
  double c_mean = 0.0, c_spread = 0.0;
  bool hypothesis = false;             // c = Delta S + S^2/3 constant
  double gradient_identity = 0.0;      // sup |d(S^2) + 3 d(Delta S)|
  double hess_norm_integral = 0.0;     // int |Hess S|^2
  double quarter_lap_integral = 0.0;   // (1/4) int (Delta S)^2
  double parts_integral = 0.0;         // -int div(Hess S)(grad S)
  double cauchy_schwarz_margin = 0.0;  // min(|Hess S|^2 - (Delta S)^2/2)
  double max_lap_s = 0.0;
  double s_spread = 0.0;
  bool pass = false;
};

/// Compact surfaces only. With require_hypothesis the call throws
/// HypothesisError when c is not constant; otherwise the general
/// identities (integration by parts, Cauchy-Schwarz) are still evaluated.
Lemma48Result lemma48_machinery(const Manifold& m, const Tolerances& tol, bool require_hypothesis = true);

// ---------------------------------------------------------------------------
// Identity-case documents

struct IdentityCase {
  std::string id;  // lemma35 | thm32 | divlie | yano | be | thm38 | bochner | lemma48
  Manifold manifold;
  std::vector<Expr> X, T;
  std::optional<Expr> phi, h;
  BianchiTensor q = BianchiTensor::Ricci;
  std::size_t points = 50;
  std::uint64_t seed = 1;
  std::optional<double> tolerance;
};

/// {"id", "manifold", "X": [..], "T": [[..]], "phi", "h", "q": "ricci" |
///  "scalar_metric", "points", "seed", "tolerance"}
IdentityCase identity_case_from_json(const std::string& text);
IdentityCase identity_case_from_file(const std::string& path);

/// Smooth conformal field on the round 2-sphere chart: grad(cos theta).
std::vector<Expr> sphere_conformal_field(const Manifold& m, std::size_t factor = 0);

}  // namespace bachlab
