#pragma once

// Truncated multivariate Taylor arithmetic.
//
// A Jet of dimension d and order K stores the Taylor coefficients
// c[a] = (d^a f)(p) / a! for every multi-index |a| <= K, densely, in
// graded-lexicographic order. Because the ordering is graded, the first
// size(d, K') coefficients of an order-K jet are exactly the order-K' jet
// (K' <= K), so truncation is a prefix copy.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bachlab {

inline constexpr int kMaxJetDim = 4;
inline constexpr int kMaxJetOrder = 5;
inline constexpr std::size_t kMaxJetCoeffs = 126;  // C(4 + 5, 4)

struct MultiIndex {
  std::array<std::uint8_t, kMaxJetDim> e{};
  int dim = 0;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> exps);
  static MultiIndex zero(int dim);
  static MultiIndex unit(int dim, int i, int times = 1);

  int degree() const;
  /// a! = prod a_i!
  double factorial() const;
  MultiIndex operator+(const MultiIndex& o) const;
  bool operator==(const MultiIndex& o) const = default;
};

/// Index tables for one (dim, order) pair. Built once per pair and shared.
struct JetLayout {
  int dim = 0;
  int order = 0;
  std::size_t size = 0;
  std::vector<MultiIndex> indices;     // graded-lex
  std::vector<std::uint8_t> degree;    // degree of indices[k]
  // Cauchy product grouped by output coefficient:
  // out[k] = sum_{p in [offsets[k], offsets[k+1])} a[lhs[p]] * b[rhs[p]]
  std::vector<std::int32_t> mul_offsets;
  std::vector<std::int32_t> mul_lhs;
  std::vector<std::int32_t> mul_rhs;
  // d/dx_i: coefficient k of the order-1 result comes from
  // deriv_src[i][k] of this layout scaled by deriv_scale[i][k].
  std::array<std::vector<std::int32_t>, kMaxJetDim> deriv_src;
  std::array<std::vector<double>, kMaxJetDim> deriv_scale;

  /// Position of a in this layout; -1 if degree(a) > order.
  int index_of(const MultiIndex& a) const;

  // encoded exponents -> position
  std::vector<std::int32_t> lookup;
};

/// Number of coefficients of a (dim, order) jet.
std::size_t jet_size(int dim, int order);
const JetLayout& jet_layout(int dim, int order);

class Jet {
 public:
  Jet() : dim_(1), order_(0) { c_[0] = 0.0; }
  Jet(int dim, int order);
  Jet(const Jet& o);
  Jet& operator=(const Jet& o);

  static Jet constant(double value, int dim, int order);
  /// x_i expanded at `value`.
  static Jet variable(int i, double value, int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  std::size_t size() const { return jet_size(dim_, order_); }
  const JetLayout& layout() const { return jet_layout(dim_, order_); }

  double value() const { return c_[0]; }
  std::span<const double> coeffs() const { return {c_.data(), size()}; }
  std::span<double> coeffs() { return {c_.data(), size()}; }
  double operator[](std::size_t k) const { return c_[k]; }
  double& operator[](std::size_t k) { return c_[k]; }

  /// Taylor coefficient of x^a.
  double coeff(const MultiIndex& a) const;
  /// d^a f at the base point, i.e. a! * coeff(a).
  double partial(const MultiIndex& a) const;

  /// Jet of d f / d x_i; one order lower.
  Jet derivative(int i) const;
  /// Prefix truncation to a lower order.
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

  /// this += alpha * x
  Jet& axpy(double alpha, const Jet& x);

 private:
  void require_same_shape(const Jet& o, const char* op) const;

  std::uint8_t dim_;
  std::uint8_t order_;
  std::array<double, kMaxJetCoeffs> c_;
};

Jet operator-(const Jet& a);
Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(Jet a, double s);
Jet operator-(double s, const Jet& a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator/(Jet a, double s);
Jet operator/(double s, const Jet& a);

/// Multiplicative inverse by Newton iteration r <- r (2 - b r).
Jet reciprocal(const Jet& b);

enum class ElemFn { Sin, Cos, Exp, Sinh, Cosh, Sqrt, Log };

const char* to_string(ElemFn fn);

/// f(j): univariate Taylor series of f at j.value() composed with
/// (j - j.value()) by truncated Horner evaluation.
Jet compose(ElemFn fn, const Jet& j);
/// j^n for any integer n (n < 0 needs a nonzero constant term).
Jet pow(const Jet& j, int n);

inline Jet sin(const Jet& j) { return compose(ElemFn::Sin, j); }
inline Jet cos(const Jet& j) { return compose(ElemFn::Cos, j); }
inline Jet exp(const Jet& j) { return compose(ElemFn::Exp, j); }
inline Jet sinh(const Jet& j) { return compose(ElemFn::Sinh, j); }
inline Jet cosh(const Jet& j) { return compose(ElemFn::Cosh, j); }
inline Jet sqrt(const Jet& j) { return compose(ElemFn::Sqrt, j); }
inline Jet log(const Jet& j) { return compose(ElemFn::Log, j); }

/// Re-express a jet in a larger chart: variable k of `j` becomes variable
/// map[k] of a `dim`-variable jet of the same order.
Jet embed(const Jet& j, int dim, std::span<const int> map);

/// Taylor coefficients of fn at x0 up to `order` (c_k = f^(k)(x0)/k!).
std::vector<double> univariate_taylor(ElemFn fn, double x0, int order);

}  // namespace bachlab
