#include "bachlab/jet.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include "bachlab/error.hpp"
#include "bachlab/simd/jet_kernels.hpp"

namespace bachlab {

MultiIndex::MultiIndex(std::initializer_list<int> exps) {
  if (exps.size() > kMaxJetDim) throw OrderError("multi-index longer than the maximum jet dimension");
  dim = static_cast<int>(exps.size());
  int i = 0;
  for (int v : exps) {
    if (v < 0) throw OrderError("negative multi-index exponent");
    e[i++] = static_cast<std::uint8_t>(v);
  }
}

MultiIndex MultiIndex::zero(int dim) {
  MultiIndex m;
  m.dim = dim;
  return m;
}

MultiIndex MultiIndex::unit(int dim, int i, int times) {
  MultiIndex m = zero(dim);
  m.e[i] = static_cast<std::uint8_t>(times);
  return m;
}

int MultiIndex::degree() const {
  int d = 0;
  for (int i = 0; i < dim; ++i) d += e[i];
  return d;
}

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int i = 0; i < dim; ++i)
    for (int k = 2; k <= e[i]; ++k) f *= k;
  return f;
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  MultiIndex m = *this;
  for (int i = 0; i < dim; ++i) m.e[i] = static_cast<std::uint8_t>(e[i] + o.e[i]);
  return m;
}

namespace {

constexpr int kBase = kMaxJetOrder + 1;

int encode(const MultiIndex& a) {
  int code = 0;
  for (int i = kMaxJetDim - 1; i >= 0; --i) code = code * kBase + (i < a.dim ? a.e[i] : 0);
  return code;
}

std::size_t binomial(int n, int k) {
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

// All multi-indices of exactly `degree` in `dim` variables, lexicographically
// descending (x0 first).
void append_degree(int dim, int degree, std::vector<MultiIndex>& out) {
  MultiIndex cur = MultiIndex::zero(dim);
  auto rec = [&](auto&& self, int var, int remaining) -> void {
    if (var == dim - 1) {
      cur.e[var] = static_cast<std::uint8_t>(remaining);
      out.push_back(cur);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      cur.e[var] = static_cast<std::uint8_t>(v);
      self(self, var + 1, remaining - v);
    }
  };
  rec(rec, 0, degree);
}

JetLayout build_layout(int dim, int order);

}  // namespace

int JetLayout::index_of(const MultiIndex& a) const {
  if (a.dim != dim || a.degree() > order) return -1;
  return lookup[static_cast<std::size_t>(encode(a))];
}

std::size_t jet_size(int dim, int order) { return binomial(dim + order, dim); }

const JetLayout& jet_layout(int dim, int order) {
  if (dim < 1 || dim > kMaxJetDim) throw OrderError("jet dimension out of range: " + std::to_string(dim));
  if (order < 0 || order > kMaxJetOrder) throw OrderError("jet order out of range: " + std::to_string(order));
  static std::once_flag once;
  static std::vector<JetLayout> table;
  std::call_once(once, [] {
    table.reserve(kMaxJetDim * (kMaxJetOrder + 1));
    for (int d = 1; d <= kMaxJetDim; ++d)
      for (int k = 0; k <= kMaxJetOrder; ++k) table.push_back(build_layout(d, k));
  });
  return table[static_cast<std::size_t>((dim - 1) * (kMaxJetOrder + 1) + order)];
}

namespace {

JetLayout build_layout(int dim, int order) {
  JetLayout L;
  L.dim = dim;
  L.order = order;
  for (int d = 0; d <= order; ++d) append_degree(dim, d, L.indices);
  L.size = L.indices.size();
  L.lookup.assign(static_cast<std::size_t>(std::pow(kBase, kMaxJetDim)), -1);
  for (std::size_t k = 0; k < L.size; ++k) {
    L.degree.push_back(static_cast<std::uint8_t>(L.indices[k].degree()));
    L.lookup[static_cast<std::size_t>(encode(L.indices[k]))] = static_cast<std::int32_t>(k);
  }

  // Pairs grouped by output index: for each output a, all splits a = b + c.
  L.mul_offsets.push_back(0);
  for (std::size_t k = 0; k < L.size; ++k) {
    const MultiIndex& a = L.indices[k];
    for (std::size_t i = 0; i < L.size && L.degree[i] <= L.degree[k]; ++i) {
      const MultiIndex& b = L.indices[i];
      bool fits = true;
      MultiIndex c = MultiIndex::zero(dim);
      for (int v = 0; v < dim; ++v) {
        if (b.e[v] > a.e[v]) {
          fits = false;
          break;
        }
        c.e[v] = static_cast<std::uint8_t>(a.e[v] - b.e[v]);
      }
      if (!fits) continue;
      L.mul_lhs.push_back(static_cast<std::int32_t>(i));
      L.mul_rhs.push_back(L.lookup[static_cast<std::size_t>(encode(c))]);
    }
    L.mul_offsets.push_back(static_cast<std::int32_t>(L.mul_lhs.size()));
  }

  if (order > 0) {
    const std::size_t lower = jet_size(dim, order - 1);
    for (int v = 0; v < dim; ++v) {
      L.deriv_src[v].resize(lower);
      L.deriv_scale[v].resize(lower);
      for (std::size_t k = 0; k < lower; ++k) {
        MultiIndex up = L.indices[k];
        up.e[v] = static_cast<std::uint8_t>(up.e[v] + 1);
        L.deriv_src[v][k] = L.lookup[static_cast<std::size_t>(encode(up))];
        L.deriv_scale[v][k] = static_cast<double>(up.e[v]);
      }
    }
  }
  return L;
}

}  // namespace

// ----------------------------------------------------------------------------

Jet::Jet(int dim, int order) : dim_(static_cast<std::uint8_t>(dim)), order_(static_cast<std::uint8_t>(order)) {
  const std::size_t n = jet_layout(dim, order).size;
  std::fill_n(c_.begin(), n, 0.0);
}

Jet::Jet(const Jet& o) : dim_(o.dim_), order_(o.order_) {
  std::copy_n(o.c_.begin(), o.size(), c_.begin());
}

Jet& Jet::operator=(const Jet& o) {
  dim_ = o.dim_;
  order_ = o.order_;
  std::copy_n(o.c_.begin(), o.size(), c_.begin());
  return *this;
}

Jet Jet::constant(double value, int dim, int order) {
  Jet j(dim, order);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(int i, double value, int dim, int order) {
  if (i < 0 || i >= dim)
    throw OrderError("variable index " + std::to_string(i) + " out of range for dimension " + std::to_string(dim));
  Jet j = constant(value, dim, order);
  if (order > 0) j.c_[static_cast<std::size_t>(1 + i)] = 1.0;
  return j;
}

double Jet::coeff(const MultiIndex& a) const {
  if (a.dim != dim_) throw OrderError("multi-index dimension does not match jet");
  const int k = layout().index_of(a);
  if (k < 0) throw OrderError("multi-index degree " + std::to_string(a.degree()) + " exceeds jet order " + std::to_string(order_));
  return c_[static_cast<std::size_t>(k)];
}

double Jet::partial(const MultiIndex& a) const { return a.factorial() * coeff(a); }

Jet Jet::derivative(int i) const {
  if (order_ == 0) throw OrderError("cannot differentiate an order-0 jet");
  if (i < 0 || i >= dim_) throw OrderError("derivative direction out of range");
  const JetLayout& L = layout();
  Jet d(dim_, order_ - 1);
  const auto& src = L.deriv_src[static_cast<std::size_t>(i)];
  const auto& scale = L.deriv_scale[static_cast<std::size_t>(i)];
  for (std::size_t k = 0; k < src.size(); ++k) d.c_[k] = scale[k] * c_[static_cast<std::size_t>(src[k])];
  return d;
}

Jet Jet::truncated(int order) const {
  if (order > order_) throw OrderError("cannot raise jet order by truncation");
  Jet t(dim_, order);
  std::copy_n(c_.begin(), t.size(), t.c_.begin());
  return t;
}

void Jet::require_same_shape(const Jet& o, const char* op) const {
  if (dim_ != o.dim_ || order_ != o.order_)
    throw OrderError(std::string("jet shape mismatch in ") + op + ": (" + std::to_string(dim_) + "," +
                     std::to_string(order_) + ") vs (" + std::to_string(o.dim_) + "," + std::to_string(o.order_) + ")");
}

Jet& Jet::operator+=(const Jet& o) { return axpy(1.0, o); }
Jet& Jet::operator-=(const Jet& o) { return axpy(-1.0, o); }

Jet& Jet::axpy(double alpha, const Jet& x) {
  require_same_shape(x, "axpy");
  simd::active().axpy(alpha, x.c_.data(), c_.data(), size());
  return *this;
}

Jet& Jet::operator*=(const Jet& o) {
  *this = *this * o;
  return *this;
}

Jet& Jet::operator/=(const Jet& o) {
  *this = *this / o;
  return *this;
}

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Jet& Jet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  simd::active().scale(s, c_.data(), size());
  return *this;
}

Jet& Jet::operator/=(double s) { return *this *= (1.0 / s); }

Jet operator-(const Jet& a) { return a * -1.0; }
Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(Jet a, double s) { return a -= s; }
Jet operator-(double s, const Jet& a) { return -a + s; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator/(Jet a, double s) { return a /= s; }
Jet operator/(double s, const Jet& a) { return reciprocal(a) * s; }

Jet operator*(const Jet& a, const Jet& b) {
  if (a.dim() != b.dim() || a.order() != b.order())
    throw OrderError("jet shape mismatch in mul: (" + std::to_string(a.dim()) + "," + std::to_string(a.order()) +
                     ") vs (" + std::to_string(b.dim()) + "," + std::to_string(b.order()) + ")");
  const JetLayout& L = a.layout();
  Jet out(a.dim(), a.order());
  simd::active().cauchy(L.mul_offsets.data(), L.mul_lhs.data(), L.mul_rhs.data(), a.coeffs().data(),
                        b.coeffs().data(), out.coeffs().data(), L.size);
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet reciprocal(const Jet& b) {
  if (b.value() == 0.0) throw DomainError("division by a jet with zero constant term");
  Jet r = Jet::constant(1.0 / b.value(), b.dim(), b.order());
  // Each Newton step doubles the number of correct Taylor degrees.
  for (int correct = 1; correct <= b.order(); correct *= 2) r = r * (2.0 - b * r);
  return r;
}

const char* to_string(ElemFn fn) {
  switch (fn) {
    case ElemFn::Sin: return "sin";
    case ElemFn::Cos: return "cos";
    case ElemFn::Exp: return "exp";
    case ElemFn::Sinh: return "sinh";
    case ElemFn::Cosh: return "cosh";
    case ElemFn::Sqrt: return "sqrt";
    case ElemFn::Log: return "log";
  }
  return "?";
}

namespace {

// Generalized binomial coefficient C(r, k) for real r.
double gbinom(double r, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c *= (r - i) / (i + 1);
  return c;
}

Jet horner(const std::vector<double>& c, const Jet& j) {
  Jet h = j;
  h[0] = 0.0;
  Jet r = Jet::constant(c.back(), j.dim(), j.order());
  for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) {
    r = r * h;
    r[0] += c[static_cast<std::size_t>(k)];
  }
  return r;
}

}  // namespace

std::vector<double> univariate_taylor(ElemFn fn, double x0, int order) {
  std::vector<double> c(static_cast<std::size_t>(order + 1));
  double fact = 1.0;
  switch (fn) {
    case ElemFn::Sin:
    case ElemFn::Cos: {
      const double s = std::sin(x0), co = std::cos(x0);
      // derivatives of sin cycle through sin, cos, -sin, -cos
      const double cyc[4] = {s, co, -s, -co};
      const int shift = fn == ElemFn::Sin ? 0 : 1;
      for (int k = 0; k <= order; ++k) {
        if (k > 0) fact *= k;
        c[static_cast<std::size_t>(k)] = cyc[(k + shift) % 4] / fact;
      }
      break;
    }
    case ElemFn::Exp: {
      const double e = std::exp(x0);
      for (int k = 0; k <= order; ++k) {
        if (k > 0) fact *= k;
        c[static_cast<std::size_t>(k)] = e / fact;
      }
      break;
    }
    case ElemFn::Sinh:
    case ElemFn::Cosh: {
      const double sh = std::sinh(x0), ch = std::cosh(x0);
      const bool even_is_sinh = fn == ElemFn::Sinh;
      for (int k = 0; k <= order; ++k) {
        if (k > 0) fact *= k;
        const bool even = k % 2 == 0;
        c[static_cast<std::size_t>(k)] = ((even == even_is_sinh) ? sh : ch) / fact;
      }
      break;
    }
    case ElemFn::Sqrt: {
      if (!(x0 > 0.0)) throw DomainError("sqrt of non-positive value " + std::to_string(x0));
      for (int k = 0; k <= order; ++k) c[static_cast<std::size_t>(k)] = gbinom(0.5, k) * std::pow(x0, 0.5 - k);
      break;
    }
    case ElemFn::Log: {
      if (!(x0 > 0.0)) throw DomainError("log of non-positive value " + std::to_string(x0));
      c[0] = std::log(x0);
      for (int k = 1; k <= order; ++k) c[static_cast<std::size_t>(k)] = ((k % 2) ? 1.0 : -1.0) / (k * std::pow(x0, k));
      break;
    }
  }
  return c;
}

Jet compose(ElemFn fn, const Jet& j) { return horner(univariate_taylor(fn, j.value(), j.order()), j); }

Jet pow(const Jet& j, int n) {
  const double x0 = j.value();
  if (n < 0 && x0 == 0.0) throw DomainError("negative integer power of a jet with zero constant term");
  if (n == 0) return Jet::constant(1.0, j.dim(), j.order());
  std::vector<double> c(static_cast<std::size_t>(j.order() + 1), 0.0);
  for (int k = 0; k <= j.order(); ++k) {
    if (n >= 0 && k > n) break;
    const int e = n - k;
    c[static_cast<std::size_t>(k)] = gbinom(static_cast<double>(n), k) * (e == 0 ? 1.0 : std::pow(x0, e));
  }
  return horner(c, j);
}

}  // namespace bachlab

namespace bachlab {

Jet embed(const Jet& j, int dim, std::span<const int> map) {
  if (static_cast<int>(map.size()) != j.dim()) throw OrderError("embed: map size must equal the jet dimension");
  Jet out(dim, j.order());
  const JetLayout& src = j.layout();
  const JetLayout& dst = out.layout();
  for (std::size_t k = 0; k < src.size; ++k) {
    MultiIndex a = MultiIndex::zero(dim);
    for (int v = 0; v < j.dim(); ++v) {
      const int t = map[static_cast<std::size_t>(v)];
      if (t < 0 || t >= dim) throw OrderError("embed: target variable out of range");
      a.e[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(a.e[static_cast<std::size_t>(t)] + src.indices[k].e[static_cast<std::size_t>(v)]);
    }
    out[static_cast<std::size_t>(dst.index_of(a))] += j[k];
  }
  return out;
}

}  // namespace bachlab
