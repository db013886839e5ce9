#include "fdref/fdref.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>

#include "bachlab/error.hpp"

namespace bachlab::fdref {

namespace {

using Off = std::array<int, 4>;
using Vec = std::vector<double>;

constexpr std::array<double, 7> kStencil = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};

// memoized lattice field
class Field {
 public:
  explicit Field(std::function<Vec(const Off&)> f) : f_(std::move(f)) {}
  const Vec& at(const Off& o) {
    auto it = memo_.find(o);
    if (it == memo_.end()) it = memo_.emplace(o, f_(o)).first;
    return it->second;
  }

 private:
  std::function<Vec(const Off&)> f_;
  std::map<Off, Vec> memo_;
};

// axis-major derivative: out[a * size + k] = d_a F_k
Vec derivative(Field& F, const Off& o, int n, double h) {
  Vec out;
  for (int a = 0; a < n; ++a) {
    Vec acc;
    for (int s = 0; s < 7; ++s) {
      if (kStencil[static_cast<std::size_t>(s)] == 0.0) continue;
      Off q = o;
      q[static_cast<std::size_t>(a)] += s - 3;
      const Vec& v = F.at(q);
      if (acc.empty()) acc.assign(v.size(), 0.0);
      for (std::size_t k = 0; k < v.size(); ++k) acc[k] += kStencil[static_cast<std::size_t>(s)] * v[k];
    }
    for (double& x : acc) x /= h;
    out.insert(out.end(), acc.begin(), acc.end());
  }
  return out;
}

Vec invert(const Vec& g, int n) {
  const auto N = static_cast<std::size_t>(n);
  Vec a = g, inv(N * N, 0.0);
  for (std::size_t i = 0; i < N; ++i) inv[i * N + i] = 1.0;
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < N; ++r)
      if (std::abs(a[r * N + c]) > std::abs(a[piv * N + c])) piv = r;
    if (a[piv * N + c] == 0.0) throw NumericalError("fdref: singular metric");
    for (std::size_t k = 0; k < N; ++k) {
      std::swap(a[c * N + k], a[piv * N + k]);
      std::swap(inv[c * N + k], inv[piv * N + k]);
    }
    const double d = a[c * N + c];
    for (std::size_t k = 0; k < N; ++k) {
      a[c * N + k] /= d;
      inv[c * N + k] /= d;
    }
    for (std::size_t r = 0; r < N; ++r) {
      if (r == c) continue;
      const double f = a[r * N + c];
      for (std::size_t k = 0; k < N; ++k) {
        a[r * N + k] -= f * a[c * N + k];
        inv[r * N + k] -= f * inv[c * N + k];
      }
    }
  }
  return inv;
}

struct Idx {
  std::size_t n;
  std::size_t operator()(std::size_t a, std::size_t b) const { return a * n + b; }
  std::size_t operator()(std::size_t a, std::size_t b, std::size_t c) const { return (a * n + b) * n + c; }
  std::size_t operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return ((a * n + b) * n + c) * n + d;
  }
};

// packed layouts per lattice point
//   geometry: g (n^2) | ginv (n^2) | Gamma (n^3)
//   curvature: R (n^4) | Ric (n^2) | S (1) | P (n^2) | W (n^4)
//   level 3: dS (n) | nabla Ric (n^3) | C (n^3)

Tensor tensor_from(const Vec& v, std::size_t off, int n, int rank) {
  Tensor t(n, rank);
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = v[off + k];
  return t;
}

}  // namespace

FdCurvature compute(const Manifold& m, std::span<const double> p, double h) {
  const int n = m.dim();
  if (n < 2 || n > 4) throw SpecError("fdref: dimension 2..4");
  if (static_cast<int>(p.size()) != n) throw SpecError("fdref: point dimension mismatch");
  const auto N = static_cast<std::size_t>(n);
  const Idx I{N};
  const std::size_t n2 = N * N, n3 = n2 * N, n4 = n3 * N;
  std::size_t evals = 0;

  Field G([&](const Off& o) {
    std::vector<double> q(p.begin(), p.end());
    for (std::size_t a = 0; a < N; ++a) q[a] += h * o[a];
    ++evals;
    const Tensor g = m.metric_values(q);
    return Vec(g.begin(), g.end());
  });
  Field DG([&](const Off& o) { return derivative(G, o, n, h); });
  Field DDG([&](const Off& o) { return derivative(DG, o, n, h); });

  Field geo([&](const Off& o) {
    const Vec& g = G.at(o);
    const Vec& dg = DG.at(o);  // dg[I(a,i,j)] = d_a g_ij
    const Vec gi = invert(g, n);
    Vec out(g);
    out.insert(out.end(), gi.begin(), gi.end());
    for (std::size_t k = 0; k < N; ++k)
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
          double s = 0.0;
          for (std::size_t l = 0; l < N; ++l) s += gi[I(k, l)] * (dg[I(i, l, j)] + dg[I(j, l, i)] - dg[I(l, i, j)]);
          out.push_back(0.5 * s);
        }
    return out;
  });

  Field curv([&](const Off& o) {
    const Vec& gm = geo.at(o);
    const double* g = gm.data();
    const double* gi = g + n2;
    const double* G3 = gi + n2;
    const Vec& dd = DDG.at(o);  // dd[I(b,a,i,j)] = d_b d_a g_ij
    auto d2 = [&](std::size_t i, std::size_t j, std::size_t a, std::size_t b) { return dd[I(b, a, i, j)]; };
    Vec out(n4 + n2 + 1 + n2 + n4, 0.0);
    double* R = out.data();
    double* Ric = R + n4;
    double* S = Ric + n2;
    double* P = S + 1;
    double* W = P + n2;
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b)
        for (std::size_t c = 0; c < N; ++c)
          for (std::size_t d = 0; d < N; ++d) {
            double v = 0.5 * (d2(a, d, b, c) + d2(b, c, a, d) - d2(a, c, b, d) - d2(b, d, a, c));
            for (std::size_t mu = 0; mu < N; ++mu)
              for (std::size_t nu = 0; nu < N; ++nu)
                v += g[I(mu, nu)] * (G3[I(mu, b, c)] * G3[I(nu, a, d)] - G3[I(mu, b, d)] * G3[I(nu, a, c)]);
            R[I(a, b, c, d)] = v;
          }
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t d = 0; d < N; ++d) {
        double v = 0.0;
        for (std::size_t a = 0; a < N; ++a)
          for (std::size_t c = 0; c < N; ++c) v += gi[I(a, c)] * R[I(a, b, c, d)];
        Ric[I(b, d)] = v;
      }
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t d = 0; d < N; ++d) *S += gi[I(b, d)] * Ric[I(b, d)];
    const double nn = static_cast<double>(n);
    if (n > 2) {
      for (std::size_t k = 0; k < n2; ++k) P[k] = (Ric[k] - *S * g[k] / (2.0 * (nn - 1.0))) / (nn - 2.0);
      for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b)
          for (std::size_t c = 0; c < N; ++c)
            for (std::size_t d = 0; d < N; ++d)
              W[I(a, b, c, d)] = R[I(a, b, c, d)] - (P[I(a, c)] * g[I(b, d)] + P[I(b, d)] * g[I(a, c)] -
                                                     P[I(a, d)] * g[I(b, c)] - P[I(b, c)] * g[I(a, d)]);
    }
    return out;
  });

  const std::size_t ricOff = n4, sOff = n4 + n2, pOff = sOff + 1;

  // first derivatives of the curvature block, then covariant versions
  Field DC([&](const Off& o) { return derivative(curv, o, n, h); });
  const std::size_t cs = n4 + n2 + 1 + n2 + n4;
  Field lvl3([&](const Off& o) {
    const Vec& d = DC.at(o);
    const Vec& cv = curv.at(o);
    const double* G3 = geo.at(o).data() + 2 * n2;
    Vec out(N + 2 * n3, 0.0);
    double* dS = out.data();
    double* nRic = dS + N;
    double* C = nRic + n3;
    Vec nP(n3, 0.0);
    for (std::size_t k = 0; k < N; ++k) {
      dS[k] = d[k * cs + sOff];
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
          double r = d[k * cs + ricOff + I(i, j)], pp = d[k * cs + pOff + I(i, j)];
          for (std::size_t q = 0; q < N; ++q) {
            r -= G3[I(q, k, i)] * cv[ricOff + I(q, j)] + G3[I(q, k, j)] * cv[ricOff + I(i, q)];
            pp -= G3[I(q, k, i)] * cv[pOff + I(q, j)] + G3[I(q, k, j)] * cv[pOff + I(i, q)];
          }
          nRic[I(k, i, j)] = r;
          nP[I(k, i, j)] = pp;
        }
    }
    for (std::size_t k = 0; k < N; ++k)
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) C[I(k, i, j)] = nP[I(k, i, j)] - nP[I(i, k, j)];
    return out;
  });

  const Off origin{0, 0, 0, 0};
  const Vec& gm = geo.at(origin);
  const double* g = gm.data();
  const double* gi = g + n2;
  const double* G3 = gi + n2;
  const Vec cv = curv.at(origin);
  const Vec l3 = lvl3.at(origin);
  const Vec d3 = derivative(lvl3, origin, n, h);
  const std::size_t ls = N + 2 * n3;
  const double* dS = l3.data();
  const double* nRic = dS + N;
  const double* C = nRic + n3;
  const double* P = cv.data() + pOff;
  const double* W = P + n2;

  FdCurvature out;
  out.gamma = tensor_from(gm, 2 * n2, n, 3);
  out.riemann = tensor_from(cv, 0, n, 4);
  out.ricci = tensor_from(cv, ricOff, n, 2);
  out.scalar = cv[sOff];
  out.ricci_squared = Tensor(n, 2);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < N; ++k)
        for (std::size_t l = 0; l < N; ++l) v += cv[ricOff + I(i, k)] * gi[I(k, l)] * cv[ricOff + I(l, j)];
      out.ricci_squared[I(i, j)] = v;
    }
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out.ricci_norm2 += gi[I(i, j)] * out.ricci_squared[I(i, j)];
  out.schouten = tensor_from(cv, pOff, n, 2);
  out.weyl = tensor_from(cv, pOff + n2, n, 4);
  out.grad_scalar = tensor_from(l3, 0, n, 1);
  out.grad_ricci = tensor_from(l3, N, n, 3);
  out.cotton = tensor_from(l3, N + n3, n, 3);

  // second covariant derivatives at the base point
  out.hess_scalar = Tensor(n, 2);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      double v = d3[i * ls + j];
      for (std::size_t q = 0; q < N; ++q) v -= G3[I(q, i, j)] * dS[q];
      out.hess_scalar[I(i, j)] = v;
    }
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out.laplacian_scalar += gi[I(i, j)] * out.hess_scalar[I(i, j)];

  out.laplacian_ricci = Tensor(n, 2);
  Tensor divC(n, 2);  // g^{cq} nabla_q C_cab
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      double lap = 0.0, dc = 0.0;
      for (std::size_t k = 0; k < N; ++k)
        for (std::size_t l = 0; l < N; ++l) {
          // nabla_k nabla Ric (l, a, b)
          double r = d3[k * ls + N + I(l, a, b)];
          // nabla_k C (l, a, b)
          double c = d3[k * ls + N + n3 + I(l, a, b)];
          for (std::size_t q = 0; q < N; ++q) {
            r -= G3[I(q, k, l)] * nRic[I(q, a, b)] + G3[I(q, k, a)] * nRic[I(l, q, b)] +
                 G3[I(q, k, b)] * nRic[I(l, a, q)];
            c -= G3[I(q, k, l)] * C[I(q, a, b)] + G3[I(q, k, a)] * C[I(l, q, b)] + G3[I(q, k, b)] * C[I(l, a, q)];
          }
          lap += gi[I(k, l)] * r;
          dc += gi[I(l, k)] * c;
        }
      out.laplacian_ricci[I(a, b)] = lap;
      divC[I(a, b)] = dc;
    }

  Vec Pup(n2, 0.0);
  for (std::size_t c = 0; c < N; ++c)
    for (std::size_t q = 0; q < N; ++q)
      for (std::size_t k = 0; k < N; ++k)
        for (std::size_t l = 0; l < N; ++l) Pup[I(c, q)] += gi[I(c, k)] * gi[I(q, l)] * P[I(k, l)];
  Tensor B(n, 2);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      double v = divC[I(a, b)];
      for (std::size_t c = 0; c < N; ++c)
        for (std::size_t q = 0; q < N; ++q) v += Pup[I(c, q)] * W[I(a, c, b, q)];
      B[I(a, b)] = v;
    }
  out.bach = Tensor(n, 2);
  out.bach_flow = Tensor(n, 2);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      out.bach[I(a, b)] = 0.5 * (B[I(a, b)] + B[I(b, a)]);
      out.bach_flow[I(a, b)] = out.bach[I(a, b)] + out.laplacian_scalar * g[I(a, b)] / 12.0;
    }
  out.metric_evaluations = evals;
  return out;
}

FdCurvature from_pack(const CurvaturePack& pack) {
  FdCurvature out;
  out.gamma = values(pack.christoffel());
  out.riemann = values(pack.riemann());
  out.ricci = values(pack.ricci());
  out.scalar = pack.scalar().value();
  out.ricci_squared = values(pack.ricci_squared());
  out.ricci_norm2 = pack.ricci_norm2().value();
  if (pack.n() > 2) {
    out.schouten = values(pack.schouten());
    out.weyl = values(pack.weyl());
  }
  out.grad_scalar = values(pack.grad_scalar());
  out.grad_ricci = values(pack.grad_ricci());
  if (pack.n() > 2) out.cotton = values(pack.cotton());
  out.hess_scalar = values(pack.hess_scalar());
  out.laplacian_scalar = pack.laplacian_scalar().value();
  out.laplacian_ricci = values(pack.laplacian_ricci());
  if (pack.n() == 4) {
    out.bach = values(pack.bach());
    out.bach_flow = values(pack.bach_flow());
  }
  return out;
}

std::vector<std::pair<std::string, double>> compare(const FdCurvature& fd, const FdCurvature& o) {
  std::vector<std::pair<std::string, double>> out;
  auto tens = [&](const char* name, const Tensor& a, const Tensor& b) {
    if (a.empty() || b.empty()) return;
    double scale = 1.0, diff = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      scale = std::max(scale, std::abs(a[k]));
      diff = std::max(diff, std::abs(a[k] - b[k]));
    }
    out.emplace_back(name, diff / scale);
  };
  auto scal = [&](const char* name, double a, double b) {
    out.emplace_back(name, std::abs(a - b) / std::max(1.0, std::abs(a)));
  };
  tens("christoffel", fd.gamma, o.gamma);
  tens("riemann", fd.riemann, o.riemann);
  tens("ricci", fd.ricci, o.ricci);
  scal("scalar", fd.scalar, o.scalar);
  tens("ricci_squared", fd.ricci_squared, o.ricci_squared);
  scal("ricci_norm2", fd.ricci_norm2, o.ricci_norm2);
  tens("schouten", fd.schouten, o.schouten);
  tens("weyl", fd.weyl, o.weyl);
  tens("grad_scalar", fd.grad_scalar, o.grad_scalar);
  tens("grad_ricci", fd.grad_ricci, o.grad_ricci);
  tens("cotton", fd.cotton, o.cotton);
  tens("hess_scalar", fd.hess_scalar, o.hess_scalar);
  scal("laplacian_scalar", fd.laplacian_scalar, o.laplacian_scalar);
  tens("laplacian_ricci", fd.laplacian_ricci, o.laplacian_ricci);
  tens("bach", fd.bach, o.bach);
  tens("bach_flow", fd.bach_flow, o.bach_flow);
  return out;
}

}  // namespace bachlab::fdref
