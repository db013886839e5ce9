#include "bachlab/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "bachlab/error.hpp"

namespace bachlab {

namespace {

Jet zero_like(int n, int order) { return Jet(n, order); }

std::size_t flat_index(const std::array<int, 5>& idx, int rank, int n) {
  std::size_t k = 0;
  for (int r = 0; r < rank; ++r) k = k * static_cast<std::size_t>(n) + static_cast<std::size_t>(idx[static_cast<std::size_t>(r)]);
  return k;
}

void require_order(int have, int need, const char* what) {
  if (have < need)
    throw OrderError(std::string(what) + " needs jet order >= " + std::to_string(need) + " (have " + std::to_string(have) + ")");
}

}  // namespace

MetricJet MetricJet::from_components(JetTensor g) {
  const int n = g.n();
  if (g.rank() != 2 || n < 1) throw SpecError("metric must be a rank-2 tensor");
  const int order = jet_order(g);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto a = g(i, j).coeffs();
      const auto b = g(j, i).coeffs();
      for (std::size_t k = 0; k < a.size(); ++k)
        if (std::abs(a[k] - b[k]) > 1e-14 * (1.0 + std::abs(a[k])))
          throw SpecError("metric components are not symmetric");
    }

  // Positive definiteness at the base point via Cholesky.
  {
    std::vector<double> L(static_cast<std::size_t>(n * n), 0.0);
    for (int j = 0; j < n; ++j) {
      double d = g(j, j).value();
      for (int k = 0; k < j; ++k) d -= L[static_cast<std::size_t>(j * n + k)] * L[static_cast<std::size_t>(j * n + k)];
      if (!(d > 0.0)) throw DomainError("metric is not positive definite at the evaluation point");
      const double ljj = std::sqrt(d);
      L[static_cast<std::size_t>(j * n + j)] = ljj;
      for (int i = j + 1; i < n; ++i) {
        double s = g(i, j).value();
        for (int k = 0; k < j; ++k) s -= L[static_cast<std::size_t>(i * n + k)] * L[static_cast<std::size_t>(j * n + k)];
        L[static_cast<std::size_t>(i * n + j)] = s / ljj;
      }
    }
  }

  // Gauss-Jordan on jets; pivots are diagonal entries of a positive
  // definite matrix, so no pivoting is needed.
  const int dim = g[0].dim();
  JetTensor a = g;
  JetTensor inv(n, 2, zero_like(dim, order));
  for (int i = 0; i < n; ++i) inv(i, i) = Jet::constant(1.0, dim, order);
  for (int col = 0; col < n; ++col) {
    const Jet pivot_inv = reciprocal(a(col, col));
    for (int c = 0; c < n; ++c) {
      a(col, c) = a(col, c) * pivot_inv;
      inv(col, c) = inv(col, c) * pivot_inv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = a(r, col);
      for (int c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  // symmetrize away roundoff
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Jet s = (inv(i, j) + inv(j, i)) * 0.5;
      inv(i, j) = s;
      inv(j, i) = s;
    }

  // bound each residual coefficient by the coefficient mass of its terms
  auto l1 = [](const Jet& j) {
    double s = 0.0;
    for (double c : j.coeffs()) s += std::abs(c);
    return s;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s = zero_like(dim, order);
      double bound = 1.0;
      for (int k = 0; k < n; ++k) {
        s += inv(i, k) * g(k, j);
        bound += l1(inv(i, k)) * l1(g(k, j));
      }
      if (i == j) s -= 1.0;
      for (double c : s.coeffs())
        if (std::abs(c) > 1e-12 * bound)
          throw NumericalError("metric inverse check failed (g^ik g_kj != delta)");
    }

  MetricJet m;
  m.n = n;
  m.order = order;
  m.g = std::move(g);
  m.ginv = std::move(inv);
  return m;
}

JetTensor christoffel(const MetricJet& m) {
  require_order(m.order, 1, "Christoffel symbols");
  const int n = m.n;
  const int o = m.order - 1;
  const int dim = m.g[0].dim();
  // dg(l, i, j) = d_l g_ij
  JetTensor dg(n, 3, zero_like(dim, o));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        dg(l, i, j) = m.g(i, j).derivative(l);
        dg(l, j, i) = dg(l, i, j);
      }
  const JetTensor ginv = truncated(m.ginv, o);
  // first kind: G_lij = (d_i g_jl + d_j g_il - d_l g_ij) / 2
  JetTensor first(n, 3, zero_like(dim, o));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet s = dg(i, j, l) + dg(j, i, l) - dg(l, i, j);
        s *= 0.5;
        first(l, i, j) = s;
        first(l, j, i) = s;
      }
  JetTensor G(n, 3, zero_like(dim, o));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet s = zero_like(dim, o);
        for (int l = 0; l < n; ++l) s += ginv(k, l) * first(l, i, j);
        G(k, i, j) = s;
        G(k, j, i) = s;
      }
  return G;
}

JetTensor covariant_derivative(const JetTensor& T, const JetTensor& gamma) {
  const int n = gamma.n();
  const int rank = T.rank();
  if (rank > 3) throw OrderError("covariant derivative implemented up to rank 3");
  const int oT = jet_order(T);
  require_order(oT, 1, "covariant derivative");
  const int o = std::min(oT - 1, jet_order(gamma));
  const int dim = T[0].dim();
  const JetTensor Tt = truncated(T, o);
  const JetTensor G = truncated(gamma, o);
  JetTensor out(n, rank + 1, zero_like(dim, o));
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto idx = out.unflatten(k);
    const int mdir = idx[0];
    std::array<int, 5> ti{};
    for (int r = 0; r < rank; ++r) ti[static_cast<std::size_t>(r)] = idx[static_cast<std::size_t>(r + 1)];
    const std::size_t tflat = flat_index(ti, rank, n);
    Jet s = T[tflat].derivative(mdir).truncated(o);
    for (int slot = 0; slot < rank; ++slot) {
      std::array<int, 5> tj = ti;
      const int islot = ti[static_cast<std::size_t>(slot)];
      for (int p = 0; p < n; ++p) {
        tj[static_cast<std::size_t>(slot)] = p;
        s -= G(p, mdir, islot) * Tt[flat_index(tj, rank, n)];
      }
    }
    out[k] = s;
  }
  return out;
}

JetTensor raise_index(const JetTensor& T, const MetricJet& m, int slot) {
  const int n = T.n();
  const int o = std::min(jet_order(T), m.order);
  const JetTensor Tt = truncated(T, o);
  const JetTensor gi = truncated(m.ginv, o);
  JetTensor out(n, T.rank(), zero_like(T[0].dim(), o));
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto idx = out.unflatten(k);
    std::array<int, 5> src{};
    for (int r = 0; r < T.rank(); ++r) src[static_cast<std::size_t>(r)] = idx[static_cast<std::size_t>(r)];
    const int a = idx[static_cast<std::size_t>(slot)];
    Jet s = zero_like(T[0].dim(), o);
    for (int p = 0; p < n; ++p) {
      src[static_cast<std::size_t>(slot)] = p;
      s += gi(a, p) * Tt[flat_index(src, T.rank(), n)];
    }
    out[k] = s;
  }
  return out;
}

JetTensor lower_index(const JetTensor& T, const MetricJet& m, int slot) {
  const int n = T.n();
  const int o = std::min(jet_order(T), m.order);
  const JetTensor Tt = truncated(T, o);
  const JetTensor gl = truncated(m.g, o);
  JetTensor out(n, T.rank(), zero_like(T[0].dim(), o));
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto idx = out.unflatten(k);
    std::array<int, 5> src{};
    for (int r = 0; r < T.rank(); ++r) src[static_cast<std::size_t>(r)] = idx[static_cast<std::size_t>(r)];
    const int a = idx[static_cast<std::size_t>(slot)];
    Jet s = zero_like(T[0].dim(), o);
    for (int p = 0; p < n; ++p) {
      src[static_cast<std::size_t>(slot)] = p;
      s += gl(a, p) * Tt[flat_index(src, T.rank(), n)];
    }
    out[k] = s;
  }
  return out;
}

Jet trace(const JetTensor& T, const MetricJet& m) {
  const int o = std::min(jet_order(T), m.order);
  Jet s = zero_like(T[0].dim(), o);
  for (int i = 0; i < T.n(); ++i)
    for (int j = 0; j < T.n(); ++j) s += m.ginv(i, j).truncated(o) * T(i, j).truncated(o);
  return s;
}

JetTensor trace_free(const JetTensor& T, const MetricJet& m) {
  const int o = std::min(jet_order(T), m.order);
  const Jet tr = trace(T, m) / static_cast<double>(T.n());
  JetTensor out = truncated(T, o);
  for (int i = 0; i < T.n(); ++i)
    for (int j = 0; j < T.n(); ++j) out(i, j) -= tr * m.g(i, j).truncated(o);
  return out;
}

Jet inner_sym2(const JetTensor& A, const JetTensor& B, const MetricJet& m) {
  const int o = std::min({jet_order(A), jet_order(B), m.order});
  const JetTensor Ar = raise_index(raise_index(truncated(A, o), m, 0), m, 1);
  Jet s = zero_like(A[0].dim(), o);
  for (std::size_t k = 0; k < Ar.size(); ++k) s += Ar[k] * B[k].truncated(o);
  return s;
}

Jet norm2_oneform(const JetTensor& w, const MetricJet& m) {
  const int o = std::min(jet_order(w), m.order);
  Jet s = zero_like(w[0].dim(), o);
  for (int i = 0; i < w.n(); ++i)
    for (int j = 0; j < w.n(); ++j) s += m.ginv(i, j).truncated(o) * w(i).truncated(o) * w(j).truncated(o);
  return s;
}

JetTensor gradient_oneform(const Jet& f) {
  require_order(f.order(), 1, "gradient");
  const int n = f.dim();
  JetTensor df(n, 1, zero_like(n, f.order() - 1));
  for (int i = 0; i < n; ++i) df(i) = f.derivative(i);
  return df;
}

JetTensor hessian_scalar(const Jet& f, const JetTensor& gamma) {
  return covariant_derivative(gradient_oneform(f), gamma);
}

Jet laplacian_scalar(const Jet& f, const MetricJet& m, const JetTensor& gamma) {
  return trace(hessian_scalar(f, gamma), m);
}

JetTensor laplacian_sym2(const JetTensor& T, const MetricJet& m, const JetTensor& gamma) {
  const JetTensor dd = covariant_derivative(covariant_derivative(T, gamma), gamma);  // (k, l, i, j)
  const int n = T.n();
  const int o = jet_order(dd);
  JetTensor out(n, 2, zero_like(T[0].dim(), o));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s = zero_like(T[0].dim(), o);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += m.ginv(k, l).truncated(o) * dd(k, l, i, j);
      out(i, j) = s;
    }
  return out;
}

JetTensor divergence_sym2(const JetTensor& T, const MetricJet& m, const JetTensor& gamma) {
  const JetTensor dT = covariant_derivative(T, gamma);  // (i, k, j)
  const int n = T.n();
  const int o = jet_order(dT);
  JetTensor out(n, 1, zero_like(T[0].dim(), o));
  for (int j = 0; j < n; ++j) {
    Jet s = zero_like(T[0].dim(), o);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) s += m.ginv(i, k).truncated(o) * dT(i, k, j);
    out(j) = s;
  }
  return out;
}

Jet divergence_vector(const JetTensor& X_up, const JetTensor& gamma) {
  const int n = X_up.n();
  const int oX = jet_order(X_up);
  require_order(oX, 1, "divergence");
  const int o = std::min(oX - 1, jet_order(gamma));
  Jet s = zero_like(X_up[0].dim(), o);
  for (int i = 0; i < n; ++i) {
    s += X_up(i).derivative(i).truncated(o);
    for (int p = 0; p < n; ++p) s += gamma(i, i, p).truncated(o) * X_up(p).truncated(o);
  }
  return s;
}

JetTensor lie_derivative_metric(const JetTensor& X_up, const MetricJet& m, const JetTensor& gamma) {
  const JetTensor X_low = lower_index(X_up, m, 0);
  const JetTensor dX = covariant_derivative(X_low, gamma);  // (i, j) = nabla_i X_j
  const int n = X_up.n();
  JetTensor out(n, 2, zero_like(X_up[0].dim(), jet_order(dX)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      out(i, j) = dX(i, j) + dX(j, i);
      out(j, i) = out(i, j);
    }
  return out;
}

Jet directional_derivative(const JetTensor& X_up, const Jet& f) {
  require_order(f.order(), 1, "directional derivative");
  const int o = std::min(f.order() - 1, jet_order(X_up));
  Jet s = zero_like(f.dim(), o);
  for (int i = 0; i < X_up.n(); ++i) s += X_up(i).truncated(o) * f.derivative(i).truncated(o);
  return s;
}

JetTensor gradient_vector(const Jet& f, const MetricJet& m) { return raise_index(gradient_oneform(f), m, 0); }

JetTensor contract_vector(const JetTensor& X_up, const JetTensor& T) {
  const int n = T.n();
  const int o = std::min(jet_order(X_up), jet_order(T));
  JetTensor out(n, 1, zero_like(T[0].dim(), o));
  for (int j = 0; j < n; ++j) {
    Jet s = zero_like(T[0].dim(), o);
    for (int i = 0; i < n; ++i) s += X_up(i).truncated(o) * T(i, j).truncated(o);
    out(j) = s;
  }
  return out;
}

Jet divergence_oneform(const JetTensor& w, const MetricJet& m, const JetTensor& gamma) {
  const JetTensor dw = covariant_derivative(w, gamma);
  Jet s = zero_like(w[0].dim(), jet_order(dw));
  for (int i = 0; i < w.n(); ++i)
    for (int j = 0; j < w.n(); ++j) s += m.ginv(i, j).truncated(jet_order(dw)) * dw(i, j);
  return s;
}

// ----------------------------------------------------------------------------

CurvaturePack CurvaturePack::compute(const MetricJet& m) {
  CurvaturePack p;
  p.metric_ = m;
  const int n = m.n;
  const int dim = m.g[0].dim();
  if (m.order < 1) return p;
  p.gamma_ = bachlab::christoffel(m);
  const JetTensor& G = *p.gamma_;
  if (m.order < 2) return p;

  const int o2 = m.order - 2;
  // R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik
  {
    const JetTensor Gt = truncated(G, o2);
    JetTensor R(n, 4, zero_like(dim, o2));
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            Jet s = G(l, j, k).derivative(i) - G(l, i, k).derivative(j);
            for (int q = 0; q < n; ++q) {
              s += Gt(l, i, q) * Gt(q, j, k);
              s -= Gt(l, j, q) * Gt(q, i, k);
            }
            R(l, i, j, k) = s;
            R(l, j, i, k) = -s;
          }
    p.riem_up_ = std::move(R);
  }
  const JetTensor& Rup = *p.riem_up_;
  const JetTensor g2 = truncated(m.g, o2);
  const JetTensor gi2 = truncated(m.ginv, o2);
  {
    // R_abcd = g_am R^m_cdb
    JetTensor R(n, 4, zero_like(dim, o2));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            Jet s = zero_like(dim, o2);
            for (int q = 0; q < n; ++q) s += g2(a, q) * Rup(q, c, d, b);
            R(a, b, c, d) = s;
          }
    p.riem_ = std::move(R);
  }
  {
    JetTensor ric(n, 2, zero_like(dim, o2));
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        Jet s = zero_like(dim, o2);
        for (int i = 0; i < n; ++i) s += Rup(i, i, j, k);
        // symmetric in exact arithmetic; average the two orderings
        Jet t = zero_like(dim, o2);
        for (int i = 0; i < n; ++i) t += Rup(i, i, k, j);
        ric(j, k) = (s + t) * 0.5;
        ric(k, j) = ric(j, k);
      }
    p.ric_ = std::move(ric);
  }
  const JetTensor& Ric = *p.ric_;
  p.scal_ = trace(Ric, m);
  {
    const JetTensor ric_up = raise_index(Ric, m, 0);  // Ric^k_j
    JetTensor r2(n, 2, zero_like(dim, o2));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet s = zero_like(dim, o2);
        for (int k = 0; k < n; ++k) s += Ric(i, k) * ric_up(k, j);
        r2(i, j) = s;
        r2(j, i) = s;
      }
    p.ric2_ = std::move(r2);
    p.ric_norm2_ = trace(*p.ric2_, m);
  }
  const Jet& S = *p.scal_;

  if (n >= 3) {
    JetTensor P(n, 2, zero_like(dim, o2));
    const double js = 1.0 / (2.0 * (n - 1));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) P(i, j) = (Ric(i, j) - js * S * g2(i, j)) / static_cast<double>(n - 2);
    p.schouten_ = std::move(P);
    const JetTensor& Pt = *p.schouten_;
    JetTensor W = *p.riem_;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            W(a, b, c, d) -= Pt(a, c) * g2(b, d) + Pt(b, d) * g2(a, c) - Pt(a, d) * g2(b, c) - Pt(b, c) * g2(a, d);
    p.weyl_ = std::move(W);
  }

  if (m.order < 3) return p;
  p.grad_s_ = gradient_oneform(S);
  p.grad_ric_ = covariant_derivative(Ric, G);
  if (n >= 3) {
    const JetTensor dP = covariant_derivative(*p.schouten_, G);  // (k, i, j)
    JetTensor C(n, 3, zero_like(dim, jet_order(dP)));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) C(k, i, j) = dP(k, i, j) - dP(i, k, j);
    p.cotton_ = std::move(C);
  }

  if (m.order < 4) return p;
  p.hess_s_ = hessian_scalar(S, G);
  p.lap_s_ = trace(*p.hess_s_, m);
  p.lap_ric_ = laplacian_sym2(Ric, m, G);
  if (n == 4) {
    const JetTensor dC = covariant_derivative(*p.cotton_, G);  // (m, c, a, b)
    const int o4 = jet_order(dC);
    const JetTensor gi4 = truncated(m.ginv, o4);
    const JetTensor P_up = truncated(raise_index(raise_index(*p.schouten_, m, 0), m, 1), o4);
    const JetTensor W4 = truncated(*p.weyl_, o4);
    JetTensor B(n, 2, zero_like(dim, o4));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Jet s = zero_like(dim, o4);
        for (int c = 0; c < n; ++c)
          for (int q = 0; q < n; ++q) {
            s += gi4(c, q) * dC(q, c, a, b);
            s += P_up(c, q) * W4(a, c, b, q);
          }
        B(a, b) = s;
      }
    // symmetric in exact arithmetic; keep the average of both orderings
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < a; ++b) {
        const Jet avg = (B(a, b) + B(b, a)) * 0.5;
        B(a, b) = avg;
        B(b, a) = avg;
      }
    p.bach_ = B;
    JetTensor F = B;
    const Jet lap = p.lap_s_->truncated(o4) / 12.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) F(a, b) += lap * m.g(a, b).truncated(o4);
    p.bach_flow_ = std::move(F);
  }
  return p;
}

const JetTensor& CurvaturePack::schouten() const {
  if (n() < 3) throw DomainError("Schouten tensor needs dimension >= 3");
  return get(schouten_, "Schouten tensor", 2);
}

const JetTensor& CurvaturePack::weyl() const {
  if (n() < 3) throw DomainError("Weyl tensor needs dimension >= 3");
  return get(weyl_, "Weyl tensor", 2);
}

const JetTensor& CurvaturePack::cotton() const {
  if (n() < 3) throw DomainError("Cotton tensor needs dimension >= 3");
  return get(cotton_, "Cotton tensor", 3);
}

const JetTensor& CurvaturePack::bach() const {
  if (n() != 4) throw DomainError("Bach tensor is implemented in dimension 4 only");
  return get(bach_, "Bach tensor", 4);
}

const JetTensor& CurvaturePack::bach_flow() const {
  if (n() != 4) throw DomainError("Bach tensor is implemented in dimension 4 only");
  return get(bach_flow_, "Bach flow tensor", 4);
}

JetTensor CurvaturePack::bianchi_defect() const {
  JetTensor d = divergence_sym2(ricci(), metric_, christoffel());
  const JetTensor& dS = grad_scalar();
  for (int j = 0; j < n(); ++j) d(j) -= 0.5 * dS(j).truncated(d(j).order());
  return d;
}

}  // namespace bachlab
