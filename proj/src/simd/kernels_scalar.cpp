#include "bachlab/simd/jet_kernels.hpp"

namespace bachlab::simd {
namespace {

void cauchy_scalar(const std::int32_t* offsets, const std::int32_t* lhs, const std::int32_t* rhs,
                   const double* a, const double* b, double* out, std::size_t n_out) {
  for (std::size_t k = 0; k < n_out; ++k) {
    double s = 0.0;
    for (std::int32_t p = offsets[k]; p < offsets[k + 1]; ++p) s += a[lhs[p]] * b[rhs[p]];
    out[k] = s;
  }
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= alpha;
}

double dot_scalar(const double* w, const double* f, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += w[i] * f[i];
    return s;
  }
  const std::size_t h = n / 2;
  return dot_scalar(w, f, h) + dot_scalar(w + h, f + h, n - h);
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Isa::Scalar, cauchy_scalar, axpy_scalar, scale_scalar, dot_scalar};
  return k;
}

}  // namespace bachlab::simd
