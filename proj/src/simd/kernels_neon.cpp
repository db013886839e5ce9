#include "bachlab/simd/jet_kernels.hpp"

#if defined(__ARM_NEON) && defined(__aarch64__)
#include <arm_neon.h>
#define BACHLAB_HAVE_NEON_KERNELS 1
#endif

namespace bachlab::simd {

#ifdef BACHLAB_HAVE_NEON_KERNELS
namespace {

// NEON has no gather; the product loads pairs lane by lane and keeps two
// fused accumulators.
void cauchy_neon(const std::int32_t* offsets, const std::int32_t* lhs, const std::int32_t* rhs,
                 const double* a, const double* b, double* out, std::size_t n_out) {
  for (std::size_t k = 0; k < n_out; ++k) {
    std::int32_t p = offsets[k];
    const std::int32_t end = offsets[k + 1];
    float64x2_t acc = vdupq_n_f64(0.0);
    for (; p + 2 <= end; p += 2) {
      const double la[2] = {a[lhs[p]], a[lhs[p + 1]]};
      const double rb[2] = {b[rhs[p]], b[rhs[p + 1]]};
      acc = vfmaq_f64(acc, vld1q_f64(la), vld1q_f64(rb));
    }
    double s = vaddvq_f64(acc);
    for (; p < end; ++p) s += a[lhs[p]] * b[rhs[p]];
    out[k] = s;
  }
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_neon(double alpha, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmulq_f64(va, vld1q_f64(y + i)));
  for (; i < n; ++i) y[i] *= alpha;
}

double dot_neon(const double* w, const double* f, std::size_t n) {
  if (n <= 16) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(w + i), vld1q_f64(f + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += w[i] * f[i];
    return s;
  }
  const std::size_t h = n / 2;
  return dot_neon(w, f, h) + dot_neon(w + h, f + h, n - h);
}

}  // namespace

const Kernels* neon_kernels() {
  static const Kernels k{Isa::Neon, cauchy_neon, axpy_neon, scale_neon, dot_neon};
  return &k;
}

#else

const Kernels* neon_kernels() { return nullptr; }

#endif

}  // namespace bachlab::simd
