#include "bachlab/simd/jet_kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define BACHLAB_HAVE_AVX2_KERNELS 1
#endif

namespace bachlab::simd {

#ifdef BACHLAB_HAVE_AVX2_KERNELS
namespace {

#define BACHLAB_AVX2 __attribute__((target("avx2,fma")))

BACHLAB_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

BACHLAB_AVX2 void cauchy_avx2(const std::int32_t* offsets, const std::int32_t* lhs,
                              const std::int32_t* rhs, const double* a, const double* b,
                              double* out, std::size_t n_out) {
  for (std::size_t k = 0; k < n_out; ++k) {
    std::int32_t p = offsets[k];
    const std::int32_t end = offsets[k + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; p + 4 <= end; p += 4) {
      const __m128i il = _mm_loadu_si128(reinterpret_cast<const __m128i*>(lhs + p));
      const __m128i ir = _mm_loadu_si128(reinterpret_cast<const __m128i*>(rhs + p));
      const __m256d va = _mm256_i32gather_pd(a, il, 8);
      const __m256d vb = _mm256_i32gather_pd(b, ir, 8);
      acc = _mm256_fmadd_pd(va, vb, acc);
    }
    double s = hsum(acc);
    for (; p < end; ++p) s += a[lhs[p]] * b[rhs[p]];
    out[k] = s;
  }
}

BACHLAB_AVX2 void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

BACHLAB_AVX2 void scale_avx2(double alpha, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, _mm256_mul_pd(va, _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] *= alpha;
}

BACHLAB_AVX2 double dot_avx2(const double* w, const double* f, std::size_t n) {
  if (n <= 16) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(f + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * f[i];
    return s;
  }
  const std::size_t h = n / 2;
  return dot_avx2(w, f, h) + dot_avx2(w + h, f + h, n - h);
}

}  // namespace

const Kernels* avx2_kernels() {
  static const Kernels k{Isa::Avx2, cauchy_avx2, axpy_avx2, scale_avx2, dot_avx2};
  return &k;
}

#else

const Kernels* avx2_kernels() { return nullptr; }

#endif

}  // namespace bachlab::simd
