#pragma once

// Data-parallel inner loops of the jet algebra and of quadrature sums.
//
// Every kernel has a scalar reference implementation; SIMD variants are
// compiled per instruction set and picked once at runtime from the CPU
// features. Variants agree with the reference up to floating-point
// reassociation (tests/test_jet_kernels.cpp pins the bound).

#include <cstddef>
#include <cstdint>

namespace bachlab::simd {

enum class Isa { Scalar, Avx2, Neon };

const char* to_string(Isa isa);

struct Kernels {
  Isa isa;
  /// Grouped Cauchy product: out[k] = sum_p a[lhs[p]] * b[rhs[p]] over
  /// p in [offsets[k], offsets[k+1]).
  void (*cauchy)(const std::int32_t* offsets, const std::int32_t* lhs, const std::int32_t* rhs,
                 const double* a, const double* b, double* out, std::size_t n_out);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// y *= alpha
  void (*scale)(double alpha, double* y, std::size_t n);
  /// sum_i w[i] * f[i], blocked so the result depends only on n and the ISA.
  double (*dot)(const double* w, const double* f, std::size_t n);
};

const Kernels& scalar_kernels();
/// nullptr when the variant was not compiled for this target.
const Kernels* avx2_kernels();
const Kernels* neon_kernels();

bool cpu_supports(Isa isa);

/// Kernels in use. Defaults to the widest ISA the CPU supports.
const Kernels& active();
/// Force an ISA (tests, benchmarks). Throws if unsupported on this CPU.
void select(Isa isa);
/// Back to automatic selection.
void select_auto();

}  // namespace bachlab::simd
