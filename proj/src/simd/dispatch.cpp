#include <atomic>

#include "bachlab/error.hpp"
#include "bachlab/simd/jet_kernels.hpp"

namespace bachlab::simd {

const char* to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
      return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2") &&
             __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon: return neon_kernels() != nullptr;
  }
  return false;
}

namespace {

const Kernels* detect() {
  if (cpu_supports(Isa::Avx2)) return avx2_kernels();
  if (cpu_supports(Isa::Neon)) return neon_kernels();
  return &scalar_kernels();
}

std::atomic<const Kernels*>& current() {
  static std::atomic<const Kernels*> k{detect()};
  return k;
}

}  // namespace

const Kernels& active() { return *current().load(std::memory_order_relaxed); }

void select(Isa isa) {
  if (!cpu_supports(isa))
    throw Error(std::string("instruction set not available: ") + to_string(isa));
  switch (isa) {
    case Isa::Scalar: current().store(&scalar_kernels()); break;
    case Isa::Avx2: current().store(avx2_kernels()); break;
    case Isa::Neon: current().store(neon_kernels()); break;
  }
}

void select_auto() { current().store(detect()); }

}  // namespace bachlab::simd
