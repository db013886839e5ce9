#include <cmath>
#include <random>
#include <vector>

#include "bachlab/jet.hpp"
#include "bachlab/simd/jet_kernels.hpp"
#include "doctest.h"

using namespace bachlab;

namespace {

std::vector<const simd::Kernels*> variants() {
  std::vector<const simd::Kernels*> v{&simd::scalar_kernels()};
  if (simd::cpu_supports(simd::Isa::Avx2) && simd::avx2_kernels()) v.push_back(simd::avx2_kernels());
  if (simd::cpu_supports(simd::Isa::Neon) && simd::neon_kernels()) v.push_back(simd::neon_kernels());
  return v;
}

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

struct IsaGuard {
  ~IsaGuard() { simd::select_auto(); }
};

}  // namespace

TEST_CASE("cauchy kernels agree with the scalar reference") {
  std::mt19937_64 rng(7);
  for (int dim = 1; dim <= kMaxJetDim; ++dim)
    for (int order = 0; order <= kMaxJetOrder; ++order) {
      const JetLayout& L = jet_layout(dim, order);
      const auto a = random_vec(L.size, rng), b = random_vec(L.size, rng);
      std::vector<double> ref(L.size);
      simd::scalar_kernels().cauchy(L.mul_offsets.data(), L.mul_lhs.data(), L.mul_rhs.data(), a.data(), b.data(),
                                    ref.data(), L.size);
      for (const auto* k : variants()) {
        std::vector<double> out(L.size);
        k->cauchy(L.mul_offsets.data(), L.mul_lhs.data(), L.mul_rhs.data(), a.data(), b.data(), out.data(), L.size);
        for (std::size_t i = 0; i < L.size; ++i) CHECK(std::abs(out[i] - ref[i]) <= 1e-15 * 126);
      }
    }
}

TEST_CASE("axpy, scale and dot agree on odd lengths") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {0u, 1u, 3u, 7u, 8u, 33u, 126u, 1001u}) {
    const auto x = random_vec(n, rng), w = random_vec(n, rng);
    const auto y0 = random_vec(n, rng);
    auto yr = y0;
    simd::scalar_kernels().axpy(0.37, x.data(), yr.data(), n);
    auto sr = y0;
    simd::scalar_kernels().scale(-1.7, sr.data(), n);
    const double dr = simd::scalar_kernels().dot(w.data(), x.data(), n);
    double plain = 0.0, mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      plain += w[i] * x[i];
      mag += std::abs(w[i] * x[i]);
    }
    CHECK(std::abs(dr - plain) <= 1e-15 * (mag + 1.0));
    for (const auto* k : variants()) {
      auto y = y0;
      k->axpy(0.37, x.data(), y.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y[i] - yr[i]) <= 4e-16 * (std::abs(0.37 * x[i]) + std::abs(y0[i])));
      auto s = y0;
      k->scale(-1.7, s.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(s[i] == sr[i]);
      CHECK(std::abs(k->dot(w.data(), x.data(), n) - dr) <= 1e-15 * (mag + 1.0));
    }
  }
}

TEST_CASE("dot is reproducible for a fixed ISA") {
  std::mt19937_64 rng(3);
  const auto x = random_vec(5000, rng), w = random_vec(5000, rng);
  for (const auto* k : variants()) CHECK(k->dot(w.data(), x.data(), x.size()) == k->dot(w.data(), x.data(), x.size()));
}

TEST_CASE("jet arithmetic is ISA independent up to reassociation") {
  IsaGuard guard;
  auto build = [] {
    const Jet x = Jet::variable(0, 0.3, 4, 5), y = Jet::variable(1, -0.2, 4, 5), z = Jet::variable(2, 0.9, 4, 5),
              w = Jet::variable(3, 0.1, 4, 5);
    return exp(x * y) / (2.0 + cos(z * w)) + sqrt(1.5 + x * z * w);
  };
  simd::select(simd::Isa::Scalar);
  CHECK(simd::active().isa == simd::Isa::Scalar);
  const Jet ref = build();
  for (const auto* k : variants()) {
    simd::select(k->isa);
    const Jet j = build();
    for (std::size_t i = 0; i < j.size(); ++i) CHECK(j[i] == doctest::Approx(ref[i]).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("selecting an unsupported ISA throws") {
  IsaGuard guard;
  for (auto isa : {simd::Isa::Avx2, simd::Isa::Neon})
    if (!simd::cpu_supports(isa)) CHECK_THROWS(simd::select(isa));
  CHECK(simd::cpu_supports(simd::Isa::Scalar));
}
