#include "bachlab/sampling.hpp"

#include <random>

#include "bachlab/error.hpp"

namespace bachlab {

double radical_inverse(std::uint64_t k, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (k > 0) {
    r += f * static_cast<double>(k % base);
    k /= base;
    f *= inv;
  }
  return r;
}

std::vector<std::vector<double>> halton_points(const std::vector<Interval>& box, std::size_t count,
                                               std::uint64_t seed, double margin) {
  static constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13};
  if (box.size() > std::size(kPrimes)) throw SpecError("halton_points: dimension too large");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> shift(box.size());
  for (auto& s : shift) s = u(rng);

  std::vector<std::vector<double>> pts(count, std::vector<double>(box.size()));
  for (std::size_t k = 0; k < count; ++k)
    for (std::size_t d = 0; d < box.size(); ++d) {
      double v = radical_inverse(k + 1, kPrimes[d]) + shift[d];
      if (v >= 1.0) v -= 1.0;
      const double lo = box[d].lo + margin * box[d].length();
      const double hi = box[d].hi - margin * box[d].length();
      pts[k][d] = lo + v * (hi - lo);
    }
  return pts;
}

}  // namespace bachlab
