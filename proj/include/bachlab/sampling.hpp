#pragma once

#include <cstdint>
#include <vector>

namespace bachlab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Radical inverse of k in base `base`.
double radical_inverse(std::uint64_t k, unsigned base);

/// `count` points of a Halton sequence (bases 2, 3, 5, 7) in the box shrunk
/// by `margin` (fraction of each side) at both ends, Cranley-Patterson
/// shifted by a vector drawn from mt19937_64(seed).
std::vector<std::vector<double>> halton_points(const std::vector<Interval>& box, std::size_t count,
                                               std::uint64_t seed, double margin);

}  // namespace bachlab
