#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "bachlab/jet.hpp"

namespace bachlab {

/// Dense n^rank array in coordinate components, row-major, rank <= 4.
template <class T>
class TensorOf {
 public:
  TensorOf() = default;
  TensorOf(int n, int rank, const T& fill = T{}) : n_(n), rank_(rank), data_(count(n, rank), fill) {}

  int n() const { return n_; }
  int rank() const { return rank_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  template <class... I>
  T& operator()(I... idx) {
    return data_[flat(idx...)];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    return data_[flat(idx...)];
  }

  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  /// Multi-index of flat position k.
  std::array<int, 4> unflatten(std::size_t k) const {
    std::array<int, 4> idx{};
    for (int r = rank_ - 1; r >= 0; --r) {
      idx[static_cast<std::size_t>(r)] = static_cast<int>(k % static_cast<std::size_t>(n_));
      k /= static_cast<std::size_t>(n_);
    }
    return idx;
  }

 private:
  static std::size_t count(int n, int rank) {
    std::size_t c = 1;
    for (int r = 0; r < rank; ++r) c *= static_cast<std::size_t>(n);
    return c;
  }

  template <class... I>
  std::size_t flat(I... idx) const {
    assert(static_cast<int>(sizeof...(I)) == rank_);
    std::size_t k = 0;
    ((k = k * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx)), ...);
    return k;
  }

  int n_ = 0;
  int rank_ = 0;
  std::vector<T> data_;
};

using Tensor = TensorOf<double>;
using JetTensor = TensorOf<Jet>;

/// Constant terms of a jet tensor.
inline Tensor values(const JetTensor& t) {
  Tensor v(t.n(), t.rank());
  for (std::size_t k = 0; k < t.size(); ++k) v[k] = t[k].value();
  return v;
}

/// Lowest jet order among the components (all components share one order
/// in tensors built by this library).
inline int jet_order(const JetTensor& t) { return t.empty() ? 0 : t[0].order(); }

inline JetTensor truncated(const JetTensor& t, int order) {
  JetTensor out = t;
  for (auto& j : out) j = j.truncated(order);
  return out;
}

inline double max_abs(const Tensor& t) {
  double m = 0.0;
  for (double v : t) m = v < 0 ? (-v > m ? -v : m) : (v > m ? v : m);
  return m;
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    const double ad = d < 0 ? -d : d;
    if (ad > m) m = ad;
  }
  return m;
}

}  // namespace bachlab
