#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "optomech/numeric_types.hpp"

namespace optomech {

inline constexpr std::size_t kMaxMatrixOrder = 12;

/// Dense square matrix of order 1..12, row-major.
///
/// Sized for the 3x3 supermode determinant and the 4x4/6x6 fluctuation
/// systems; nothing here is meant for large problems.
template <typename T>
class SmallMatrix {
 public:
  using value_type = T;

  SmallMatrix() = default;
  explicit SmallMatrix(std::size_t n);
  SmallMatrix(std::initializer_list<std::initializer_list<T>> rows);

  static SmallMatrix identity(std::size_t n);

  [[nodiscard]] std::size_t order() const noexcept { return n_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

  [[nodiscard]] std::span<const T> data() const noexcept { return data_; }

  [[nodiscard]] T trace() const;
  [[nodiscard]] SmallMatrix transpose() const;
  [[nodiscard]] double max_abs() const;
  [[nodiscard]] bool all_finite() const;

  SmallMatrix& operator*=(T s);
  SmallMatrix& operator+=(const SmallMatrix& o);
  SmallMatrix& operator-=(const SmallMatrix& o);

  friend SmallMatrix operator*(const SmallMatrix& a, const SmallMatrix& b) {
    return multiply(a, b);
  }
  friend SmallMatrix operator*(SmallMatrix a, T s) { return a *= s; }
  friend SmallMatrix operator*(T s, SmallMatrix a) { return a *= s; }
  friend SmallMatrix operator+(SmallMatrix a, const SmallMatrix& b) { return a += b; }
  friend SmallMatrix operator-(SmallMatrix a, const SmallMatrix& b) { return a -= b; }

  [[nodiscard]] std::vector<T> apply(std::span<const T> v) const;

 private:
  static SmallMatrix multiply(const SmallMatrix& a, const SmallMatrix& b);

  std::size_t n_ = 0;
  std::vector<T> data_;
};

using ComplexMatrix = SmallMatrix<Complex>;
using RealMatrix = SmallMatrix<double>;

[[nodiscard]] ComplexMatrix to_complex(const RealMatrix& m);

extern template class SmallMatrix<double>;
extern template class SmallMatrix<Complex>;

}  // namespace optomech
