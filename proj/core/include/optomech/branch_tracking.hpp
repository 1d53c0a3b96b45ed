#pragma once

#include <span>
#include <vector>

#include "optomech/numeric_types.hpp"

namespace optomech {

/// Permutation sigma minimizing sum_i |next[sigma[i]] - prev[i]|, searched
/// exhaustively (k <= 6). Reordering next as next[sigma[i]] continues the
/// branches of prev.
[[nodiscard]] std::vector<std::size_t> match_branches(std::span<const Complex> prev,
                                                      std::span<const Complex> next);

template <typename T>
[[nodiscard]] std::vector<T> apply_permutation(std::span<const T> values,
                                               std::span<const std::size_t> sigma) {
  std::vector<T> out;
  out.reserve(sigma.size());
  for (auto idx : sigma) out.push_back(values[idx]);
  return out;
}

}  // namespace optomech
