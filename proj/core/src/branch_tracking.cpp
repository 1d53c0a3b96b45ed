#include "optomech/branch_tracking.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "optomech/error.hpp"

namespace optomech {

std::vector<std::size_t> match_branches(std::span<const Complex> prev,
                                        std::span<const Complex> next) {
  if (prev.size() != next.size()) {
    throw Error(ErrorCode::kInvalidArgument, "branch sets must have equal length");
  }
  if (prev.size() > 6) {
    throw Error(ErrorCode::kInvalidArgument, "branch matching supports at most 6 roots");
  }
  std::vector<std::size_t> perm(prev.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) cost += std::abs(next[perm[i]] - prev[i]);
    // Strict comparison keeps the identity on ties.
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace optomech
