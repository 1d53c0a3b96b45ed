#pragma once

#include <span>
#include <vector>

#include "optomech/numeric_types.hpp"
#include "optomech/small_matrix.hpp"

namespace optomech {

/// Eigenvalues of a small dense matrix: characteristic polynomial, Aberth
/// roots, then Newton polishing on det(wI - A). Propagates kNoConvergence.
[[nodiscard]] std::vector<Complex> eigvals_small(const ComplexMatrix& a);
[[nodiscard]] std::vector<Complex> eigvals_small(const RealMatrix& a);

/// Gaussian elimination with partial pivoting. Throws kSingularResolvent
/// when a pivot falls below n*eps*max|A|.
[[nodiscard]] std::vector<Complex> solve_linear(ComplexMatrix a, std::vector<Complex> b);

/// Relative eigen-residual ||(A - lambda I) v|| / (||A|| ||v||) of the
/// vector obtained by two steps of shifted inverse iteration.
[[nodiscard]] double eigenpair_residual(const ComplexMatrix& a, Complex lambda);

}  // namespace optomech
