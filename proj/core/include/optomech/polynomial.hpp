#pragma once

// Polynomial kernels. Coefficient vectors are in descending powers:
// {a0, a1, ..., an} means a0*w^n + a1*w^(n-1) + ... + an.

#include <array>
#include <span>
#include <vector>

#include "optomech/numeric_types.hpp"
#include "optomech/small_matrix.hpp"

namespace optomech {

/// Roots of the monic cubic w^3 + l1*w^2 + l2*w + l3.
struct CubicRoots {
  std::array<Complex, 3> roots;
  /// |r^3 + l1 r^2 + l2 r + l3| / scale^3 per root.
  std::array<double, 3> residuals;
  double scale = 1.0;
};

/// Depressed form x^3 + p x + q of the monic cubic, with w = x - l1/3.
struct DepressedCubic {
  Complex p;
  Complex q;
};

/// Paired Cardano cube roots (u, v) with u*v = -p/3 by construction.
struct CardanoPair {
  Complex u;
  Complex v;
};

/// max(1, |l1|, |l2|^(1/2), |l3|^(1/3)).
[[nodiscard]] double cubic_scale(Complex l1, Complex l2, Complex l3);

[[nodiscard]] DepressedCubic depress_cubic(Complex l1, Complex l2, Complex l3);

/// Discriminant -4p^3 - 27q^2 of the depressed cubic.
[[nodiscard]] Complex depressed_discriminant(const DepressedCubic& d);

/// Picks u as the principal cube root of -q/2 +/- sqrt(q^2/4 + p^3/27)
/// (larger-magnitude sign) and v = -p/(3u). Falls back to u = cbrt(-q), v = 0
/// when u vanishes relative to `scale`.
[[nodiscard]] CardanoPair cardano_pair(const DepressedCubic& d, double scale);

/// Cardano solve of w^3 + l1 w^2 + l2 w + l3 = 0.
/// Throws Error(kDegenerateInput) for non-finite coefficients.
[[nodiscard]] CubicRoots solve_cubic_cardano(Complex l1, Complex l2, Complex l3);

/// Evaluates the polynomial (descending coefficients) at z.
[[nodiscard]] Complex poly_eval(std::span<const Complex> coeffs, Complex z);

/// Componentwise backward error |p(z)| / sum |a_k| |z|^(n-k).
[[nodiscard]] double poly_relative_residual(std::span<const Complex> coeffs, Complex z);

struct AberthOptions {
  int max_iterations = 500;
  double tolerance = 1e-10;
};

/// Simultaneous Aberth-Ehrlich iteration with Newton polishing.
/// Degree is coeffs.size() - 1, at most 12. Clustered roots are returned
/// individually. Throws Error(kNoConvergence) reporting the best residual
/// when the budget runs out with residual above the tolerance.
[[nodiscard]] std::vector<Complex> solve_poly_aberth(std::span<const Complex> coeffs,
                                                     const AberthOptions& options = {});

/// Coefficients of det(w I - A), descending, leading 1 (Faddeev-LeVerrier).
[[nodiscard]] std::vector<Complex> char_poly(const ComplexMatrix& a);
[[nodiscard]] std::vector<double> char_poly(const RealMatrix& a);

struct RouthResult {
  bool stable = false;
  /// Sign changes in the first column = roots in the closed right half-plane
  /// (counting epsilon-substituted zeros as sign changes).
  int sign_changes = 0;
  bool epsilon_substituted = false;
};

/// Routh array test on a real polynomial with positive leading coefficient.
/// Throws Error(kDegenerateArray) when a whole row vanishes.
[[nodiscard]] RouthResult routh_hurwitz(std::span<const double> coeffs);

[[nodiscard]] inline bool routh_hurwitz_stable(std::span<const double> coeffs) {
  return routh_hurwitz(coeffs).stable;
}

}  // namespace optomech
