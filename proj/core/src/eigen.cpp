#include "optomech/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "optomech/error.hpp"
#include "optomech/polynomial.hpp"

namespace optomech {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double vec_norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace

std::vector<Complex> eigvals_small(const ComplexMatrix& a) {
  // Roots are found on A/s so the polynomial coefficients stay O(1).
  const double s = a.max_abs();
  if (s == 0.0) return std::vector<Complex>(a.order(), Complex{});
  ComplexMatrix scaled = a;
  scaled *= Complex{1.0 / s};
  const auto coeffs = char_poly(scaled);
  auto roots = solve_poly_aberth(coeffs);
  for (auto& r : roots) r *= s;
  return roots;
}

std::vector<Complex> eigvals_small(const RealMatrix& a) { return eigvals_small(to_complex(a)); }

std::vector<Complex> solve_linear(ComplexMatrix a, std::vector<Complex> b) {
  const std::size_t n = a.order();
  if (b.size() != n) throw Error(ErrorCode::kInvalidArgument, "right-hand side length mismatch");
  const double tol = static_cast<double>(n) * kEps * a.max_abs();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    }
    if (std::abs(a(piv, col)) <= tol) {
      throw Error(ErrorCode::kSingularResolvent, "linear system is singular");
    }
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex f = a(r, col) / a(col, col);
      if (f == Complex{}) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<Complex> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Complex acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a(i, c) * x[c];
    x[i] = acc / a(i, i);
  }
  return x;
}

double eigenpair_residual(const ComplexMatrix& a, Complex lambda) {
  const std::size_t n = a.order();
  const double norm_a = std::max(a.max_abs(), std::abs(lambda));
  ComplexMatrix shifted = a;
  // Perturb the shift slightly so the solve stays nonsingular.
  const Complex shift = lambda + Complex{1e-10 * norm_a, 1e-10 * norm_a};
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= shift;

  std::vector<Complex> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = Complex{1.0 + 0.1 * static_cast<double>(i), 0.3};
  for (int it = 0; it < 2; ++it) {
    v = solve_linear(shifted, v);
    const double nv = vec_norm(v);
    for (auto& x : v) x /= nv;
  }
  ComplexMatrix exact = a;
  for (std::size_t i = 0; i < n; ++i) exact(i, i) -= lambda;
  const auto r = exact.apply(v);
  return vec_norm(r) / norm_a;
}

}  // namespace optomech
