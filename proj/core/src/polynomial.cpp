#include "optomech/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "optomech/error.hpp"

namespace optomech {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Primitive cube root of unity, -1/2 + i sqrt(3)/2.
const Complex kOmega3{-0.5, 0.86602540378443864676};

Complex principal_cbrt(Complex z) {
  if (z == Complex{}) return {};
  return std::polar(std::cbrt(std::abs(z)), std::arg(z) / 3.0);
}

Complex cubic_value(Complex l1, Complex l2, Complex l3, Complex w) {
  return ((w + l1) * w + l2) * w + l3;
}

Complex cubic_derivative(Complex l1, Complex l2, Complex w) {
  return (3.0 * w + 2.0 * l1) * w + l2;
}

}  // namespace

double cubic_scale(Complex l1, Complex l2, Complex l3) {
  return std::max({1.0, std::abs(l1), std::sqrt(std::abs(l2)), std::cbrt(std::abs(l3))});
}

DepressedCubic depress_cubic(Complex l1, Complex l2, Complex l3) {
  const Complex l1_sq = l1 * l1;
  return {l2 - l1_sq / 3.0, 2.0 * l1_sq * l1 / 27.0 - l1 * l2 / 3.0 + l3};
}

Complex depressed_discriminant(const DepressedCubic& d) {
  return -4.0 * d.p * d.p * d.p - 27.0 * d.q * d.q;
}

CardanoPair cardano_pair(const DepressedCubic& d, double scale) {
  const Complex s = std::sqrt(d.q * d.q / 4.0 + d.p * d.p * d.p / 27.0);
  const Complex plus = -d.q / 2.0 + s;
  const Complex minus = -d.q / 2.0 - s;
  const Complex u = principal_cbrt(std::abs(plus) >= std::abs(minus) ? plus : minus);
  if (std::abs(u) <= 1e3 * kEps * scale) {
    return {principal_cbrt(-d.q), Complex{}};
  }
  return {u, -d.p / (3.0 * u)};
}

CubicRoots solve_cubic_cardano(Complex l1, Complex l2, Complex l3) {
  if (!is_finite(l1) || !is_finite(l2) || !is_finite(l3)) {
    throw Error(ErrorCode::kDegenerateInput, "cubic coefficients must be finite");
  }
  CubicRoots out;
  out.scale = cubic_scale(l1, l2, l3);
  const DepressedCubic dep = depress_cubic(l1, l2, l3);
  const auto [u, v] = cardano_pair(dep, out.scale);
  const Complex shift = l1 / 3.0;
  const Complex omega_sq = std::conj(kOmega3);
  out.roots = {u + v - shift, kOmega3 * u + omega_sq * v - shift,
               omega_sq * u + kOmega3 * v - shift};

  const double scale3 = out.scale * out.scale * out.scale;
  for (std::size_t k = 0; k < 3; ++k) {
    Complex w = out.roots[k];
    double res = std::abs(cubic_value(l1, l2, l3, w));
    for (int it = 0; it < 2 && res > 0.0; ++it) {
      const Complex d = cubic_derivative(l1, l2, w);
      if (d == Complex{}) break;
      const Complex trial = w - cubic_value(l1, l2, l3, w) / d;
      const double trial_res = std::abs(cubic_value(l1, l2, l3, trial));
      if (!(trial_res < res)) break;
      w = trial;
      res = trial_res;
    }
    out.roots[k] = w;
    out.residuals[k] = res / scale3;
  }
  return out;
}

Complex poly_eval(std::span<const Complex> coeffs, Complex z) {
  Complex acc{};
  for (const auto& c : coeffs) acc = acc * z + c;
  return acc;
}

double poly_relative_residual(std::span<const Complex> coeffs, Complex z) {
  double bound = 0.0;
  const double az = std::abs(z);
  for (const auto& c : coeffs) bound = bound * az + std::abs(c);
  if (bound == 0.0) return 0.0;
  return std::abs(poly_eval(coeffs, z)) / bound;
}

std::vector<Complex> solve_poly_aberth(std::span<const Complex> coeffs_in,
                                       const AberthOptions& options) {
  if (coeffs_in.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "polynomial degree must be at least 1");
  }
  const std::size_t n = coeffs_in.size() - 1;
  if (n > kMaxMatrixOrder) {
    throw Error(ErrorCode::kInvalidArgument, "polynomial degree must be at most 12");
  }
  for (const auto& c : coeffs_in) {
    if (!is_finite(c)) throw Error(ErrorCode::kDegenerateInput, "coefficients must be finite");
  }
  if (coeffs_in[0] == Complex{}) {
    throw Error(ErrorCode::kDegenerateInput, "leading coefficient must be nonzero");
  }

  std::vector<Complex> a(coeffs_in.begin(), coeffs_in.end());
  const Complex lead = a[0];
  for (auto& c : a) c /= lead;
  if (n == 1) return {-a[1]};

  std::vector<Complex> da(n);
  for (std::size_t k = 0; k < n; ++k) da[k] = a[k] * static_cast<double>(n - k);

  // Fujiwara bound for the initial circle.
  double radius = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double r = std::pow(std::abs(a[k]), 1.0 / static_cast<double>(k));
    radius = std::max(radius, r);
  }
  radius = radius > 0.0 ? 2.0 * radius : 1.0;

  std::vector<Complex> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    z[k] = std::polar(radius, kTwoPi * static_cast<double>(k) / static_cast<double>(n) + 0.4);
  }

  std::vector<bool> done(n, false);
  for (int it = 0; it < options.max_iterations; ++it) {
    bool all_done = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      const Complex pz = poly_eval(a, z[k]);
      if (pz == Complex{}) {
        done[k] = true;
        continue;
      }
      const Complex ratio = pz / poly_eval(da, z[k]);
      Complex repulsion{};
      for (std::size_t j = 0; j < n; ++j) {
        if (j != k) repulsion += 1.0 / (z[k] - z[j]);
      }
      const Complex step = ratio / (1.0 - ratio * repulsion);
      if (!is_finite(step)) continue;
      z[k] -= step;
      if (std::abs(step) <= 4.0 * kEps * std::abs(z[k])) {
        done[k] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) break;
  }

  double worst = 0.0;
  for (auto& root : z) {
    double res = poly_relative_residual(a, root);
    for (int it = 0; it < 3 && res > 0.0; ++it) {
      const Complex d = poly_eval(da, root);
      if (d == Complex{}) break;
      const Complex trial = root - poly_eval(a, root) / d;
      const double trial_res = poly_relative_residual(a, trial);
      if (!(trial_res < res)) break;
      root = trial;
      res = trial_res;
    }
    worst = std::max(worst, res);
  }
  if (!(worst <= options.tolerance)) {
    std::ostringstream msg;
    msg << "Aberth iteration did not converge; best residual " << worst;
    throw Error(ErrorCode::kNoConvergence, msg.str());
  }
  return z;
}

namespace {

template <typename T>
std::vector<T> faddeev_leverrier(const SmallMatrix<T>& a) {
  if (!a.all_finite()) throw Error(ErrorCode::kDegenerateInput, "matrix entries must be finite");
  const std::size_t n = a.order();
  std::vector<T> c(n + 1, T{});
  c[0] = T{1};
  SmallMatrix<T> m = SmallMatrix<T>::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const SmallMatrix<T> am = a * m;
    c[k] = -am.trace() / static_cast<double>(k);
    if (k < n) {
      m = am;
      for (std::size_t i = 0; i < n; ++i) m(i, i) += c[k];
    }
  }
  return c;
}

}  // namespace

std::vector<Complex> char_poly(const ComplexMatrix& a) { return faddeev_leverrier(a); }
std::vector<double> char_poly(const RealMatrix& a) { return faddeev_leverrier(a); }

RouthResult routh_hurwitz(std::span<const double> coeffs) {
  if (coeffs.empty()) throw Error(ErrorCode::kInvalidArgument, "empty polynomial");
  if (!(coeffs[0] > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "leading coefficient must be positive");
  }
  const std::size_t degree = coeffs.size() - 1;
  if (degree > kMaxMatrixOrder) {
    throw Error(ErrorCode::kInvalidArgument, "polynomial degree must be at most 12");
  }
  RouthResult result;
  if (degree == 0) {
    result.stable = true;
    return result;
  }

  const std::size_t width = degree / 2 + 1;
  std::vector<double> upper(width, 0.0);
  std::vector<double> lower(width, 0.0);
  for (std::size_t i = 0; i <= degree; ++i) {
    (i % 2 == 0 ? upper : lower)[i / 2] = coeffs[i];
  }

  double coeff_scale = 0.0;
  for (double c : coeffs) coeff_scale = std::max(coeff_scale, std::abs(c));

  auto row_scale = [](const std::vector<double>& row) {
    double s = 0.0;
    for (double x : row) s = std::max(s, std::abs(x));
    return s;
  };

  std::vector<double> first_column{upper[0]};
  for (std::size_t row = 1; row <= degree; ++row) {
    const double scale = std::max(row_scale(lower), row_scale(upper));
    const double zero_tol = 64.0 * kEps * std::max(scale, kEps * coeff_scale);
    if (row_scale(lower) <= zero_tol) {
      throw Error(ErrorCode::kDegenerateArray,
                  "Routh row " + std::to_string(row) + " vanishes identically");
    }
    if (std::abs(lower[0]) <= zero_tol) {
      lower[0] = std::max(zero_tol, kEps * scale);
      result.epsilon_substituted = true;
    }
    first_column.push_back(lower[0]);
    std::vector<double> next(width, 0.0);
    for (std::size_t j = 0; j + 1 < width; ++j) {
      next[j] = (lower[0] * upper[j + 1] - upper[0] * lower[j + 1]) / lower[0];
    }
    upper = std::move(lower);
    lower = std::move(next);
  }

  for (std::size_t i = 1; i < first_column.size(); ++i) {
    if ((first_column[i] > 0.0) != (first_column[i - 1] > 0.0)) ++result.sign_changes;
  }
  result.stable = result.sign_changes == 0 && !result.epsilon_substituted;
  return result;
}

}  // namespace optomech
