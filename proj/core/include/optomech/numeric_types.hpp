#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace optomech {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[nodiscard]] inline bool is_finite(double x) { return std::isfinite(x); }
[[nodiscard]] inline bool is_finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace optomech
