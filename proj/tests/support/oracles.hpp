#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's solvers.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "optomech/model.hpp"
#include "optomech/steady_state.hpp"

namespace oracle {

using Complex = std::complex<double>;

inline Complex det3(const std::array<std::array<Complex, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

/// det(w I - M) for the supermode matrix, by cofactor expansion.
inline Complex supermode_det(const optomech::SystemParams& p, Complex G, Complex w) {
  const Complex i{0.0, 1.0};
  const double D = p.Delta();
  std::array<std::array<Complex, 3>, 3> m{{
      {w + D + i * p.kappa(), p.J(), 0.0},
      {p.J(), w + D - i * p.gamma, -G},
      {0.0, -std::conj(G), w - p.omega_m()},
  }};
  return det3(m);
}

/// Smallest over permutations of the largest pairwise distance.
inline double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  std::vector<std::size_t> idx(b.size());
  std::iota(idx.begin(), idx.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[idx[k]]));
    best = std::min(best, worst);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return best;
}

/// Mechanical self-energy from eliminating the optical fluctuations exactly:
/// chi^-1 = m (omega_m^2 - w^2 - i w Gamma_m) - Sigma(w).
/// Resonator 1 sits at the bare detuning; `shifted_gain` puts it at Delta_bar
/// instead, which is the approximation behind the closed-form spring/damping.
inline Complex self_energy(const optomech::SystemParams& p, const optomech::SteadyState& s,
                           double w, bool shifted_gain = false) {
  const Complex i{0.0, 1.0};
  const double k = p.kappa();
  const double g = p.gamma;
  const double J = p.J();
  const double Db = s.Delta_bar;
  const double D = shifted_gain ? Db : p.Delta();
  // Response of da2 (at +w) and da2* (at +w) with resonator 1 eliminated.
  Complex r_plus = g - i * (Db + w);
  Complex r_minus = g + i * (Db - w);
  if (J != 0.0) {
    r_plus -= J * J / (k + i * (D + w));
    r_minus -= J * J / (k + i * (w - D));
  }
  const double hbar = optomech::PhysicalConstants::hbar;
  return i * hbar * p.xi * p.xi * std::norm(s.a2s) * (1.0 / r_plus - 1.0 / r_minus);
}

struct ExactMechanics {
  double omega_eff;
  double gamma_eff;
};

inline ExactMechanics exact_mechanics(const optomech::SystemParams& p,
                                      const optomech::SteadyState& s, double w,
                                      bool shifted_gain = false) {
  const Complex sigma = self_energy(p, s, w, shifted_gain);
  const double m = p.mass();
  return {std::sqrt(p.omega_m() * p.omega_m() - sigma.real() / m),
          p.Gamma_m + sigma.imag() / (m * w)};
}

inline std::mt19937_64 rng(unsigned long long seed) { return std::mt19937_64(seed); }

inline Complex random_complex(std::mt19937_64& gen, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  return {n(gen), n(gen)};
}

}  // namespace oracle
