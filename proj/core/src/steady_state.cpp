#include "optomech/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "optomech/error.hpp"
#include "optomech/polynomial.hpp"

namespace optomech {
namespace {

constexpr double kRealRootTolerance = 1e-8;

// x_s per unit intracavity intensity.
double displacement_per_photon(const SystemParams& p) {
  return PhysicalConstants::hbar * p.xi / (p.mass() * p.omega_m() * p.omega_m());
}

double real_poly(const std::array<double, 4>& c, double x) {
  return ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
}

double real_poly_derivative(const std::array<double, 4>& c, double x) {
  return (3.0 * c[0] * x + 2.0 * c[1]) * x + c[2];
}

// Newton refinement on the real cubic, accepted only while the residual drops.
double polish_real_root(const std::array<double, 4>& c, double x) {
  double res = std::abs(real_poly(c, x));
  for (int it = 0; it < 4 && res > 0.0; ++it) {
    const double d = real_poly_derivative(c, x);
    if (d == 0.0) break;
    const double trial = x - real_poly(c, x) / d;
    const double trial_res = std::abs(real_poly(c, trial));
    if (!(trial_res < res)) break;
    x = trial;
    res = trial_res;
  }
  return x;
}

}  // namespace

std::array<double, 4> intensity_polynomial(const SystemParams& p) {
  const double kappa = p.kappa();
  const double gamma = p.gamma;
  const double J = p.J();
  const double Delta = p.Delta();
  const double alpha = displacement_per_photon(p);

  // den(x) = (r0 + r1 I) + i (i0 + i1 I)
  const double r0 = J * J - kappa * gamma - Delta * Delta;
  const double r1 = -Delta * p.xi * alpha;
  const double i0 = Delta * (kappa - gamma);
  const double i1 = p.xi * kappa * alpha;
  const double drive = p.eta_L * p.eta_L * (Delta * Delta + kappa * kappa);
  return {r1 * r1 + i1 * i1, 2.0 * (r0 * r1 + i0 * i1), r0 * r0 + i0 * i0, -drive};
}

std::vector<double> physical_intensities(const SystemParams& params) {
  const auto c = intensity_polynomial(params);
  std::vector<double> candidates;
  if (c[3] == 0.0) {
    candidates.push_back(0.0);
  } else if (c[0] != 0.0) {
    const auto roots = solve_cubic_cardano(Complex{c[1] / c[0]}, Complex{c[2] / c[0]},
                                           Complex{c[3] / c[0]});
    for (const auto& r : roots.roots) {
      if (std::abs(r.imag()) <= kRealRootTolerance * std::max(1.0, std::abs(r))) {
        candidates.push_back(polish_real_root(c, r.real()));
      }
    }
  } else if (c[1] != 0.0) {
    const double disc = c[2] * c[2] - 4.0 * c[1] * c[3];
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      const double qq = -0.5 * (c[2] + std::copysign(s, c[2]));
      candidates.push_back(qq / c[1]);
      if (qq != 0.0) candidates.push_back(c[3] / qq);
    }
  } else if (c[2] != 0.0) {
    candidates.push_back(-c[3] / c[2]);
  }

  std::vector<double> out;
  for (double I : candidates) {
    if (I >= 0.0 && std::isfinite(I)) out.push_back(I);
  }
  std::sort(out.begin(), out.end());
  // A double root can appear twice after polishing.
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) {
                          return std::abs(a - b) <= 1e-12 * std::max({1.0, a, b});
                        }),
            out.end());
  return out;
}

SteadyState solve_steady_state(const SystemParams& params, const SteadyStateOptions& options) {
  const double kappa = params.kappa();
  const double J = params.J();
  const double Delta = params.Delta();
  const double gamma = params.gamma;
  if (J != 0.0 && kappa == 0.0 && Delta == 0.0) {
    throw Error(ErrorCode::kSingularDenominator, "kappa + i Delta vanishes with J != 0");
  }

  const auto intensities = physical_intensities(params);
  if (intensities.empty()) {
    throw Error(ErrorCode::kNoPhysicalRoot, "intensity polynomial has no nonnegative real root");
  }
  const int index = options.branch.value_or(0);
  if (index < 0 || index >= static_cast<int>(intensities.size())) {
    throw Error(ErrorCode::kInvalidBranch,
                "branch index " + std::to_string(index) + " out of range (" +
                    std::to_string(intensities.size()) + " branches)");
  }

  SteadyState s;
  s.branch_intensities = intensities;
  s.branch_count = static_cast<int>(intensities.size());
  s.branch_index = index;
  const double I = intensities[static_cast<std::size_t>(index)];
  s.x_s = displacement_per_photon(params) * I;
  s.p_s = 0.0;
  s.Delta_bar = Delta + params.xi * s.x_s;

  const Complex den{J * J - kappa * gamma - Delta * Delta - Delta * params.xi * s.x_s,
                    Delta * kappa - Delta * gamma + params.xi * kappa * s.x_s};
  if (params.eta_L == 0.0) {
    s.a2s = Complex{};
  } else {
    if (den == Complex{}) {
      throw Error(ErrorCode::kSingularDenominator, "steady-state denominator vanishes");
    }
    s.a2s = params.eta_L * Complex{-Delta, kappa} / den;
  }
  s.a1s = J == 0.0 ? Complex{} : Complex{0.0, J} * s.a2s / Complex{kappa, Delta};
  s.G = coupling_G(s, params);
  return s;
}

Complex coupling_G(const SteadyState& state, const SystemParams& params) {
  return state.a2s * params.xi * params.x0;
}

MeanFieldResidual mean_field_residual(const SystemParams& p, const SteadyState& s) {
  constexpr double hbar = PhysicalConstants::hbar;
  const Complex i{0.0, 1.0};
  MeanFieldResidual r;
  r.da1 = p.kappa() * s.a1s - i * p.J() * s.a2s + i * p.Delta() * s.a1s;
  r.da2 = -p.gamma * s.a2s - i * p.J() * s.a1s + i * p.xi * s.a2s * s.x_s +
          i * p.Delta() * s.a2s - i * p.eta_L;
  r.dx = s.p_s / p.mass();
  r.dp = -p.mass() * p.omega_m() * p.omega_m() * s.x_s + hbar * p.xi * std::norm(s.a2s) -
         p.Gamma_m * s.p_s;

  const double optical_scale = std::max(p.eta_L, p.gamma * std::abs(s.a2s));
  const double force_scale = std::max(p.mass() * p.omega_m() * p.omega_m() * std::abs(s.x_s),
                                      hbar * p.xi * std::norm(s.a2s));
  const double optical =
      optical_scale > 0.0 ? std::max(std::abs(r.da1), std::abs(r.da2)) / optical_scale : 0.0;
  const double force = force_scale > 0.0 ? std::abs(r.dp) / force_scale : 0.0;
  r.relative = std::max(optical, force);
  return r;
}

}  // namespace optomech
