#pragma once

#include <array>
#include <optional>
#include <vector>

#include "optomech/model.hpp"
#include "optomech/numeric_types.hpp"

namespace optomech {

/// Mean-field solution of the driven two-resonator + mechanics equations.
struct SteadyState {
  Complex a1s;           // sqrt(photons)
  Complex a2s;           // sqrt(photons)
  double x_s = 0.0;      // m
  double p_s = 0.0;      // always 0
  double Delta_bar = 0.0;  // Delta + xi x_s, rad/s
  Complex G;             // a2s xi x0, rad/s
  int branch_count = 1;
  int branch_index = 0;
  /// Intracavity intensities |a2s|^2 of every physical branch, ascending.
  std::vector<double> branch_intensities;

  [[nodiscard]] double intensity() const { return std::norm(a2s); }
};

struct SteadyStateOptions {
  /// Index into the ascending list of physical branches; the lowest
  /// (adiabatically reached) branch when unset.
  std::optional<int> branch;
};

/// Coefficients {c3, c2, c1, c0} (descending) of the real cubic in
/// I = |a2s|^2 obtained from |den(x_s)|^2 I = eta_L^2 (Delta^2 + kappa^2)
/// with x_s = hbar xi I / (m omega_m^2). c3 vanishes when xi = 0.
[[nodiscard]] std::array<double, 4> intensity_polynomial(const SystemParams& params);

/// Nonnegative real roots of the intensity polynomial, ascending.
[[nodiscard]] std::vector<double> physical_intensities(const SystemParams& params);

/// Throws kNoPhysicalRoot, kSingularDenominator (J != 0 and kappa + i Delta = 0)
/// or kInvalidBranch.
[[nodiscard]] SteadyState solve_steady_state(const SystemParams& params,
                                             const SteadyStateOptions& options = {});

[[nodiscard]] Complex coupling_G(const SteadyState& state, const SystemParams& params);

/// Right-hand sides of the four mean-field equations at the state (no noise).
struct MeanFieldResidual {
  Complex da1;
  Complex da2;
  double dx = 0.0;
  double dp = 0.0;
  /// max of the optical residuals over max(eta_L, gamma |a2s|) and the
  /// force residual over max(m omega_m^2 |x_s|, hbar xi |a2s|^2).
  double relative = 0.0;
};

[[nodiscard]] MeanFieldResidual mean_field_residual(const SystemParams& params,
                                                    const SteadyState& state);

}  // namespace optomech
