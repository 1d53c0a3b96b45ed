#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "optomech/model.hpp"
#include "optomech/numeric_types.hpp"
#include "optomech/small_matrix.hpp"
#include "optomech/steady_state.hpp"

namespace optomech {

/// kCoupled: both resonators, basis (da1, da1*, da2, da2*, dx, dp).
/// kSingleCavity: resonator 2 alone, basis (da2, da2*, dx, dp).
enum class Topology { kCoupled, kSingleCavity };

/// Linearized fluctuation dynamics du/dt = A u.
///
/// The SI matrices mix very different scales (hbar xi a2s next to
/// m omega_m^2), so the numerics use the similarity-transformed copies with
/// x in units of x0 and p in units of m omega_m x0. Those have all entries in
/// rad/s and the same spectrum.
struct TransferMatrix {
  Topology topology = Topology::kCoupled;
  ComplexMatrix A_complex;
  RealMatrix A_quadrature;  // (X1, Y1, X2, Y2, x, p) or (X2, Y2, x, p)
  ComplexMatrix A_complex_scaled;
  RealMatrix A_quadrature_scaled;
  double R2 = 0.0;  // sqrt(2) hbar xi Re(a2s)
  double I2 = 0.0;  // sqrt(2) hbar xi Im(a2s)
  double gamma = 0.0;
  double omega_m = 0.0;
  double mass = 0.0;

  [[nodiscard]] std::size_t x_index() const { return A_complex.order() - 2; }
  [[nodiscard]] std::size_t p_index() const { return A_complex.order() - 1; }
};

[[nodiscard]] TransferMatrix transfer_matrix(const SystemParams& params, const SteadyState& state,
                                             Topology topology = Topology::kCoupled);

enum class StabilityMethod { kEigenvalue, kRouthHurwitz, kBoth };

[[nodiscard]] std::string_view to_string(StabilityMethod method);

struct StabilityReport {
  bool stable = false;         // eigenvalue verdict
  double max_real_part = 0.0;  // rad/s
  StabilityMethod method = StabilityMethod::kBoth;
  double margin = 0.0;  // -max_real_part
  std::optional<bool> routh_stable;
  bool marginal = false;  // |max_real_part| below the marginal threshold
  bool agree = true;
};

/// Eigenvalue sign test on the scaled complex matrix, cross-checked with
/// Routh-Hurwitz on the real quadrature characteristic polynomial. A
/// vanishing Routh row leaves the eigenvalue verdict alone (method kEigenvalue).
[[nodiscard]] StabilityReport stability(const TransferMatrix& tm,
                                        double marginal_threshold = 1e-6);

/// Which detuning enters the +/- 2 D omega term of A_pm.
/// kEffective uses Delta_bar everywhere, matching the exact resolvent.
/// kPrinted mixes bare Delta into that term.
enum class DetuningConvention { kEffective, kPrinted };

struct APm {
  double plus = 0.0;
  double minus = 0.0;
};

/// A_pm = J^2 - kappa gamma - Delta_bar^2 - omega^2 +/- 2 D omega.
[[nodiscard]] APm a_pm(const SystemParams& params, const SteadyState& state, double omega,
                       DetuningConvention convention = DetuningConvention::kEffective);

enum class EvalFrequency { kMechanical, kSelfConsistent, kFixed };

struct ResponseOptions {
  EvalFrequency eval = EvalFrequency::kMechanical;
  double fixed_omega = 0.0;  // used with kFixed
  DetuningConvention convention = DetuningConvention::kEffective;
  int max_iterations = 50;
  double tolerance = 1e-8;
};

struct EffectiveMechanics {
  double omega_eff = 0.0;  // rad/s
  double gamma_eff = 0.0;  // rad/s
  double eval_freq = 0.0;  // rad/s
  int iterations = 0;
};

/// Optical spring and damping. Throws kDivergentDenominator when a
/// denominator falls below 1e-30, kNegativeStiffness when Omega_eff^2 < 0
/// and kNoConvergence when the self-consistent iteration stalls.
[[nodiscard]] EffectiveMechanics effective_mechanics(const SystemParams& params,
                                                     const SteadyState& state,
                                                     const ResponseOptions& options = {});

[[nodiscard]] double omega_eff(const SystemParams& params, const SteadyState& state,
                               double omega,
                               DetuningConvention convention = DetuningConvention::kEffective);
[[nodiscard]] double gamma_eff(const SystemParams& params, const SteadyState& state,
                               double omega,
                               DetuningConvention convention = DetuningConvention::kEffective);

/// 1 / (m [(Omega_eff^2 - omega^2) - i omega Gamma_eff]) with both rates
/// evaluated at omega.
[[nodiscard]] Complex susceptibility_analytic(
    const SystemParams& params, const SteadyState& state, double omega,
    DetuningConvention convention = DetuningConvention::kEffective);

/// dx response to a unit force on the momentum row, from the resolvent of
/// the transfer matrix. Throws kSingularResolvent.
[[nodiscard]] Complex susceptibility_numeric(const TransferMatrix& tm, double omega);

struct ChiSample {
  double omega = 0.0;
  Complex chi;
};

struct LorentzianFit {
  double peak = 0.0;   // rad/s
  double width = 0.0;  // FWHM of |chi|^2, rad/s
  /// Change of (peak, width) when every other sample is dropped.
  double interpolation_error = 0.0;
};

/// Peak by 3-point parabola on log|chi|^2 around the largest sample; FWHM
/// from the half-maximum crossings on both flanks, interpolated between the
/// bracketing samples. Throws kNoPeakInRange when the maximum is at an end.
[[nodiscard]] LorentzianFit extract_lorentzian(const std::vector<ChiSample>& samples);

/// Samples chi on `points` over [guess - 10 width, guess + 10 width], refines
/// once on a grid of the same size around the peak, then bisects the
/// half-maximum crossings on chi itself.
[[nodiscard]] LorentzianFit fit_lorentzian(const std::function<Complex(double)>& chi,
                                           double omega_guess, double width_guess,
                                           std::size_t points = 2001);

/// Brownian force spectral density (Gamma_m / 2 omega_m) omega
/// [1 + coth(hbar omega / 2 k_B T)]. Throws kInvalidArgument for omega == 0.
[[nodiscard]] double thermal_spectrum(double omega, double T, const SystemParams& params);

}  // namespace optomech
