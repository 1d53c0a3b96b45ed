#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optomech/model.hpp"
#include "optomech/response.hpp"

namespace optomech {

/// What to do at points where the linearized dynamics are unstable.
///   kRequireStable: n and beta are left undefined (status "unstable").
///   kFormulaOnly: evaluate the formula chain anyway, still reporting
///     stable = false.
enum class StabilityPolicy { kRequireStable, kFormulaOnly };

struct CoolingOptions {
  ResponseOptions response;
  /// Power of (omega_m / Omega_eff) in the phonon formula: 3 as published,
  /// 1 for the conventional form.
  int phonon_exponent = 3;
  StabilityPolicy policy = StabilityPolicy::kRequireStable;
  /// Baseline drive; same power as the compound system and Delta = -omega_m
  /// when unset.
  std::optional<double> baseline_power;
  std::optional<double> baseline_Delta;
};

struct ParamsSnapshot {
  double kappa_over_gamma = 0.0;
  double Delta_over_omega_m = 0.0;
  double P_in_W = 0.0;
  double J_over_gamma = 0.0;
};

[[nodiscard]] ParamsSnapshot snapshot(const SystemParams& params);

struct CoolingResult {
  std::optional<double> n;
  std::optional<double> n0;
  std::optional<double> beta;
  std::optional<double> omega_eff;
  std::optional<double> gamma_eff;
  double T = 0.0;
  bool stable = false;
  /// "ok", or why n/n0/beta are undefined: "unstable", "amplifying",
  /// "baseline_unstable", "baseline_amplifying" or an error code name.
  std::string status = "ok";
  ParamsSnapshot params;

  [[nodiscard]] bool defined() const { return beta.has_value(); }
};

/// (k_B T / hbar omega_m) (Gamma_m / Gamma_eff) (omega_m / Omega_eff)^exponent.
/// Throws kNotCooling unless gamma_eff > 0 and omega_eff > 0.
[[nodiscard]] double phonon_number(const SystemParams& params, double omega_eff,
                                   double gamma_eff, double T, int exponent = 3);

struct BaselineResult {
  double n0 = 0.0;
  double omega_eff = 0.0;
  double gamma_eff = 0.0;
  bool stable = false;
  SystemParams params;  // the single-cavity point that was evaluated
  SteadyState state;
};

/// Same system with the gain resonator removed (J = 0, kappa = 0), driven at
/// the baseline power and detuning. Stability is judged on the four-mode
/// (da2, da2*, dx, dp) system. Throws kUnstable under kRequireStable and
/// kNotCooling when the baseline is not damped.
[[nodiscard]] BaselineResult baseline_n0(const SystemParams& params, double T,
                                         const CoolingOptions& options = {});

/// n of the compound system, the baseline n0 and beta = n / n0. Never throws
/// for physical reasons; the status says why a quantity is missing.
[[nodiscard]] CoolingResult beta(const SystemParams& params, double T,
                                 const CoolingOptions& options = {});

enum class CoolingAxis { kKappaRatio, kDeltaRatio, kPower, kTemperature };

[[nodiscard]] std::string_view to_string(CoolingAxis axis);

struct CoolingSweepAxis {
  CoolingAxis axis = CoolingAxis::kKappaRatio;
  std::vector<double> grid;  // kappa/gamma, Delta/omega_m, W or K
};

struct CoolingRow {
  std::vector<double> axis_values;
  CoolingResult result;
};

/// One or two axes; rows in grid order with the first axis outermost. Points
/// that fail carry the error in their status and the sweep continues.
[[nodiscard]] std::vector<CoolingRow> cooling_sweep(const SystemParams& params,
                                                    const std::vector<CoolingSweepAxis>& axes,
                                                    const CoolingOptions& options = {});

/// Smallest defined n of a sweep, if any.
[[nodiscard]] std::optional<double> minimum_phonon_number(const std::vector<CoolingRow>& rows);

}  // namespace optomech
