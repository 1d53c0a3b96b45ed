#pragma once

#include <optional>
#include <string>
#include <vector>

namespace optomech {

/// CODATA 2018 exact values.
struct PhysicalConstants {
  static constexpr double hbar = 1.054571817e-34;  // J s
  static constexpr double k_B = 1.380649e-23;      // J/K
  static constexpr double c = 299792458.0;         // m/s
};

/// User-facing parameters. All rates are angular (rad/s).
///
/// kappa is the gain rate of resonator 1; a negative value makes that
/// resonator passive with loss |kappa|. Delta = omega_L - omega_c.
struct RawConfig {
  double wavelength_m = 1550e-9;
  double Q_c = 1e6;
  double radius_m = 20e-6;
  double omega_m = 0.0;
  double mass_kg = 1e-14;
  double Q_m = 1e3;
  double kappa = 0.0;
  double J = 0.0;
  double Delta = 0.0;
  double P_in_W = 0.0;
  double T_K = 300.0;

  // Direct rates; when set they replace the quality-factor derivations.
  std::optional<double> gamma;
  std::optional<double> Gamma_m;
  std::optional<double> xi;

  /// lambda = 1550 nm, Q_c = 1e6, R = 20 um, omega_m = 2pi x 500 MHz,
  /// m = 10 pg, Q_m = 1e3, with J = kappa = gamma, Delta = -omega_m,
  /// P_in = 1 mW and T = 300 K.
  static RawConfig defaults();
};

/// RawConfig plus the rates derived from it.
struct SystemParams {
  RawConfig raw;
  double omega_c = 0.0;  // 2 pi c / lambda
  double gamma = 0.0;    // omega_c / Q_c
  double Gamma_m = 0.0;  // omega_m / Q_m
  double xi = 0.0;       // omega_c / R, rad/(s m)
  double x0 = 0.0;       // sqrt(hbar / (2 m omega_m))
  double eta_L = 0.0;    // sqrt(2 gamma P_in / (hbar omega_c))

  // Shorthands for the fields every module reads.
  [[nodiscard]] double kappa() const { return raw.kappa; }
  [[nodiscard]] double J() const { return raw.J; }
  [[nodiscard]] double Delta() const { return raw.Delta; }
  [[nodiscard]] double omega_m() const { return raw.omega_m; }
  [[nodiscard]] double mass() const { return raw.mass_kg; }
  [[nodiscard]] double P_in() const { return raw.P_in_W; }
  [[nodiscard]] double T() const { return raw.T_K; }
};

struct Violation {
  std::string field;
  std::string message;
};

[[nodiscard]] std::vector<Violation> validate(const RawConfig& raw);

/// Throws Error(kNonPositiveInput) naming every offending field.
[[nodiscard]] SystemParams derive_params(const RawConfig& raw);

// Re-derivation helpers used by the sweep engines.
[[nodiscard]] SystemParams with_kappa(const SystemParams& p, double kappa);
[[nodiscard]] SystemParams with_J(const SystemParams& p, double J);
[[nodiscard]] SystemParams with_Delta(const SystemParams& p, double Delta);
[[nodiscard]] SystemParams with_power(const SystemParams& p, double P_in_W);
[[nodiscard]] SystemParams with_temperature(const SystemParams& p, double T_K);

}  // namespace optomech
