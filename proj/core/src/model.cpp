#include "optomech/model.hpp"

#include <cmath>

#include "optomech/error.hpp"
#include "optomech/numeric_types.hpp"

namespace optomech {

RawConfig RawConfig::defaults() {
  RawConfig raw;
  raw.wavelength_m = 1550e-9;
  raw.Q_c = 1e6;
  raw.radius_m = 20e-6;
  raw.omega_m = kTwoPi * 500e6;
  raw.mass_kg = 1e-14;
  raw.Q_m = 1e3;
  const double gamma = kTwoPi * PhysicalConstants::c / raw.wavelength_m / raw.Q_c;
  raw.kappa = gamma;
  raw.J = gamma;
  raw.Delta = -raw.omega_m;
  raw.P_in_W = 1e-3;
  raw.T_K = 300.0;
  return raw;
}

std::vector<Violation> validate(const RawConfig& raw) {
  std::vector<Violation> out;
  auto positive = [&](const char* name, double v) {
    if (!std::isfinite(v)) {
      out.push_back({name, std::string(name) + " must be finite"});
    } else if (!(v > 0.0)) {
      out.push_back({name, std::string(name) + " must be > 0"});
    }
  };
  auto nonnegative = [&](const char* name, double v) {
    if (!std::isfinite(v)) {
      out.push_back({name, std::string(name) + " must be finite"});
    } else if (v < 0.0) {
      out.push_back({name, std::string(name) + " must be >= 0"});
    }
  };
  auto finite = [&](const char* name, double v) {
    if (!std::isfinite(v)) out.push_back({name, std::string(name) + " must be finite"});
  };

  positive("wavelength_m", raw.wavelength_m);
  positive("Q_c", raw.Q_c);
  positive("radius_m", raw.radius_m);
  positive("omega_m", raw.omega_m);
  positive("mass_kg", raw.mass_kg);
  positive("Q_m", raw.Q_m);
  nonnegative("P_in_W", raw.P_in_W);
  nonnegative("T_K", raw.T_K);
  nonnegative("J", raw.J);
  finite("kappa", raw.kappa);
  finite("Delta", raw.Delta);
  if (raw.gamma) positive("gamma", *raw.gamma);
  if (raw.Gamma_m) positive("Gamma_m", *raw.Gamma_m);
  if (raw.xi) positive("xi", *raw.xi);
  return out;
}

SystemParams derive_params(const RawConfig& raw) {
  const auto violations = validate(raw);
  if (!violations.empty()) {
    std::string msg = "invalid parameters:";
    for (const auto& v : violations) msg += " " + v.message + ";";
    throw Error(ErrorCode::kNonPositiveInput, msg);
  }
  constexpr double hbar = PhysicalConstants::hbar;
  SystemParams p;
  p.raw = raw;
  p.omega_c = kTwoPi * PhysicalConstants::c / raw.wavelength_m;
  p.gamma = raw.gamma.value_or(p.omega_c / raw.Q_c);
  p.Gamma_m = raw.Gamma_m.value_or(raw.omega_m / raw.Q_m);
  p.xi = raw.xi.value_or(p.omega_c / raw.radius_m);
  p.x0 = std::sqrt(hbar / (2.0 * raw.mass_kg * raw.omega_m));
  p.eta_L = std::sqrt(2.0 * p.gamma * raw.P_in_W / (hbar * p.omega_c));
  return p;
}

SystemParams with_kappa(const SystemParams& p, double kappa) {
  RawConfig raw = p.raw;
  raw.kappa = kappa;
  return derive_params(raw);
}

SystemParams with_J(const SystemParams& p, double J) {
  RawConfig raw = p.raw;
  raw.J = J;
  return derive_params(raw);
}

SystemParams with_Delta(const SystemParams& p, double Delta) {
  RawConfig raw = p.raw;
  raw.Delta = Delta;
  return derive_params(raw);
}

SystemParams with_power(const SystemParams& p, double P_in_W) {
  RawConfig raw = p.raw;
  raw.P_in_W = P_in_W;
  return derive_params(raw);
}

SystemParams with_temperature(const SystemParams& p, double T_K) {
  RawConfig raw = p.raw;
  raw.T_K = T_K;
  return derive_params(raw);
}

}  // namespace optomech
