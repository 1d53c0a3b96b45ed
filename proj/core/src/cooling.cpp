#include "optomech/cooling.hpp"

#include <cmath>

#include "optomech/error.hpp"
#include "optomech/parallel.hpp"

namespace optomech {

ParamsSnapshot snapshot(const SystemParams& p) {
  return {p.kappa() / p.gamma, p.Delta() / p.omega_m(), p.P_in(), p.J() / p.gamma};
}

double phonon_number(const SystemParams& p, double omega_eff, double gamma_eff, double T,
                     int exponent) {
  if (!(gamma_eff > 0.0)) {
    throw Error(ErrorCode::kNotCooling, "Gamma_eff = " + std::to_string(gamma_eff) + " <= 0");
  }
  if (!(omega_eff > 0.0)) {
    throw Error(ErrorCode::kNotCooling, "Omega_eff = " + std::to_string(omega_eff) + " <= 0");
  }
  const double wm = p.omega_m();
  const double thermal = PhysicalConstants::k_B * T / (PhysicalConstants::hbar * wm);
  return thermal * (p.Gamma_m / gamma_eff) * std::pow(wm / omega_eff, exponent);
}

BaselineResult baseline_n0(const SystemParams& params, double T, const CoolingOptions& options) {
  RawConfig raw = params.raw;
  raw.J = 0.0;
  raw.kappa = 0.0;
  raw.Delta = options.baseline_Delta.value_or(-params.omega_m());
  raw.P_in_W = options.baseline_power.value_or(params.P_in());

  BaselineResult out;
  out.params = derive_params(raw);
  out.state = solve_steady_state(out.params);
  const auto tm = transfer_matrix(out.params, out.state, Topology::kSingleCavity);
  out.stable = stability(tm).stable;
  if (!out.stable && options.policy == StabilityPolicy::kRequireStable) {
    throw Error(ErrorCode::kUnstable, "single-cavity baseline is unstable");
  }
  const auto mech = effective_mechanics(out.params, out.state, options.response);
  out.omega_eff = mech.omega_eff;
  out.gamma_eff = mech.gamma_eff;
  out.n0 = phonon_number(out.params, mech.omega_eff, mech.gamma_eff, T, options.phonon_exponent);
  return out;
}

CoolingResult beta(const SystemParams& params, double T, const CoolingOptions& options) {
  CoolingResult r;
  r.T = T;
  r.params = snapshot(params);
  try {
    const auto state = solve_steady_state(params);
    r.stable = stability(transfer_matrix(params, state)).stable;
    const auto mech = effective_mechanics(params, state, options.response);
    r.omega_eff = mech.omega_eff;
    r.gamma_eff = mech.gamma_eff;
    if (!r.stable && options.policy == StabilityPolicy::kRequireStable) {
      r.status = "unstable";
    } else if (!(mech.gamma_eff > 0.0)) {
      r.status = "amplifying";
    } else {
      r.n = phonon_number(params, mech.omega_eff, mech.gamma_eff, T, options.phonon_exponent);
    }
  } catch (const Error& e) {
    r.status = std::string(to_string(e.code()));
    return r;
  }

  try {
    r.n0 = baseline_n0(params, T, options).n0;
  } catch (const Error& e) {
    if (r.status == "ok") {
      if (e.code() == ErrorCode::kUnstable) {
        r.status = "baseline_unstable";
      } else if (e.code() == ErrorCode::kNotCooling) {
        r.status = "baseline_amplifying";
      } else {
        r.status = std::string(to_string(e.code()));
      }
    }
  }
  if (r.n && r.n0) r.beta = *r.n / *r.n0;
  return r;
}

std::string_view to_string(CoolingAxis axis) {
  switch (axis) {
    case CoolingAxis::kKappaRatio: return "kappa_over_gamma";
    case CoolingAxis::kDeltaRatio: return "Delta_over_omega_m";
    case CoolingAxis::kPower: return "P_in_W";
    case CoolingAxis::kTemperature: return "T_K";
  }
  return "?";
}

std::vector<CoolingRow> cooling_sweep(const SystemParams& params,
                                      const std::vector<CoolingSweepAxis>& axes,
                                      const CoolingOptions& options) {
  if (axes.empty() || axes.size() > 2) {
    throw Error(ErrorCode::kInvalidArgument, "cooling sweep takes one or two axes");
  }
  for (const auto& a : axes) {
    if (a.grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty sweep grid");
  }
  const std::size_t inner = axes.size() == 2 ? axes[1].grid.size() : 1;
  const std::size_t total = axes[0].grid.size() * inner;

  std::vector<CoolingRow> rows(total);
  parallel_for(total, [&](std::size_t idx) {
    CoolingRow& row = rows[idx];
    SystemParams p = params;
    double T = params.T();
    const std::size_t ij[2] = {idx / inner, idx % inner};
    try {
      for (std::size_t a = 0; a < axes.size(); ++a) {
        const double v = axes[a].grid[ij[a]];
        row.axis_values.push_back(v);
        switch (axes[a].axis) {
          case CoolingAxis::kKappaRatio: p = with_kappa(p, v * p.gamma); break;
          case CoolingAxis::kDeltaRatio: p = with_Delta(p, v * p.omega_m()); break;
          case CoolingAxis::kPower: p = with_power(p, v); break;
          case CoolingAxis::kTemperature:
            p = with_temperature(p, v);
            T = v;
            break;
        }
      }
      row.result = beta(p, T, options);
    } catch (const Error& e) {
      row.result.T = T;
      row.result.params = snapshot(p);
      row.result.status = std::string(to_string(e.code()));
    }
  });
  return rows;
}

std::optional<double> minimum_phonon_number(const std::vector<CoolingRow>& rows) {
  std::optional<double> best;
  for (const auto& r : rows) {
    if (r.result.n && (!best || *r.result.n < *best)) best = r.result.n;
  }
  return best;
}

}  // namespace optomech
