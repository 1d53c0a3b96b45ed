#include "optomech/figures.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include <json.hpp>

#include "optomech/cooling.hpp"
#include "optomech/error.hpp"
#include "optomech/parallel.hpp"
#include "optomech/response.hpp"
#include "optomech/steady_state.hpp"
#include "optomech/supermodes.hpp"

namespace optomech {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Builder = std::function<Panel()>;

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

std::string label(double v) { return format_double(v); }

SystemParams pinned(const SystemParams& base, double J_over_gamma, double P_in_W) {
  RawConfig raw = base.raw;
  raw.J = J_over_gamma * base.gamma;
  raw.P_in_W = P_in_W;
  return derive_params(raw);
}

// fig2: supermode spectrum against kappa/gamma at fixed detuning.
Panel spectrum_panel(const std::string& name, const SystemParams& base, double Delta_ratio,
                     bool imaginary, const FigureOptions& opt) {
  const SystemParams p = with_Delta(pinned(base, 1.0, 1e-3), Delta_ratio * base.omega_m());
  const auto ratios = linspace(0.0, 2.0, opt.points);
  std::vector<double> grid;
  for (double r : ratios) grid.push_back(r * p.gamma);
  const auto rows = sweep_spectrum(p, SpectrumAxis::kKappa, grid, opt.analysis.g_policy,
                                   opt.analysis.ep);

  Panel panel;
  panel.name = name;
  panel.table.columns = {"kappa_over_gamma", "Re_plus_over_gamma",  "Im_plus_over_gamma",
                         "Re_minus_over_gamma", "Im_minus_over_gamma", "Re_zero_over_gamma",
                         "Im_zero_over_gamma", "ep_order"};
  std::array<Series, 3> series{Series{"omega_+", {}, {}}, Series{"omega_-", {}, {}},
                               Series{"omega_0", {}, {}}};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<Cell> row{ratios[i]};
    for (std::size_t k = 0; k < 3; ++k) {
      const Complex w = rows[i].spectrum.omegas[k] / p.gamma;
      row.emplace_back(w.real());
      row.emplace_back(w.imag());
      series[k].x.push_back(ratios[i]);
      series[k].y.push_back(imaginary ? w.imag() : w.real());
    }
    row.emplace_back(static_cast<double>(rows[i].ep.order));
    panel.table.add_row(std::move(row));
  }
  panel.plot.title = "Delta/omega_m = " + label(Delta_ratio);
  panel.plot.x_label = "kappa/gamma";
  panel.plot.y_label = imaginary ? "Im(omega)/gamma" : "Re(omega)/gamma";
  panel.plot.series.assign(series.begin(), series.end());
  return panel;
}

struct MechPoint {
  double omega_eff = kNaN;
  double gamma_eff = kNaN;
  bool stable = false;
  std::string status = "ok";
};

MechPoint mechanics_point(const SystemParams& p, Topology topology,
                          const ResponseOptions& options) {
  MechPoint m;
  try {
    const auto st = solve_steady_state(p);
    m.stable = stability(transfer_matrix(p, st, topology)).stable;
    const auto e = effective_mechanics(p, st, options);
    m.omega_eff = e.omega_eff;
    m.gamma_eff = e.gamma_eff;
  } catch (const Error& e) {
    m.status = std::string(to_string(e.code()));
  }
  return m;
}

// fig3: Omega_eff / omega_m or Gamma_eff / Gamma_m for P_in in {0.1, 1} mW.
Panel mechanics_panel(const std::string& name, const SystemParams& base, bool single_cavity,
                      double x_lo, double x_hi, bool frequency, const FigureOptions& opt) {
  const std::vector<double> powers{1e-4, 1e-3};
  const auto xs = linspace(x_lo, x_hi, opt.points);
  const std::string x_name = single_cavity ? "Delta_over_omega_m" : "kappa_over_gamma";

  Panel panel;
  panel.name = name;
  panel.table.columns = {"P_in_W", x_name, "Omega_eff_over_omega_m", "Gamma_eff_over_Gamma_m",
                         "stable", "status"};
  for (double P : powers) {
    std::vector<MechPoint> pts(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
      RawConfig raw = base.raw;
      raw.P_in_W = P;
      raw.J = single_cavity ? 0.0 : base.gamma;
      if (single_cavity) {
        raw.kappa = 0.0;
        raw.Delta = xs[i] * base.omega_m();
      } else {
        raw.kappa = xs[i] * base.gamma;
        raw.Delta = -base.omega_m();
      }
      pts[i] = mechanics_point(derive_params(raw),
                               single_cavity ? Topology::kSingleCavity : Topology::kCoupled,
                               opt.analysis.cooling.response);
    });
    Series s{"P_in = " + label(P * 1e3) + " mW", {}, {}};
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto& m = pts[i];
      const double om = m.omega_eff / base.omega_m();
      const double gm = m.gamma_eff / base.Gamma_m;
      panel.table.add_row({P, xs[i], cell_or(om, m.status), cell_or(gm, m.status),
                           m.stable ? 1.0 : 0.0, m.status});
      s.x.push_back(xs[i]);
      s.y.push_back(frequency ? om : gm);
    }
    panel.plot.series.push_back(std::move(s));
  }
  const char* topo = single_cavity ? "single passive resonator"
                                   : (x_hi <= 0.0 ? "passive-passive" : "active-passive");
  panel.plot.title = std::string(topo) + ", J/gamma = " + (single_cavity ? "0" : "1");
  panel.plot.x_label = single_cavity ? "Delta/omega_m" : "kappa/gamma";
  panel.plot.y_label = frequency ? "Omega_eff/omega_m" : "Gamma_eff/Gamma_m";
  return panel;
}

CoolingOptions formula_only(const FigureOptions& opt) {
  CoolingOptions c = opt.analysis.cooling;
  c.policy = StabilityPolicy::kFormulaOnly;
  return c;
}

// fig4 a-c: beta against Delta/omega_m for several kappa/gamma.
Panel beta_panel(const std::string& name, const SystemParams& base, double P_in_W,
                 const std::vector<double>& kappa_ratios, const FigureOptions& opt) {
  const auto Deltas = linspace(-2.0, 0.0, opt.points);
  const auto cooling = formula_only(opt);
  Panel panel;
  panel.name = name;
  panel.table.columns = {"kappa_over_gamma", "Delta_over_omega_m", "Omega_eff", "Gamma_eff",
                         "n", "n0", "beta", "stable", "status"};
  for (double k : kappa_ratios) {
    const SystemParams p = with_kappa(pinned(base, 1.0, P_in_W), k * base.gamma);
    const auto rows = cooling_sweep(p, {{CoolingAxis::kDeltaRatio, Deltas}}, cooling);
    Series s{"kappa/gamma = " + label(k), {}, {}};
    for (const auto& row : rows) {
      const auto& r = row.result;
      panel.table.add_row({k, row.axis_values.at(0), cell_or(r.omega_eff, r.status),
                           cell_or(r.gamma_eff, r.status), cell_or(r.n, r.status),
                           cell_or(r.n0, r.status), cell_or(r.beta, r.status),
                           r.stable ? 1.0 : 0.0, r.status});
      s.x.push_back(row.axis_values.at(0));
      s.y.push_back(r.beta.value_or(kNaN));
    }
    panel.plot.series.push_back(std::move(s));
  }
  panel.plot.title = "P_in = " + label(P_in_W * 1e3) + " mW, J/gamma = 1";
  panel.plot.x_label = "Delta/omega_m";
  panel.plot.y_label = "beta = n/n0";
  panel.plot.log_y = true;
  return panel;
}

// n against kappa/gamma near balance for T in {300, 20, 0.65} K.
Panel phonon_panel(const std::string& name, const SystemParams& base, double P_in_W,
                   const FigureOptions& opt) {
  const auto ks = linspace(1.001, 1.1, opt.points);
  const auto cooling = formula_only(opt);
  Panel panel;
  panel.name = name;
  panel.table.columns = {"T_K", "kappa_over_gamma", "n", "n_min", "stable", "status"};
  for (double T : {300.0, 20.0, 0.65}) {
    const SystemParams p =
        with_temperature(with_Delta(pinned(base, 1.0, P_in_W), -base.omega_m()), T);
    const auto rows = cooling_sweep(p, {{CoolingAxis::kKappaRatio, ks}}, cooling);
    const auto n_min = minimum_phonon_number(rows);
    Series s{"T = " + label(T) + " K", {}, {}};
    for (const auto& row : rows) {
      const auto& r = row.result;
      panel.table.add_row({T, row.axis_values.at(0), cell_or(r.n, r.status),
                           cell_or(n_min, "undefined"), r.stable ? 1.0 : 0.0, r.status});
      s.x.push_back(row.axis_values.at(0));
      s.y.push_back(r.n.value_or(kNaN));
    }
    panel.plot.series.push_back(std::move(s));
  }
  panel.plot.title = "P_in = " + label(P_in_W * 1e3) + " mW, Delta = -omega_m, J/gamma = 1";
  panel.plot.x_label = "kappa/gamma";
  panel.plot.y_label = "n";
  panel.plot.log_y = true;
  return panel;
}

// fig5a: single-cavity n0 against Delta/omega_m at several powers, 300 K.
Panel baseline_panel(const std::string& name, const SystemParams& base, const FigureOptions& opt) {
  const auto Deltas = linspace(-2.0, 0.0, opt.points);
  CoolingOptions cooling = formula_only(opt);
  Panel panel;
  panel.name = name;
  panel.table.columns = {"P_in_W", "Delta_over_omega_m", "n0", "stable", "status"};
  for (double P : {1e-5, 1e-4, 1e-3}) {
    std::vector<std::pair<double, std::string>> n0(Deltas.size());
    std::vector<bool> stable(Deltas.size());
    parallel_for(Deltas.size(), [&](std::size_t i) {
      CoolingOptions c = cooling;
      c.baseline_power = P;
      c.baseline_Delta = Deltas[i] * base.omega_m();
      try {
        const auto b = baseline_n0(base, 300.0, c);
        n0[i] = {b.n0, "ok"};
        stable[i] = b.stable;
      } catch (const Error& e) {
        n0[i] = {kNaN, std::string(to_string(e.code()))};
      }
    });
    Series s{"P_in = " + label(P * 1e3) + " mW", {}, {}};
    for (std::size_t i = 0; i < Deltas.size(); ++i) {
      panel.table.add_row({P, Deltas[i], cell_or(n0[i].first, n0[i].second),
                           stable[i] ? 1.0 : 0.0, n0[i].second});
      s.x.push_back(Deltas[i]);
      s.y.push_back(n0[i].first);
    }
    panel.plot.series.push_back(std::move(s));
  }
  panel.plot.title = "single passive resonator, T = 300 K";
  panel.plot.x_label = "Delta/omega_m";
  panel.plot.y_label = "n0";
  panel.plot.log_y = true;
  return panel;
}

// fig5b: compound-system n against P_in for several temperatures.
Panel power_panel(const std::string& name, const SystemParams& base, const FigureOptions& opt) {
  const auto powers = linspace(1e-5, 1e-3, opt.points);
  const auto cooling = formula_only(opt);
  Panel panel;
  panel.name = name;
  panel.table.columns = {"T_K", "P_in_W", "n", "stable", "status"};
  for (double T : {300.0, 20.0, 0.65}) {
    RawConfig raw = base.raw;
    raw.J = base.gamma;
    raw.kappa = 1.001 * base.gamma;
    raw.Delta = -base.omega_m();
    raw.T_K = T;
    const auto rows = cooling_sweep(derive_params(raw), {{CoolingAxis::kPower, powers}}, cooling);
    Series s{"T = " + label(T) + " K", {}, {}};
    for (const auto& row : rows) {
      const auto& r = row.result;
      panel.table.add_row(
          {T, row.axis_values.at(0), cell_or(r.n, r.status), r.stable ? 1.0 : 0.0, r.status});
      s.x.push_back(row.axis_values.at(0) * 1e3);
      s.y.push_back(r.n.value_or(kNaN));
    }
    panel.plot.series.push_back(std::move(s));
  }
  panel.plot.title = "kappa/gamma = 1.001, Delta = -omega_m, J/gamma = 1";
  panel.plot.x_label = "P_in (mW)";
  panel.plot.y_label = "n";
  panel.plot.log_y = true;
  return panel;
}

std::vector<std::pair<std::string, Builder>> builders(std::string_view preset,
                                                      const SystemParams& base,
                                                      const FigureOptions& opt) {
  std::vector<std::pair<std::string, Builder>> out;
  auto add = [&](std::string name, Builder b) { out.emplace_back(std::move(name), std::move(b)); };
  if (preset == "fig2") {
    const struct {
      const char* name;
      double Delta;
      bool imag;
    } panels[] = {{"fig2a", -0.5, false}, {"fig2b", -0.5, true},  {"fig2c", -1.0, false},
                  {"fig2d", -1.0, true},  {"fig2e", -1.02, true}, {"fig2f", -1.5, true}};
    for (const auto& p : panels) {
      add(p.name, [=, &base, &opt] { return spectrum_panel(p.name, base, p.Delta, p.imag, opt); });
    }
  } else if (preset == "fig3") {
    add("fig3a", [&] { return mechanics_panel("fig3a", base, true, -2.0, 0.0, true, opt); });
    add("fig3b", [&] { return mechanics_panel("fig3b", base, true, -2.0, 0.0, false, opt); });
    add("fig3c", [&] { return mechanics_panel("fig3c", base, false, -2.0, 0.0, true, opt); });
    add("fig3d", [&] { return mechanics_panel("fig3d", base, false, -2.0, 0.0, false, opt); });
    add("fig3e", [&] { return mechanics_panel("fig3e", base, false, 0.0, 2.0, true, opt); });
    add("fig3f", [&] { return mechanics_panel("fig3f", base, false, 0.0, 2.0, false, opt); });
  } else if (preset == "fig4") {
    add("fig4a", [&] { return beta_panel("fig4a", base, 1e-4, {-1.0, -0.5, 0.5}, opt); });
    add("fig4b", [&] { return beta_panel("fig4b", base, 1e-4, {1.001, 1.01, 1.1, 2.0}, opt); });
    add("fig4c", [&] { return beta_panel("fig4c", base, 1e-3, {1.001, 1.01, 1.1, 2.0}, opt); });
    add("fig4d", [&] { return phonon_panel("fig4d", base, 1.2e-4, opt); });
  } else if (preset == "fig5") {
    add("fig5a", [&] { return baseline_panel("fig5a", base, opt); });
    add("fig5b", [&] { return power_panel("fig5b", base, opt); });
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown figure preset '" + std::string(preset) + "'");
  }
  return out;
}

}  // namespace

bool FigureOutput::ok() const {
  for (const auto& p : panels) {
    if (p.error) return false;
  }
  return true;
}

std::vector<std::string> figure_presets() { return {"fig2", "fig3", "fig4", "fig5"}; }

std::vector<Panel> build_figure(std::string_view preset, const SystemParams& base,
                                const FigureOptions& options) {
  std::vector<Panel> out;
  for (auto& [name, build] : builders(preset, base, options)) out.push_back(build());
  return out;
}

FigureOutput run_figure(std::string_view preset, const SystemParams& base,
                        const FigureOptions& options) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(options.output, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "cannot create '" + options.output.string() + "': " + ec.message());
  }

  FigureOutput out;
  nlohmann::ordered_json manifest;
  manifest["preset"] = std::string(preset);
  manifest["points"] = options.points;
  manifest["formats"] = options.formats;
  manifest["parameters"] = options.config_log;
  manifest["panels"] = nlohmann::ordered_json::array();

  for (auto& [name, build] : builders(preset, base, options)) {
    PanelOutput po;
    po.name = name;
    try {
      const Panel panel = build();
      for (const auto& f : options.formats) {
        const fs::path path = options.output / (name + "." + f);
        if (f == "csv") {
          write_table(panel.table, path, TableFormat::kCsv);
        } else if (f == "json") {
          write_table(panel.table, path, TableFormat::kJson);
        } else if (f == "svg") {
          write_text(path, render_svg(panel.plot));
        } else {
          throw Error(ErrorCode::kInvalidArgument, "unknown format '" + f + "'");
        }
        po.files.push_back(path);
      }
    } catch (const Error& e) {
      po.error = std::string(to_string(e.code())) + ": " + e.what();
    }
    nlohmann::ordered_json entry;
    entry["name"] = po.name;
    entry["files"] = nlohmann::ordered_json::array();
    for (const auto& f : po.files) entry["files"].push_back(f.filename().string());
    if (po.error) entry["error"] = *po.error;
    manifest["panels"].push_back(std::move(entry));
    out.panels.push_back(std::move(po));
  }

  out.manifest = options.output / "manifest.json";
  write_text(out.manifest, manifest.dump(2) + "\n");
  return out;
}

}  // namespace optomech
