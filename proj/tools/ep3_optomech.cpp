// ep3-optomech <spectrum|steady-state|response|cooling|sweep|ep-locate|figure>
//   [--config FILE] [--set key=value]... [--out DIR] [--format csv,json,svg]

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "optomech/config.hpp"
#include "optomech/cooling.hpp"
#include "optomech/error.hpp"
#include "optomech/figures.hpp"
#include "optomech/response.hpp"
#include "optomech/steady_state.hpp"
#include "optomech/supermodes.hpp"
#include "optomech/table.hpp"

using namespace optomech;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> set;
  std::string out;
  std::string format;
};

RunConfig load(const Common& c) {
  auto rc = c.config.empty() ? parse_config("", c.set) : parse_config_file(c.config, c.set);
  for (const auto& line : rc.log) std::cerr << "# " << line << '\n';
  return rc;
}

std::vector<std::string> formats(const Common& c, const RunConfig& rc) {
  if (c.format.empty()) return rc.sweep.formats;
  std::vector<std::string> out;
  std::stringstream in(c.format);
  for (std::string f; std::getline(in, f, ',');) {
    if (f != "csv" && f != "json" && f != "svg") {
      throw Error(ErrorCode::kInvalidArgument, "unknown format '" + f + "'");
    }
    out.push_back(f);
  }
  return out;
}

// CSV on stdout always; files too when --out is given.
void emit(const Table& t, const std::string& stem, const Common& c, const RunConfig& rc) {
  std::cout << to_csv(t);
  if (c.out.empty()) return;
  fs::create_directories(c.out);
  for (const auto& f : formats(c, rc)) {
    if (f == "csv") write_table(t, fs::path(c.out) / (stem + ".csv"), TableFormat::kCsv);
    if (f == "json") write_table(t, fs::path(c.out) / (stem + ".json"), TableFormat::kJson);
  }
}

SteadyState solve(const SystemParams& p, const RunConfig& rc) {
  SteadyStateOptions o;
  if (rc.analysis.branch != 0) o.branch = rc.analysis.branch;
  return solve_steady_state(p, o);
}

SpectrumAxis spectrum_axis(const std::string& name) {
  if (name == "kappa_over_gamma") return SpectrumAxis::kKappa;
  if (name == "Delta_over_omega_m") return SpectrumAxis::kDelta;
  if (name == "J_over_gamma") return SpectrumAxis::kJ;
  throw Error(ErrorCode::kInvalidArgument, "axis '" + name + "' is not a spectrum axis");
}

double axis_unit(SpectrumAxis a, const SystemParams& p) {
  return a == SpectrumAxis::kDelta ? p.omega_m() : p.gamma;
}

const GridSpec& first_axis(const RunConfig& rc, const char* cmd) {
  if (rc.sweep.axes.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(cmd) + " needs sweep.axis, sweep.start and sweep.stop");
  }
  return rc.sweep.axes[0];
}

void cmd_spectrum(const Common& c) {
  const auto rc = load(c);
  const auto p = derive_params(rc.raw);
  const Complex G = resolve_G(p, rc.analysis.g_policy);
  const auto s = spectrum_exact(p, G);
  const auto ep = classify_ep(s, p, rc.analysis.ep);
  Table t;
  t.columns = {"branch", "Re_omega", "Im_omega", "Re_omega_asymptotic", "Im_omega_asymptotic",
               "ep_order"};
  std::optional<SupermodeSpectrum> asym;
  std::string why;
  try {
    asym = spectrum_asymptotic(p, G, rc.analysis.asymptotic);
  } catch (const Error& e) {
    why = std::string(to_string(e.code()));
  }
  for (auto label : {BranchLabel::kPlus, BranchLabel::kMinus, BranchLabel::kZero}) {
    const Complex w = s.at(label);
    std::vector<Cell> row{std::string(to_string(label)), w.real(), w.imag()};
    if (asym) {
      row.push_back(asym->at(label).real());
      row.push_back(asym->at(label).imag());
    } else {
      row.push_back(why);
      row.push_back(why);
    }
    row.push_back(static_cast<double>(ep.order));
    t.add_row(std::move(row));
  }
  emit(t, "spectrum", c, rc);
}

void cmd_steady_state(const Common& c) {
  const auto rc = load(c);
  const auto p = derive_params(rc.raw);
  const auto first = solve(p, rc);
  Table t;
  t.columns = {"branch", "intensity", "Re_a1s", "Im_a1s", "Re_a2s", "Im_a2s", "x_s_m",
               "Delta_bar_rad_s", "Re_G", "Im_G", "relative_residual"};
  for (int b = 0; b < first.branch_count; ++b) {
    const auto s = solve_steady_state(p, {b});
    t.add_row({static_cast<double>(b), s.intensity(), s.a1s.real(), s.a1s.imag(), s.a2s.real(),
               s.a2s.imag(), s.x_s, s.Delta_bar, s.G.real(), s.G.imag(),
               mean_field_residual(p, s).relative});
  }
  emit(t, "steady_state", c, rc);
}

void cmd_response(const Common& c, bool chi) {
  const auto rc = load(c);
  const auto base = derive_params(rc.raw);
  std::vector<SystemParams> points{base};
  if (!rc.sweep.axes.empty()) {
    points.clear();
    const auto& g = rc.sweep.axes[0];
    const auto a = spectrum_axis(g.axis);
    for (double v : g.values()) points.push_back(with_axis(base, a, v * axis_unit(a, base)));
  }
  Table t;
  t.columns = {"kappa_over_gamma", "Delta_over_omega_m", "Omega_eff", "Gamma_eff", "stable",
               "max_real_part", "status"};
  std::size_t index = 0;
  for (const auto& p : points) {
    const auto snap = snapshot(p);
    std::vector<Cell> row{snap.kappa_over_gamma, snap.Delta_over_omega_m};
    try {
      const auto s = solve(p, rc);
      const auto tm = transfer_matrix(p, s);
      const auto st = stability(tm);
      const auto m = effective_mechanics(p, s, rc.analysis.cooling.response);
      row.insert(row.end(), {m.omega_eff, m.gamma_eff, st.stable ? 1.0 : 0.0, st.max_real_part,
                             std::string("ok")});
      if (chi && !c.out.empty()) {
        Table trace;
        trace.columns = {"omega", "Re_chi", "Im_chi", "abs_chi"};
        const double w0 = m.omega_eff, dw = std::max(std::abs(m.gamma_eff), p.Gamma_m);
        for (int i = 0; i <= 2000; ++i) {
          const double w = w0 + dw * (-10.0 + 20.0 * i / 2000.0);
          const Complex x = susceptibility_numeric(tm, w);
          trace.add_row({w, x.real(), x.imag(), std::abs(x)});
        }
        fs::create_directories(c.out);
        write_table(trace, fs::path(c.out) / ("chi_" + std::to_string(index) + ".csv"),
                    TableFormat::kCsv);
      }
    } catch (const Error& e) {
      const std::string why(to_string(e.code()));
      row.insert(row.end(), {why, why, why, why, why});
    }
    t.add_row(std::move(row));
    ++index;
  }
  emit(t, "response", c, rc);
}

CoolingAxis cooling_axis(const std::string& name) {
  if (name == "kappa_over_gamma") return CoolingAxis::kKappaRatio;
  if (name == "Delta_over_omega_m") return CoolingAxis::kDeltaRatio;
  if (name == "P_in_W") return CoolingAxis::kPower;
  if (name == "T_K") return CoolingAxis::kTemperature;
  throw Error(ErrorCode::kInvalidArgument, "axis '" + name + "' is not a cooling axis");
}

void cmd_cooling(const Common& c) {
  const auto rc = load(c);
  const auto p = derive_params(rc.raw);
  std::vector<CoolingSweepAxis> axes;
  for (const auto& g : rc.sweep.axes) axes.push_back({cooling_axis(g.axis), g.values()});
  if (axes.empty()) axes.push_back({CoolingAxis::kTemperature, {p.T()}});
  const auto rows = cooling_sweep(p, axes, rc.analysis.cooling);
  Table t;
  for (const auto& a : axes) t.columns.emplace_back(to_string(a.axis));
  for (const char* col : {"Omega_eff", "Gamma_eff", "n", "n0", "beta", "stable", "status"}) {
    t.columns.emplace_back(col);
  }
  for (const auto& r : rows) {
    std::vector<Cell> row(r.axis_values.begin(), r.axis_values.end());
    const auto& res = r.result;
    for (const auto* v : {&res.omega_eff, &res.gamma_eff, &res.n, &res.n0, &res.beta}) {
      row.push_back(cell_or(*v, res.status));
    }
    row.push_back(res.stable ? 1.0 : 0.0);
    row.push_back(res.status);
    t.add_row(std::move(row));
  }
  emit(t, "cooling", c, rc);
}

void cmd_sweep(const Common& c) {
  const auto rc = load(c);
  const auto p = derive_params(rc.raw);
  const auto& g = first_axis(rc, "sweep");
  const auto a = spectrum_axis(g.axis);
  const double unit = axis_unit(a, p);
  auto grid = g.values();
  for (auto& v : grid) v *= unit;
  const auto rows = sweep_spectrum(p, a, grid, rc.analysis.g_policy, rc.analysis.ep);
  Table t;
  t.columns = {g.axis, "Re_plus", "Im_plus", "Re_minus", "Im_minus", "Re_zero", "Im_zero", "ep_order"};
  for (const auto& r : rows) {
    std::vector<Cell> row{r.axis_value / unit};
    for (const auto& w : r.spectrum.omegas) {
      row.push_back(w.real());
      row.push_back(w.imag());
    }
    row.push_back(static_cast<double>(r.ep.order));
    t.add_row(std::move(row));
  }
  emit(t, "sweep", c, rc);
}

void cmd_ep_locate(const Common& c) {
  const auto rc = load(c);
  const auto p = derive_params(rc.raw);
  const auto& g = first_axis(rc, "ep-locate");
  const auto a = spectrum_axis(g.axis);
  const double unit = axis_unit(a, p);
  LocateOptions o;
  o.mode = rc.analysis.coalescence;
  o.ep = rc.analysis.ep;
  const auto loc = locate_ep(p, a, {g.start * unit, g.stop * unit}, rc.analysis.g_policy, o);
  Table t;
  t.columns = {g.axis, "measure_over_gamma", "ep_order", "Re_plus", "Im_plus", "Re_minus",
               "Im_minus", "Re_zero", "Im_zero"};
  std::vector<Cell> row{loc.value / unit, loc.measure / p.gamma,
                        static_cast<double>(loc.classification.order)};
  for (const auto& w : loc.spectrum.omegas) {
    row.push_back(w.real());
    row.push_back(w.imag());
  }
  t.add_row(std::move(row));
  emit(t, "ep_locate", c, rc);
}

int cmd_figure(const Common& c, std::string preset) {
  const auto rc = load(c);
  if (preset.empty() && rc.sweep.preset) preset = *rc.sweep.preset;
  if (preset.empty()) throw Error(ErrorCode::kInvalidArgument, "figure needs --preset or sweep.preset");
  FigureOptions o;
  o.output = c.out.empty() ? rc.sweep.output : fs::path(c.out);
  o.formats = c.format.empty() ? std::vector<std::string>{"csv", "svg"} : formats(c, rc);
  o.points = rc.sweep.points;
  o.analysis = rc.analysis;
  o.config_log = rc.log;
  const auto out = run_figure(preset, derive_params(rc.raw), o);
  for (const auto& panel : out.panels) {
    if (panel.error) {
      std::cerr << panel.name << ": " << *panel.error << '\n';
      continue;
    }
    for (const auto& f : panel.files) std::cout << f.string() << '\n';
  }
  std::cout << out.manifest.string() << '\n';
  return out.ok() ? 0 : 1;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "INI configuration file")->check(CLI::ExistingFile);
  sub->add_option("--set", c.set, "key=value override (repeatable)");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--format", c.format, "comma-separated subset of csv,json,svg");
}

void print_error(const std::string& code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = code;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gain-loss optomechanics: supermodes, backaction and cooling"};
  app.require_subcommand(0, 1);
  Common c;
  bool chi = false;
  std::string preset;
  bool list_keys = false;
  app.add_flag("--list-keys", list_keys, "print every recognized configuration key");

  auto* spectrum = app.add_subcommand("spectrum", "supermode frequencies at one point");
  auto* steady = app.add_subcommand("steady-state", "mean-field solution, every branch");
  auto* response = app.add_subcommand("response", "optical spring, damping and stability");
  auto* cooling = app.add_subcommand("cooling", "phonon number, baseline and enhancement factor");
  auto* sweep = app.add_subcommand("sweep", "branch-tracked spectrum along sweep.axis");
  auto* locate = app.add_subcommand("ep-locate", "refine an exceptional point inside [start, stop]");
  auto* figure = app.add_subcommand("figure", "regenerate a figure preset");
  for (auto* s : {spectrum, steady, response, cooling, sweep, locate, figure}) add_common(s, c);
  response->add_flag("--chi", chi, "write a susceptibility trace per point (needs --out)");
  figure->add_option("--preset", preset, "fig2, fig3, fig4 or fig5");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("UsageError", e.what());
    return 64;
  }
  if (list_keys) {
    for (const auto& k : known_keys()) std::cout << k << '\n';
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 64;
  }

  try {
    if (*spectrum) cmd_spectrum(c);
    if (*steady) cmd_steady_state(c);
    if (*response) cmd_response(c, chi);
    if (*cooling) cmd_cooling(c);
    if (*sweep) cmd_sweep(c);
    if (*locate) cmd_ep_locate(c);
    if (*figure) return cmd_figure(c, preset);
  } catch (const Error& e) {
    print_error(std::string(to_string(e.code())), e.what());
    return 2;
  } catch (const std::exception& e) {
    print_error("InternalError", e.what());
    return 3;
  }
  return 0;
}
