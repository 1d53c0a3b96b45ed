#include "optomech/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "optomech/error.hpp"

namespace optomech {
namespace {

struct KeyDef {
  const char* section;
  const char* key;
};

constexpr KeyDef kKeys[] = {
    {"optics", "wavelength_m"},
    {"optics", "Q_c"},
    {"optics", "radius_m"},
    {"optics", "gamma_rad_s"},
    {"optics", "xi_rad_per_s_m"},
    {"optics", "kappa_over_gamma"},
    {"optics", "kappa_rad_s"},
    {"optics", "J_over_gamma"},
    {"optics", "J_rad_s"},
    {"mechanics", "omega_m_rad_s"},
    {"mechanics", "f_m_Hz"},
    {"mechanics", "mass_kg"},
    {"mechanics", "Q_m"},
    {"mechanics", "Gamma_m_rad_s"},
    {"drive", "P_in_W"},
    {"drive", "Delta_over_omega_m"},
    {"drive", "Delta_rad_s"},
    {"environment", "T_K"},
    {"analysis", "eval_frequency"},
    {"analysis", "detuning_convention"},
    {"analysis", "phonon_exponent"},
    {"analysis", "stability_policy"},
    {"analysis", "baseline_P_in_W"},
    {"analysis", "baseline_Delta_over_omega_m"},
    {"analysis", "ep2_tol"},
    {"analysis", "ep3_tol"},
    {"analysis", "asymptotic_form"},
    {"analysis", "root_form"},
    {"analysis", "g_policy"},
    {"analysis", "fixed_G_over_gamma"},
    {"analysis", "coalescence"},
    {"analysis", "branch"},
    {"sweep", "preset"},
    {"sweep", "axis"},
    {"sweep", "start"},
    {"sweep", "stop"},
    {"sweep", "points"},
    {"sweep", "axis2"},
    {"sweep", "start2"},
    {"sweep", "stop2"},
    {"sweep", "points2"},
    {"output", "dir"},
    {"output", "formats"},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool is_known(const std::string& full) {
  return std::any_of(std::begin(kKeys), std::end(kKeys), [&](const KeyDef& k) {
    return full == std::string(k.section) + "." + k.key;
  });
}

std::string qualify(const std::string& key) {
  if (key.find('.') != std::string::npos) {
    if (!is_known(key)) throw Error(ErrorCode::kUnknownKey, "unknown key '" + key + "'");
    return key;
  }
  std::string found;
  for (const auto& k : kKeys) {
    if (key == k.key) {
      if (!found.empty()) {
        throw Error(ErrorCode::kUnknownKey, "key '" + key + "' is ambiguous; use section.key");
      }
      found = std::string(k.section) + "." + k.key;
    }
  }
  if (found.empty()) throw Error(ErrorCode::kUnknownKey, "unknown key '" + key + "'");
  return found;
}

class Values {
 public:
  void set(const std::string& key, const std::string& value) { map_[key] = value; }

  [[nodiscard]] bool has(const std::string& key) const { return map_.count(key) != 0; }

  [[nodiscard]] std::optional<std::string> text(const std::string& key) const {
    const auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  [[nodiscard]] std::optional<double> number(const std::string& key) const {
    const auto t = text(key);
    if (!t) return std::nullopt;
    double v = 0.0;
    const char* first = t->data();
    const char* last = first + t->size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || t->empty()) {
      throw Error(ErrorCode::kParseError, "key '" + key + "': '" + *t + "' is not a number");
    }
    return v;
  }

  [[nodiscard]] std::optional<long long> integer(const std::string& key) const {
    const auto t = text(key);
    if (!t) return std::nullopt;
    long long v = 0;
    const char* first = t->data();
    const char* last = first + t->size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || t->empty()) {
      throw Error(ErrorCode::kParseError, "key '" + key + "': '" + *t + "' is not an integer");
    }
    return v;
  }

  template <typename E>
  [[nodiscard]] std::optional<E> choice(const std::string& key,
                                        std::initializer_list<std::pair<const char*, E>> options) const {
    const auto t = text(key);
    if (!t) return std::nullopt;
    std::string allowed;
    for (const auto& [name, value] : options) {
      if (*t == name) return value;
      allowed += allowed.empty() ? name : std::string("|") + name;
    }
    throw Error(ErrorCode::kParseError, "key '" + key + "': '" + *t + "' is not one of " + allowed);
  }

 private:
  std::map<std::string, std::string> map_;
};

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("?");
}

}  // namespace

std::vector<double> GridSpec::values() const {
  if (points == 0) throw Error(ErrorCode::kInvalidArgument, "grid '" + axis + "' has no points");
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = start;
    return out;
  }
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return out;
}

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& k : kKeys) out.push_back(std::string(k.section) + "." + k.key);
  return out;
}

RunConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(ini_text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(e.line()) + ": " + e.message());
  }

  Values v;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw Error(ErrorCode::kParseError, "key '" + section + "' is outside any section");
    }
    for (const auto& [key, node] : body) {
      const std::string full = section + "." + key;
      if (!is_known(full)) throw Error(ErrorCode::kUnknownKey, "unknown key '" + full + "'");
      v.set(full, trim(node.data()));
    }
  }

  RunConfig cfg;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParseError, "override '" + o + "' is not key=value");
    }
    const std::string key = qualify(trim(std::string_view(o).substr(0, eq)));
    const std::string value = trim(std::string_view(o).substr(eq + 1));
    v.set(key, value);
    cfg.sweep.overrides.emplace_back(key, value);
  }

  auto& log = cfg.log;
  auto conflict = [&](const char* a, const char* b) {
    if (v.has(a) && v.has(b)) {
      throw Error(ErrorCode::kParseError,
                  std::string("keys '") + a + "' and '" + b + "' set the same quantity");
    }
  };
  conflict("optics.kappa_over_gamma", "optics.kappa_rad_s");
  conflict("optics.J_over_gamma", "optics.J_rad_s");
  conflict("drive.Delta_over_omega_m", "drive.Delta_rad_s");
  conflict("mechanics.omega_m_rad_s", "mechanics.f_m_Hz");
  if (v.has("optics.gamma_rad_s") && v.has("optics.Q_c")) {
    log.push_back("warning: optics.gamma_rad_s takes precedence over optics.Q_c");
  }
  if (v.has("mechanics.Gamma_m_rad_s") && v.has("mechanics.Q_m")) {
    log.push_back("warning: mechanics.Gamma_m_rad_s takes precedence over mechanics.Q_m");
  }

  RawConfig raw = RawConfig::defaults();
  raw.wavelength_m = v.number("optics.wavelength_m").value_or(raw.wavelength_m);
  raw.Q_c = v.number("optics.Q_c").value_or(raw.Q_c);
  raw.radius_m = v.number("optics.radius_m").value_or(raw.radius_m);
  if (auto g = v.number("optics.gamma_rad_s")) raw.gamma = *g;
  if (auto x = v.number("optics.xi_rad_per_s_m")) raw.xi = *x;
  if (auto w = v.number("mechanics.omega_m_rad_s")) raw.omega_m = *w;
  if (auto f = v.number("mechanics.f_m_Hz")) raw.omega_m = kTwoPi * *f;
  raw.mass_kg = v.number("mechanics.mass_kg").value_or(raw.mass_kg);
  raw.Q_m = v.number("mechanics.Q_m").value_or(raw.Q_m);
  if (auto G = v.number("mechanics.Gamma_m_rad_s")) raw.Gamma_m = *G;
  raw.P_in_W = v.number("drive.P_in_W").value_or(raw.P_in_W);
  raw.T_K = v.number("environment.T_K").value_or(raw.T_K);

  // Ratios need gamma and omega_m first.
  const SystemParams base = derive_params(raw);
  raw.kappa = v.number("optics.kappa_rad_s")
                  .value_or(v.number("optics.kappa_over_gamma").value_or(1.0) * base.gamma);
  raw.J = v.number("optics.J_rad_s")
              .value_or(v.number("optics.J_over_gamma").value_or(1.0) * base.gamma);
  raw.Delta = v.number("drive.Delta_rad_s")
                  .value_or(v.number("drive.Delta_over_omega_m").value_or(-1.0) * raw.omega_m);
  const SystemParams params = derive_params(raw);
  cfg.raw = raw;

  auto& a = cfg.analysis;
  auto& co = a.cooling;
  co.response.eval = v.choice<EvalFrequency>(
                          "analysis.eval_frequency",
                          {{"mechanical", EvalFrequency::kMechanical},
                           {"self_consistent", EvalFrequency::kSelfConsistent}})
                         .value_or(EvalFrequency::kMechanical);
  co.response.convention = v.choice<DetuningConvention>(
                                "analysis.detuning_convention",
                                {{"effective", DetuningConvention::kEffective},
                                 {"printed", DetuningConvention::kPrinted}})
                               .value_or(DetuningConvention::kEffective);
  if (auto e = v.integer("analysis.phonon_exponent")) {
    if (*e != 1 && *e != 3) {
      throw Error(ErrorCode::kParseError, "key 'analysis.phonon_exponent' must be 1 or 3");
    }
    co.phonon_exponent = static_cast<int>(*e);
  }
  co.policy = v.choice<StabilityPolicy>("analysis.stability_policy",
                                        {{"require_stable", StabilityPolicy::kRequireStable},
                                         {"formula_only", StabilityPolicy::kFormulaOnly}})
                  .value_or(StabilityPolicy::kRequireStable);
  co.baseline_power = v.number("analysis.baseline_P_in_W");
  if (auto d = v.number("analysis.baseline_Delta_over_omega_m")) {
    co.baseline_Delta = *d * raw.omega_m;
  }
  a.ep.ep2 = v.number("analysis.ep2_tol").value_or(a.ep.ep2);
  a.ep.ep3 = v.number("analysis.ep3_tol").value_or(a.ep.ep3);
  a.asymptotic.form = v.choice<AsymptoticForm>("analysis.asymptotic_form",
                                               {{"perturbative", AsymptoticForm::kPerturbative},
                                                {"printed", AsymptoticForm::kPrinted}})
                          .value_or(AsymptoticForm::kPerturbative);
  a.asymptotic.root = v.choice<RootForm>("analysis.root_form",
                                         {{"coupling", RootForm::kCoupling},
                                          {"printed_gamma", RootForm::kPrintedGamma}})
                          .value_or(RootForm::kCoupling);
  const bool fixed_G =
      v.choice<bool>("analysis.g_policy", {{"self_consistent", false}, {"fixed", true}})
          .value_or(false);
  if (fixed_G) {
    a.g_policy = GPolicy::fixed(v.number("analysis.fixed_G_over_gamma").value_or(0.0) *
                                params.gamma);
  }
  a.coalescence = v.choice<CoalescenceMode>("analysis.coalescence",
                                            {{"pair", CoalescenceMode::kPair},
                                             {"triple", CoalescenceMode::kTriple}})
                      .value_or(CoalescenceMode::kPair);
  a.branch = static_cast<int>(v.integer("analysis.branch").value_or(0));

  auto& s = cfg.sweep;
  s.preset = v.text("sweep.preset");
  if (s.preset && *s.preset != "fig2" && *s.preset != "fig3" && *s.preset != "fig4" &&
      *s.preset != "fig5") {
    throw Error(ErrorCode::kParseError, "key 'sweep.preset': unknown preset '" + *s.preset + "'");
  }
  if (auto p = v.integer("sweep.points")) {
    if (*p < 1) throw Error(ErrorCode::kParseError, "key 'sweep.points' must be >= 1");
    s.points = static_cast<std::size_t>(*p);
  }
  const char* axis_names[] = {"kappa_over_gamma", "Delta_over_omega_m", "J_over_gamma", "P_in_W",
                              "T_K"};
  auto read_axis = [&](const std::string& suffix) -> std::optional<GridSpec> {
    const auto name = v.text("sweep.axis" + suffix);
    if (!name) return std::nullopt;
    if (std::find(std::begin(axis_names), std::end(axis_names), *name) == std::end(axis_names)) {
      throw Error(ErrorCode::kParseError, "key 'sweep.axis" + suffix + "': unknown axis '" + *name + "'");
    }
    GridSpec g;
    g.axis = *name;
    const auto start = v.number("sweep.start" + suffix);
    const auto stop = v.number("sweep.stop" + suffix);
    if (!start || !stop) {
      throw Error(ErrorCode::kParseError,
                  "axis '" + *name + "' needs sweep.start" + suffix + " and sweep.stop" + suffix);
    }
    g.start = *start;
    g.stop = *stop;
    const auto pts = v.integer("sweep.points" + suffix);
    if (pts && *pts < 1) {
      throw Error(ErrorCode::kParseError, "key 'sweep.points" + suffix + "' must be >= 1");
    }
    g.points = pts ? static_cast<std::size_t>(*pts) : s.points;
    return g;
  };
  if (auto g = read_axis("")) s.axes.push_back(*g);
  if (auto g = read_axis("2")) {
    if (s.axes.empty()) throw Error(ErrorCode::kParseError, "sweep.axis2 given without sweep.axis");
    s.axes.push_back(*g);
  }
  if (auto d = v.text("output.dir")) s.output = *d;
  if (auto f = v.text("output.formats")) {
    s.formats.clear();
    std::stringstream ss(*f);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item != "csv" && item != "json" && item != "svg") {
        throw Error(ErrorCode::kParseError, "key 'output.formats': unknown format '" + item + "'");
      }
      s.formats.push_back(item);
    }
  }

  auto echo = [&](const std::string& key, double value) {
    log.push_back(key + " = " + fmt(value) + (v.has(key) ? "" : " (default)"));
  };
  echo("optics.wavelength_m", raw.wavelength_m);
  echo("optics.Q_c", raw.Q_c);
  echo("optics.radius_m", raw.radius_m);
  echo("mechanics.mass_kg", raw.mass_kg);
  echo("mechanics.Q_m", raw.Q_m);
  echo("drive.P_in_W", raw.P_in_W);
  echo("environment.T_K", raw.T_K);
  log.push_back("resolved omega_c = " + fmt(params.omega_c));
  log.push_back("resolved gamma = " + fmt(params.gamma));
  log.push_back("resolved xi = " + fmt(params.xi));
  log.push_back("resolved omega_m = " + fmt(params.omega_m()));
  log.push_back("resolved Gamma_m = " + fmt(params.Gamma_m));
  log.push_back("resolved x0 = " + fmt(params.x0));
  log.push_back("resolved eta_L = " + fmt(params.eta_L));
  log.push_back("resolved kappa = " + fmt(params.kappa()) + " (kappa/gamma = " +
                fmt(params.kappa() / params.gamma) + ")");
  log.push_back("resolved J = " + fmt(params.J()) + " (J/gamma = " + fmt(params.J() / params.gamma) + ")");
  log.push_back("resolved Delta = " + fmt(params.Delta()) + " (Delta/omega_m = " +
                fmt(params.Delta() / params.omega_m()) + ")");
  for (const auto& [key, value] : s.overrides) log.push_back("override " + key + " = " + value);
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path,
                            const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

}  // namespace optomech
