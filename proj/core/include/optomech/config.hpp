#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optomech/cooling.hpp"
#include "optomech/model.hpp"
#include "optomech/supermodes.hpp"

namespace optomech {

/// A linear grid along a named axis: kappa_over_gamma, Delta_over_omega_m,
/// J_over_gamma, P_in_W or T_K.
struct GridSpec {
  std::string axis;
  double start = 0.0;
  double stop = 0.0;
  std::size_t points = 400;

  [[nodiscard]] std::vector<double> values() const;
};

struct SweepSpec {
  std::optional<std::string> preset;  // fig2 .. fig5
  std::vector<GridSpec> axes;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::filesystem::path output = "out";
  std::vector<std::string> formats{"csv"};
  std::size_t points = 400;
};

struct AnalysisSettings {
  CoolingOptions cooling;
  EpTolerances ep;
  AsymptoticOptions asymptotic;
  GPolicy g_policy;
  CoalescenceMode coalescence = CoalescenceMode::kPair;
  int branch = 0;
};

struct RunConfig {
  RawConfig raw;
  SweepSpec sweep;
  AnalysisSettings analysis;
  /// One line per resolved value plus warnings, in a stable order.
  std::vector<std::string> log;
};

/// Parses INI text (sections [optics] [mechanics] [drive] [environment]
/// [analysis] [sweep] [output]) and then applies `overrides`, each
/// "section.key=value" or a bare "key=value" for keys that are unique.
/// Missing keys take the published parameter set. Throws kParseError with
/// line or key context and kUnknownKey.
[[nodiscard]] RunConfig parse_config(const std::string& ini_text,
                                     const std::vector<std::string>& overrides = {});

[[nodiscard]] RunConfig parse_config_file(const std::filesystem::path& path,
                                          const std::vector<std::string>& overrides = {});

/// Every key the parser understands, as "section.key".
[[nodiscard]] std::vector<std::string> known_keys();

}  // namespace optomech
