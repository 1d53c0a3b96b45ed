#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "optomech/config.hpp"
#include "optomech/model.hpp"
#include "optomech/svg_plot.hpp"
#include "optomech/table.hpp"

namespace optomech {

struct FigureOptions {
  std::filesystem::path output = "out";
  std::vector<std::string> formats{"csv", "svg"};
  std::size_t points = 400;
  AnalysisSettings analysis;
  /// Resolved-parameter lines recorded in the manifest.
  std::vector<std::string> config_log;
};

struct Panel {
  std::string name;  // e.g. "fig3e"
  Table table;
  PlotSpec plot;
};

struct PanelOutput {
  std::string name;
  std::vector<std::filesystem::path> files;
  std::optional<std::string> error;
};

struct FigureOutput {
  std::vector<PanelOutput> panels;
  std::filesystem::path manifest;

  [[nodiscard]] bool ok() const;
};

[[nodiscard]] std::vector<std::string> figure_presets();

/// Panels of a preset, computed but not written. The preset pins its own
/// J, P_in, T and detuning values on top of `base`; the cooling panels use
/// StabilityPolicy::kFormulaOnly and report stability in a column.
/// Throws kInvalidArgument for an unknown preset.
[[nodiscard]] std::vector<Panel> build_figure(std::string_view preset, const SystemParams& base,
                                              const FigureOptions& options);

/// Builds and writes each panel in the requested formats plus manifest.json.
/// A panel that fails is recorded in the manifest and the others still run.
FigureOutput run_figure(std::string_view preset, const SystemParams& base,
                        const FigureOptions& options);

}  // namespace optomech
