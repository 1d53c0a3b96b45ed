#include <cmath>
#include <cstring>
#include <functional>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "optomech/config.hpp"
#include "optomech/error.hpp"
#include "optomech/figures.hpp"
#include "optomech/svg_plot.hpp"
#include "optomech/table.hpp"
#include "oracles.hpp"

namespace optomech {
namespace {

namespace fs = std::filesystem;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kInvalidArgument;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("optomech_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Config, EmptyGivesDefaults) {
  const auto rc = parse_config("");
  const auto p = derive_params(rc.raw);
  const auto d = derive_params(RawConfig::defaults());
  EXPECT_NEAR(p.gamma, d.gamma, 1e-12 * d.gamma);
  EXPECT_NEAR(p.kappa(), d.gamma, 1e-12 * d.gamma);
  EXPECT_NEAR(p.J(), d.gamma, 1e-12 * d.gamma);
  EXPECT_EQ(p.Delta(), -p.omega_m());
  EXPECT_EQ(p.P_in(), 1e-3);
  EXPECT_EQ(p.T(), 300.0);
  EXPECT_FALSE(rc.log.empty());
}

TEST(Config, RatioOverrideAppliesAfterGamma) {
  const auto rc = parse_config("[optics]\nkappa_over_gamma = 1.2\nQ_c = 2e6\n");
  const auto p = derive_params(rc.raw);
  EXPECT_NEAR(p.kappa(), 1.2 * p.gamma, 1e-12 * p.gamma);
  EXPECT_NEAR(p.gamma, p.omega_c / 2e6, 1e-12 * p.gamma);

  const auto flag = parse_config("", {"kappa_over_gamma=1.2"});
  const auto q = derive_params(flag.raw);
  EXPECT_NEAR(q.kappa(), 1.2 * q.gamma, 1e-12 * q.gamma);
  const auto qualified = parse_config("", {"optics.kappa_over_gamma=0.5", "drive.P_in_W=1e-4"});
  EXPECT_NEAR(qualified.raw.kappa, 0.5 * q.gamma, 1e-12 * q.gamma);
  EXPECT_EQ(qualified.raw.P_in_W, 1e-4);
}

TEST(Config, Errors) {
  EXPECT_EQ(code_of([] { (void)parse_config("[drive]\nP_in_W = lots\n"); }), ErrorCode::kParseError);
  try {
    (void)parse_config("[drive]\nP_in_W = 1mW\n");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("P_in_W"), std::string::npos);
  }
  EXPECT_EQ(code_of([] { (void)parse_config("[optics]\nflux_capacitor = 1\n"); }),
            ErrorCode::kUnknownKey);
  EXPECT_EQ(code_of([] { (void)parse_config("", {"nonsense=3"}); }), ErrorCode::kUnknownKey);
  EXPECT_EQ(code_of([] { (void)parse_config("", {"kappa_over_gamma"}); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] {
              (void)parse_config("[optics]\nkappa_over_gamma = 1\nkappa_rad_s = 1e9\n");
            }),
            ErrorCode::kParseError);
}

TEST(Config, KnownKeysAreQualified) {
  for (const auto& k : known_keys()) EXPECT_NE(k.find('.'), std::string::npos) << k;
}

TEST(Config, SweepSection) {
  const auto rc = parse_config(
      "[sweep]\naxis = kappa_over_gamma\nstart = 0\nstop = 2\npoints = 5\n[output]\nformats = csv,json\n");
  ASSERT_EQ(rc.sweep.axes.size(), 1u);
  EXPECT_EQ(rc.sweep.axes[0].values(), (std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0}));
  EXPECT_EQ(rc.sweep.formats, (std::vector<std::string>{"csv", "json"}));
}

TEST(Table, CsvRoundTripIsBitIdentical) {
  auto gen = oracle::rng(71);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  Table t;
  t.columns = {"a", "b, with comma", "status"};
  for (int i = 0; i < 500; ++i) {
    t.add_row({mant(gen) * std::pow(10.0, ex(gen)), 1.0 / (i + 3.0), std::string(i % 2 ? "ok" : "\"q\"")});
  }
  t.add_row({5e-324, -0.0, std::string("1.5")});
  const auto back = parse_csv(to_csv(t));
  ASSERT_EQ(back.columns, t.columns);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      if (const auto* d = std::get_if<double>(&t.rows[r][c])) {
        const auto* e = std::get_if<double>(&back.rows[r][c]);
        ASSERT_NE(e, nullptr);
        EXPECT_EQ(std::memcmp(d, e, sizeof(double)), 0);
      } else {
        EXPECT_EQ(back.rows[r][c], t.rows[r][c]);
      }
    }
  }
}

TEST(Table, EmptyIsHeaderOnly) {
  Table t;
  t.columns = {"x", "y"};
  EXPECT_EQ(to_csv(t), "x,y\n");
  EXPECT_EQ(code_of([&] { t.add_row({1.0}); }), ErrorCode::kInvalidArgument);
}

TEST(Table, NoNaNInOutput) {
  Table t;
  t.columns = {"beta", "n"};
  t.add_row({cell_or(std::nullopt, "unstable"), std::nan("")});
  t.add_row({cell_or(2.0, "unused"), std::numeric_limits<double>::infinity()});
  const auto csv = to_csv(t);
  const auto json = to_json(t);
  for (const auto& s : {csv, json}) {
    EXPECT_EQ(s.find("nan"), std::string::npos);
    EXPECT_EQ(s.find("NaN"), std::string::npos);
    EXPECT_EQ(s.find("inf"), std::string::npos);
  }
  EXPECT_NE(csv.find("unstable"), std::string::npos);
}

TEST(Table, WriteFailureIsIoError) {
  Table t;
  t.columns = {"x"};
  EXPECT_EQ(code_of([&] { write_table(t, "/nonexistent_dir/x/y.csv", TableFormat::kCsv); }),
            ErrorCode::kIoError);
}

TEST(Svg, RendersLabelsAndSeries) {
  PlotSpec spec;
  spec.title = "test";
  spec.x_label = "κ/γ";
  spec.y_label = "β";
  spec.log_y = true;
  spec.series.push_back({"a", {0.0, 1.0, 2.0}, {1.0, 0.01, std::nan("")}});
  spec.series.push_back({"b", {0.0, 1.0, 2.0}, {10.0, -1.0, 100.0}});
  const auto svg = render_svg(spec);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("κ/γ"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
}

TEST(Figures, PresetsAndPanelCounts) {
  EXPECT_EQ(figure_presets(), (std::vector<std::string>{"fig2", "fig3", "fig4", "fig5"}));
  FigureOptions o;
  o.points = 9;
  const auto base = derive_params(RawConfig::defaults());
  EXPECT_EQ(build_figure("fig2", base, o).size(), 6u);
  EXPECT_EQ(build_figure("fig4", base, o).size(), 4u);
  EXPECT_EQ(code_of([&] { (void)build_figure("fig9", base, o); }), ErrorCode::kInvalidArgument);
}

TEST(Figures, RerunIsByteIdentical) {
  FigureOptions o;
  o.points = 7;
  o.formats = {"csv", "json", "svg"};
  const auto base = derive_params(RawConfig::defaults());
  for (const std::string preset : {"fig2", "fig3", "fig4", "fig5"}) {
    o.output = scratch(preset + "_a");
    const auto a = run_figure(preset, base, o);
    o.output = scratch(preset + "_b");
    const auto b = run_figure(preset, base, o);
    ASSERT_TRUE(a.ok()) << preset;
    ASSERT_EQ(a.panels.size(), b.panels.size());
    for (std::size_t i = 0; i < a.panels.size(); ++i) {
      ASSERT_EQ(a.panels[i].files.size(), 3u);
      for (std::size_t f = 0; f < a.panels[i].files.size(); ++f) {
        EXPECT_EQ(slurp(a.panels[i].files[f]), slurp(b.panels[i].files[f])) << a.panels[i].files[f];
      }
    }
    EXPECT_EQ(slurp(a.manifest), slurp(b.manifest));
    const auto manifest = slurp(a.manifest);
    for (const auto& panel : a.panels) {
      EXPECT_NE(manifest.find(panel.files[0].filename().string()), std::string::npos);
    }
  }
}

}  // namespace
}  // namespace optomech
