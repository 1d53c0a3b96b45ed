#include <cmath>

#include <gtest/gtest.h>

#include "optomech/cooling.hpp"
#include "optomech/error.hpp"

namespace optomech {
namespace {

SystemParams defaults() { return derive_params(RawConfig::defaults()); }

double thermal(const SystemParams& p, double T) {
  return PhysicalConstants::k_B * T / (PhysicalConstants::hbar * p.omega_m());
}

TEST(Cooling, PhononNumberIdentityAndPowerLaws) {
  const auto p = defaults();
  const double wm = p.omega_m(), gm = p.Gamma_m;
  const double n = phonon_number(p, wm, gm, 300.0);
  EXPECT_DOUBLE_EQ(n, thermal(p, 300.0));
  EXPECT_DOUBLE_EQ(phonon_number(p, wm, 2.0 * gm, 300.0), n / 2.0);
  EXPECT_DOUBLE_EQ(phonon_number(p, 2.0 * wm, gm, 300.0), n / 8.0);
  EXPECT_DOUBLE_EQ(phonon_number(p, 2.0 * wm, gm, 300.0, 1), n / 2.0);
  EXPECT_DOUBLE_EQ(phonon_number(p, wm, gm, 150.0), n / 2.0);
}

TEST(Cooling, PhononNumberRejectsAmplification) {
  const auto p = defaults();
  for (double g : {0.0, -p.Gamma_m}) {
    try {
      (void)phonon_number(p, p.omega_m(), g, 300.0);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kNotCooling);
    }
  }
  EXPECT_THROW((void)phonon_number(p, 0.0, p.Gamma_m, 300.0), Error);
}

TEST(Cooling, BaselineWithoutDriveIsThermal) {
  const auto p = with_power(defaults(), 0.0);
  const auto b = baseline_n0(p, 300.0);
  EXPECT_DOUBLE_EQ(b.n0, thermal(p, 300.0));
  EXPECT_TRUE(b.stable);
  EXPECT_EQ(b.params.J(), 0.0);
  EXPECT_EQ(b.params.kappa(), 0.0);
  EXPECT_EQ(b.params.Delta(), -p.omega_m());
}

TEST(Cooling, BaselineNearAThousand) {
  const auto b = baseline_n0(defaults(), 300.0);
  EXPECT_TRUE(b.stable);
  EXPECT_GT(b.n0, 1e3 / 3.0);
  EXPECT_LT(b.n0, 3e3);
}

TEST(Cooling, BaselineFallsWithPower) {
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 40; ++i) {
    const double P = 1e-5 * std::pow(100.0, i / 40.0);
    const double n0 = baseline_n0(with_power(defaults(), P), 300.0).n0;
    EXPECT_LT(n0, prev) << P;
    prev = n0;
  }
}

TEST(Cooling, BaselineOverrides) {
  CoolingOptions o;
  o.baseline_power = 1e-4;
  o.baseline_Delta = -0.5 * defaults().omega_m();
  const auto b = baseline_n0(defaults(), 300.0, o);
  EXPECT_EQ(b.params.P_in(), 1e-4);
  EXPECT_EQ(b.params.Delta(), -0.5 * defaults().omega_m());
}

TEST(Cooling, BetaIsOneWithoutDrive) {
  const auto p = with_kappa(with_power(defaults(), 0.0), -0.5 * defaults().gamma);
  const auto r = beta(p, 300.0);
  ASSERT_TRUE(r.defined()) << r.status;
  EXPECT_EQ(r.status, "ok");
  EXPECT_DOUBLE_EQ(*r.beta, 1.0);
}

TEST(Cooling, BetaConsistencyAndTemperatureInvariance) {
  CoolingOptions o;
  o.policy = StabilityPolicy::kFormulaOnly;
  const auto p = with_kappa(defaults(), 1.05 * defaults().gamma);
  const auto a = beta(p, 300.0, o);
  const auto b = beta(p, 0.65, o);
  ASSERT_TRUE(a.defined()) << a.status;
  ASSERT_TRUE(b.defined()) << b.status;
  EXPECT_NEAR(*a.beta * *a.n0, *a.n, 1e-12 * *a.n);
  EXPECT_NEAR(*a.beta, *b.beta, 1e-12 * *a.beta);
  EXPECT_NEAR(*a.n / *b.n, 300.0 / 0.65, 1e-12 * 300.0 / 0.65);
  EXPECT_FALSE(a.stable);
  EXPECT_NEAR(a.params.kappa_over_gamma, 1.05, 1e-12);
}

TEST(Cooling, UnstablePointsAreWithheldByDefault) {
  const auto p = with_kappa(defaults(), 1.05 * defaults().gamma);
  const auto r = beta(p, 300.0);
  EXPECT_FALSE(r.defined());
  EXPECT_FALSE(r.n.has_value());
  EXPECT_EQ(r.status, "unstable");
}

TEST(Cooling, AmplifyingSideIsFlagged) {
  CoolingOptions o;
  o.policy = StabilityPolicy::kFormulaOnly;
  RawConfig raw = RawConfig::defaults();
  raw.P_in_W = 1e-4;
  const auto p = with_kappa(derive_params(raw), 0.95 * derive_params(raw).gamma);
  const auto r = beta(p, 300.0, o);
  EXPECT_FALSE(r.defined());
  EXPECT_EQ(r.status, "amplifying");
  ASSERT_TRUE(r.gamma_eff.has_value());
  EXPECT_LT(*r.gamma_eff, 0.0);
}

TEST(Cooling, PassivePairOnlySlightlyEnhanced) {
  RawConfig raw = RawConfig::defaults();
  raw.P_in_W = 1e-4;
  const auto base = derive_params(raw);
  for (double k : {-1.0, -0.5}) {
    for (int i = 0; i <= 20; ++i) {
      const double d = -2.0 + 2.0 * i / 20.0;
      const auto p = with_Delta(with_kappa(base, k * base.gamma), d * base.omega_m());
      const auto r = beta(p, 300.0);
      if (!r.defined()) continue;
      EXPECT_GT(*r.beta, 0.1) << k << " " << d;
      EXPECT_LT(*r.beta, 10.0) << k << " " << d;
    }
  }
}

TEST(Cooling, SinglePointSweepEqualsBeta) {
  const auto p = with_kappa(defaults(), -0.5 * defaults().gamma);
  const auto rows = cooling_sweep(p, {{CoolingAxis::kKappaRatio, {-0.5}}});
  ASSERT_EQ(rows.size(), 1u);
  const auto direct = beta(p, p.T());
  EXPECT_EQ(rows[0].result.status, direct.status);
  EXPECT_EQ(rows[0].result.beta, direct.beta);
  EXPECT_EQ(rows[0].axis_values, std::vector<double>{-0.5});
}

TEST(Cooling, TwoAxisSweepOrdering) {
  CoolingOptions o;
  o.policy = StabilityPolicy::kFormulaOnly;
  const auto rows = cooling_sweep(defaults(),
                                  {{CoolingAxis::kKappaRatio, {1.001, 1.01, 1.1}},
                                   {CoolingAxis::kTemperature, {300.0, 20.0}}},
                                  o);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[1].axis_values, (std::vector<double>{1.001, 20.0}));
  EXPECT_EQ(rows[2].axis_values, (std::vector<double>{1.01, 300.0}));
  EXPECT_EQ(rows[3].result.T, 20.0);
  const auto nmin = minimum_phonon_number(rows);
  ASSERT_TRUE(nmin.has_value());
  for (const auto& r : rows) {
    if (r.result.n) {
      EXPECT_LE(*nmin, *r.result.n);
    }
  }
}

TEST(Cooling, SweepRecordsPerPointFailures) {
  const auto rows = cooling_sweep(defaults(), {{CoolingAxis::kPower, {1e-3, -1.0}}});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].result.status, "NonPositiveInput");
  EXPECT_FALSE(minimum_phonon_number({rows[1]}).has_value());
}

TEST(Cooling, DampingSignFlipsAcrossBalance) {
  CoolingOptions o;
  o.policy = StabilityPolicy::kFormulaOnly;
  RawConfig raw = RawConfig::defaults();
  raw.P_in_W = 1e-4;
  const auto rows = cooling_sweep(derive_params(raw), {{CoolingAxis::kKappaRatio, {0.95, 1.05}}}, o);
  ASSERT_TRUE(rows[0].result.gamma_eff && rows[1].result.gamma_eff);
  EXPECT_LT(*rows[0].result.gamma_eff, 0.0);
  EXPECT_GT(*rows[1].result.gamma_eff, 0.0);
}

}  // namespace
}  // namespace optomech
