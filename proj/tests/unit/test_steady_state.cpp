#include <cmath>

#include <gtest/gtest.h>

#include "optomech/error.hpp"
#include "optomech/model.hpp"
#include "optomech/steady_state.hpp"

namespace optomech {
namespace {

SystemParams defaults() { return derive_params(RawConfig::defaults()); }

SystemParams with_xi(const SystemParams& p, double xi) {
  RawConfig raw = p.raw;
  raw.xi = xi;
  return derive_params(raw);
}

TEST(SteadyState, ZeroDriveGivesZeroPolynomialConstant) {
  const auto p = with_power(defaults(), 0.0);
  const auto c = intensity_polynomial(p);
  EXPECT_EQ(c[3], 0.0);
  const auto s = solve_steady_state(p);
  EXPECT_EQ(s.a1s, Complex{});
  EXPECT_EQ(s.a2s, Complex{});
  EXPECT_EQ(s.x_s, 0.0);
  EXPECT_EQ(s.G, Complex{});
  EXPECT_EQ(s.p_s, 0.0);
}

TEST(SteadyState, NoBackactionIsLinearInIntensity) {
  const auto p = with_xi(defaults(), 1e-300);
  const auto c = intensity_polynomial(p);
  const double k = p.kappa(), g = p.gamma, J = p.J(), D = p.Delta();
  const double r0 = J * J - k * g - D * D;
  const double i0 = D * k - D * g;
  EXPECT_EQ(c[0], 0.0);
  EXPECT_NEAR(c[2], r0 * r0 + i0 * i0, 1e-12 * (r0 * r0 + i0 * i0));

  const auto s = solve_steady_state(p);
  const Complex expected = p.eta_L * Complex{-D, k} / Complex{r0, i0};
  EXPECT_LT(std::abs(s.a2s - expected), 1e-12 * std::abs(expected));
}

TEST(SteadyState, DefaultPointHasOneBranch) {
  const auto p = defaults();
  const auto c = intensity_polynomial(p);
  EXPECT_GT(c[0], 0.0);
  // Discriminant of the real cubic: negative means one real root.
  const double a = c[0], b = c[1], cc = c[2], d = c[3];
  const double disc = 18 * a * b * cc * d - 4 * b * b * b * d + b * b * cc * cc -
                      4 * a * cc * cc * cc - 27 * a * a * d * d;
  EXPECT_LT(disc, 0.0);
  const auto s = solve_steady_state(p);
  EXPECT_EQ(s.branch_count, 1);
  EXPECT_EQ(s.branch_index, 0);
}

TEST(SteadyState, ResidualBelowTolerance) {
  const auto p = with_kappa(defaults(), 0.5 * defaults().gamma);
  const auto s = solve_steady_state(p);
  EXPECT_LE(mean_field_residual(p, s).relative, 1e-8);
  EXPECT_GE(s.x_s, 0.0);
}

TEST(SteadyState, InvariantsOverParameterGrid) {
  const auto base = defaults();
  for (double k : {-2.0, -0.5, 0.0, 0.5, 0.95, 1.0, 1.05, 2.0}) {
    for (double d : {-1.5, -1.0, -0.5, 0.2}) {
      for (double P : {1e-5, 1e-4, 1e-3}) {
        const auto p = with_power(with_Delta(with_kappa(base, k * base.gamma), d * base.omega_m()), P);
        const auto s = solve_steady_state(p);
        EXPECT_LE(mean_field_residual(p, s).relative, 1e-8) << k << " " << d << " " << P;
        EXPECT_GE(s.x_s, 0.0);
        EXPECT_EQ(s.p_s, 0.0);
        EXPECT_GE(s.branch_count, 1);
        EXPECT_LE(s.branch_count, 3);
        const Complex a1 = Complex{0, p.J()} * s.a2s / Complex{p.kappa(), p.Delta()};
        EXPECT_LE(std::abs(s.a1s - a1), 1e-10 * std::abs(a1));
        EXPECT_DOUBLE_EQ(s.Delta_bar, p.Delta() + p.xi * s.x_s);
        EXPECT_EQ(s.G, coupling_G(s, p));
      }
    }
  }
}

TEST(SteadyState, CouplingScalesAsSqrtPower) {
  const auto p = with_power(defaults(), 1e-6);
  const auto a = solve_steady_state(p);
  const auto b = solve_steady_state(with_power(p, 4e-6));
  EXPECT_NEAR(std::abs(b.G) / std::abs(a.G), 2.0, 0.02);
}

TEST(SteadyState, RealPositiveAmplitudeGivesZeroPhase) {
  SteadyState s;
  s.a2s = 3.0;
  EXPECT_EQ(std::arg(coupling_G(s, defaults())), 0.0);
}

TEST(SteadyState, LowerBranchIsMonotoneInPower) {
  const auto base = defaults();
  double last = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const auto s = solve_steady_state(with_power(base, 2e-5 * i));
    EXPECT_GE(s.intensity(), last);
    last = s.intensity();
  }
}

TEST(SteadyState, MultistableBranchesAreReported) {
  // Strong drive of a single lossy cavity red of its cold resonance.
  RawConfig raw = RawConfig::defaults();
  raw.J = 0.0;
  raw.kappa = 0.0;
  raw.Delta = -5.0 * derive_params(raw).gamma;
  raw.P_in_W = 0.25;
  const auto p = derive_params(raw);
  const auto s = solve_steady_state(p);
  ASSERT_EQ(s.branch_count, 3);
  EXPECT_LT(s.branch_intensities[0], s.branch_intensities[2]);
  for (int b = 0; b < 3; ++b) {
    const auto sb = solve_steady_state(p, {b});
    EXPECT_NEAR(sb.intensity(), s.branch_intensities[static_cast<std::size_t>(b)],
                1e-8 * sb.intensity());
    EXPECT_LE(mean_field_residual(p, sb).relative, 1e-8);
  }
  try {
    (void)solve_steady_state(p, {3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidBranch);
  }
}

TEST(SteadyState, SingularDenominatorWhenCoupledCavityUndamped) {
  auto p = with_Delta(with_kappa(defaults(), 0.0), 0.0);
  try {
    (void)solve_steady_state(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularDenominator);
  }
}

}  // namespace
}  // namespace optomech
