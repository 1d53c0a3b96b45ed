#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "optomech/eigen.hpp"
#include "optomech/error.hpp"
#include "optomech/response.hpp"
#include "optomech/steady_state.hpp"
#include "optomech/supermodes.hpp"
#include "oracles.hpp"

namespace optomech {
namespace {

constexpr double kHbar = PhysicalConstants::hbar;

SystemParams defaults() { return derive_params(RawConfig::defaults()); }

SystemParams single_cavity(double P, double Delta_ratio = -1.0) {
  RawConfig raw = RawConfig::defaults();
  raw.J = 0.0;
  raw.kappa = 0.0;
  raw.P_in_W = P;
  raw.Delta = Delta_ratio * raw.omega_m;
  return derive_params(raw);
}

TEST(Response, UndrivenLimitsAreExact) {
  const auto p = with_power(defaults(), 0.0);
  const auto s = solve_steady_state(p);
  const auto m = effective_mechanics(p, s);
  EXPECT_EQ(m.omega_eff, p.omega_m());
  EXPECT_EQ(m.gamma_eff, p.Gamma_m);
  EXPECT_EQ(susceptibility_analytic(p, s, 0.0), Complex{1.0 / (p.mass() * p.omega_m() * p.omega_m())});

  const auto tm = transfer_matrix(p, s);
  EXPECT_EQ(tm.R2, 0.0);
  EXPECT_EQ(tm.I2, 0.0);
  for (std::size_t r = 0; r < 4; ++r) {
    EXPECT_EQ(tm.A_complex(r, 4), Complex{});
    EXPECT_EQ(tm.A_complex(5, r), Complex{});
  }
  EXPECT_EQ(tm.A_complex(4, 5), Complex{1.0 / p.mass()});
  EXPECT_EQ(tm.A_complex(5, 4), Complex{-p.mass() * p.omega_m() * p.omega_m()});
  EXPECT_EQ(tm.A_complex(5, 5), Complex{-p.Gamma_m});
}

TEST(Response, ConjugationSymmetry) {
  const auto p = with_kappa(defaults(), 0.7 * defaults().gamma);
  const auto tm = transfer_matrix(p, solve_steady_state(p));
  const auto& A = tm.A_complex_scaled;
  // Swapping each (a, a*) pair and conjugating leaves A unchanged.
  const std::size_t perm[] = {1, 0, 3, 2, 4, 5};
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(A(perm[i], perm[j]), std::conj(A(i, j)));
  }
}

TEST(Response, OpticalEigenvaluesMatchTwoModeSpectrum) {
  RawConfig raw = RawConfig::defaults();
  raw.xi = 1e-300;
  raw.kappa = 0.6 * derive_params(raw).gamma;
  raw.Delta = -0.4 * raw.omega_m;
  const auto p = derive_params(raw);
  const auto tm = transfer_matrix(p, solve_steady_state(p));
  const auto eig = eigvals_small(tm.A_complex_scaled);
  const auto spec = spectrum_exact(p, 0.0);
  // lambda = i omega on the conjugate rows, and its conjugate on the others.
  std::vector<Complex> expected;
  for (auto label : {BranchLabel::kPlus, BranchLabel::kMinus}) {
    const Complex l = Complex{0.0, 1.0} * spec.at(label);
    expected.push_back(l);
    expected.push_back(std::conj(l));
  }
  const double wm = p.omega_m(), gm = p.Gamma_m;
  const Complex mech = std::sqrt(Complex{gm * gm / 4.0 - wm * wm});
  expected.push_back(-gm / 2.0 + mech);
  expected.push_back(-gm / 2.0 - mech);
  EXPECT_LT(oracle::multiset_distance(eig, expected), 1e-9 * p.gamma);
}

TEST(Response, BasesShareTheSpectrum) {
  auto gen = oracle::rng(53);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> power(-5.0, -2.0);
  const auto base = defaults();
  for (int t = 0; t < 200; ++t) {
    RawConfig raw = base.raw;
    raw.kappa = u(gen) * base.gamma;
    raw.Delta = u(gen) * base.omega_m();
    raw.P_in_W = std::pow(10.0, power(gen));
    const auto p = derive_params(raw);
    for (auto topo : {Topology::kCoupled, Topology::kSingleCavity}) {
      const auto tm = transfer_matrix(p, solve_steady_state(p), topo);
      const auto a = eigvals_small(tm.A_complex_scaled);
      const auto b = eigvals_small(tm.A_quadrature_scaled);
      double scale = 0.0;
      for (auto z : a) scale = std::max(scale, std::abs(z));
      EXPECT_LT(oracle::multiset_distance(a, b), 1e-9 * scale);
    }
  }
}

TEST(Response, StabilityOfUndrivenOptics) {
  const auto base = with_power(defaults(), 0.0);
  const double g = base.gamma;
  auto passive = with_kappa(base, -0.5 * g);
  auto r = stability(transfer_matrix(passive, solve_steady_state(passive)));
  EXPECT_TRUE(r.stable);
  EXPECT_EQ(r.routh_stable, std::optional<bool>(true));
  EXPECT_EQ(r.margin, -r.max_real_part);

  auto gain = with_kappa(base, 1.5 * g);
  r = stability(transfer_matrix(gain, solve_steady_state(gain)));
  EXPECT_FALSE(r.stable);
  EXPECT_EQ(r.routh_stable, std::optional<bool>(false));
  const double expected = 0.25 * g + std::sqrt(1.5625 * g * g - g * g);
  EXPECT_NEAR(r.max_real_part, expected, 1e-9 * g);
}

TEST(Response, StabilityVerdictsAgree) {
  auto gen = oracle::rng(59);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> power(-5.0, -2.0);
  const auto base = defaults();
  for (int t = 0; t < 300; ++t) {
    RawConfig raw = base.raw;
    raw.kappa = u(gen) * base.gamma;
    raw.Delta = u(gen) * base.omega_m();
    raw.P_in_W = std::pow(10.0, power(gen));
    const auto p = derive_params(raw);
    const auto r = stability(transfer_matrix(p, solve_steady_state(p)));
    EXPECT_EQ(r.stable, r.max_real_part < 0.0);
    if (!r.marginal && r.routh_stable) {
      EXPECT_EQ(*r.routh_stable, r.stable);
    }
  }
}

TEST(Response, APmIdentities) {
  auto p = defaults();
  const auto s = solve_steady_state(p);
  auto a = a_pm(p, s, 0.0);
  EXPECT_EQ(a.plus, a.minus);
  const double w = 0.8 * p.omega_m();
  EXPECT_EQ(a_pm(p, s, w).plus, a_pm(p, s, -w).minus);

  const auto q = with_power(single_cavity(1e-3), 0.0);
  const auto sq = solve_steady_state(q);
  a = a_pm(q, sq, w);
  const double D = q.Delta();
  EXPECT_NEAR(a.plus, -(D - w) * (D - w), 1e-12 * D * D);
  EXPECT_NEAR(a.minus, -(D + w) * (D + w), 1e-12 * D * D);
}

TEST(Response, SingleCavityDampingLimit) {
  for (double P : {1e-4, 1e-3}) {
    for (double d : {-1.0, -0.5, -1.5}) {
      const auto p = single_cavity(P, d);
      const auto s = solve_steady_state(p);
      const double w = p.omega_m(), g = p.gamma, Db = s.Delta_bar;
      const double c = kHbar * p.xi * p.xi * s.intensity() / p.mass();
      const double expected =
          c / w * g * (1.0 / (g * g + (Db + w) * (Db + w)) - 1.0 / (g * g + (Db - w) * (Db - w)));
      const double got = gamma_eff(p, s, w) - p.Gamma_m;
      EXPECT_NEAR(got, expected, 1e-9 * std::abs(expected));
      if (d == -1.0) {
        EXPECT_GT(got, 0.0);
      }
    }
  }
}

// The closed forms put both resonators at Delta_bar; against the self-energy
// with that assumption they are exact.
TEST(Response, EffectiveMechanicsMatchesSelfEnergy) {
  auto gen = oracle::rng(61);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> power(-5.0, -2.0);
  const auto base = defaults();
  for (int t = 0; t < 300; ++t) {
    RawConfig raw = base.raw;
    raw.kappa = u(gen) * base.gamma;
    raw.J = std::abs(u(gen)) * base.gamma;
    raw.Delta = u(gen) * base.omega_m();
    raw.P_in_W = std::pow(10.0, power(gen));
    const auto p = derive_params(raw);
    const auto s = solve_steady_state(p);
    const double w = p.omega_m() * (0.9 + 0.2 * (u(gen) + 2.0) / 4.0);
    const auto ref = oracle::exact_mechanics(p, s, w, true);
    if (!std::isfinite(ref.omega_eff)) continue;
    const double sigma = std::abs(oracle::self_energy(p, s, w, true)) / (p.mass() * w);
    EXPECT_NEAR(omega_eff(p, s, w), ref.omega_eff, 1e-9 * ref.omega_eff);
    EXPECT_NEAR(gamma_eff(p, s, w), ref.gamma_eff, 1e-9 * (sigma + p.Gamma_m));
  }
}

// Without the gain resonator there is no approximation left.
TEST(Response, SingleCavityMechanicsMatchesSelfEnergy) {
  auto gen = oracle::rng(67);
  std::uniform_real_distribution<double> u(-2.0, 0.0);
  std::uniform_real_distribution<double> power(-5.0, -2.0);
  for (int t = 0; t < 100; ++t) {
    const auto p = single_cavity(std::pow(10.0, power(gen)), u(gen));
    const auto s = solve_steady_state(p);
    const double w = p.omega_m();
    const auto ref = oracle::exact_mechanics(p, s, w);
    if (!std::isfinite(ref.omega_eff)) continue;
    const double sigma = std::abs(oracle::self_energy(p, s, w)) / (p.mass() * w);
    EXPECT_NEAR(omega_eff(p, s, w), ref.omega_eff, 1e-9 * ref.omega_eff);
    EXPECT_NEAR(gamma_eff(p, s, w), ref.gamma_eff, 1e-9 * (sigma + p.Gamma_m));
  }
}

TEST(Response, PrintedConventionDiffersFromEffective) {
  const auto p = single_cavity(1e-3);
  const auto s = solve_steady_state(p);
  ResponseOptions o;
  o.convention = DetuningConvention::kPrinted;
  EXPECT_NE(effective_mechanics(p, s).gamma_eff, effective_mechanics(p, s, o).gamma_eff);
}

TEST(Response, SelfConsistentFrequencyIsAFixedPoint) {
  const auto p = single_cavity(1e-3);
  const auto s = solve_steady_state(p);
  ResponseOptions o;
  o.eval = EvalFrequency::kSelfConsistent;
  const auto m = effective_mechanics(p, s, o);
  EXPECT_GT(m.iterations, 0);
  EXPECT_NEAR(omega_eff(p, s, m.eval_freq), m.eval_freq, 1e-7 * m.eval_freq);

  o.eval = EvalFrequency::kFixed;
  o.fixed_omega = 0.9 * p.omega_m();
  EXPECT_EQ(effective_mechanics(p, s, o).omega_eff, omega_eff(p, s, o.fixed_omega));
}

TEST(Response, ShiftsAreLinearInPowerAtLowDrive) {
  const auto base = with_kappa(defaults(), 0.5 * defaults().gamma);
  const auto p1 = with_power(base, 1e-7);
  const auto p2 = with_power(base, 2e-7);
  const auto s1 = solve_steady_state(p1);
  const auto s2 = solve_steady_state(p2);
  const auto m1 = effective_mechanics(p1, s1);
  const auto m2 = effective_mechanics(p2, s2);
  const double wm = base.omega_m();
  EXPECT_NEAR((m2.omega_eff * m2.omega_eff - wm * wm) / (m1.omega_eff * m1.omega_eff - wm * wm), 2.0,
              1e-4);
  EXPECT_NEAR((m2.gamma_eff - base.Gamma_m) / (m1.gamma_eff - base.Gamma_m), 2.0, 1e-4);
}

TEST(Response, BareNumericSusceptibility) {
  // Off the optical EP, whose undamped pair would make the resolvent singular at omega_m.
  const auto p = with_kappa(with_power(defaults(), 0.0), -0.5 * defaults().gamma);
  const auto tm = transfer_matrix(p, solve_steady_state(p));
  const double wm = p.omega_m(), gm = p.Gamma_m, m = p.mass();
  for (double f : {0.0, 0.5, 0.999, 1.0, 1.001, 2.0}) {
    const double w = f * wm;
    const Complex expected = 1.0 / (m * Complex{wm * wm - w * w, -w * gm});
    EXPECT_LT(std::abs(susceptibility_numeric(tm, w) - expected), 1e-10 * std::abs(expected)) << f;
  }
  const auto fit = fit_lorentzian([&](double w) { return susceptibility_numeric(tm, w); }, wm, gm);
  EXPECT_NEAR(fit.peak, wm, 0.01 * wm);
  EXPECT_NEAR(fit.width, gm, 0.01 * gm);
}

TEST(Response, SingleCavityNumericMatchesBackactionLimit) {
  const auto p = single_cavity(1e-3);
  const auto s = solve_steady_state(p);
  const auto tm = transfer_matrix(p, s, Topology::kSingleCavity);
  ASSERT_TRUE(stability(tm).stable);
  ResponseOptions o;
  o.eval = EvalFrequency::kSelfConsistent;
  const auto m = effective_mechanics(p, s, o);
  const auto fit =
      fit_lorentzian([&](double w) { return susceptibility_numeric(tm, w); }, m.omega_eff, m.gamma_eff);
  EXPECT_NEAR(fit.peak, m.omega_eff, 0.05 * m.omega_eff);
  EXPECT_NEAR(fit.width, m.gamma_eff, 0.05 * m.gamma_eff);
}

std::vector<ChiSample> lorentzian_samples(double lo, double hi, int n) {
  std::vector<ChiSample> out;
  for (int i = 0; i < n; ++i) {
    const double w = lo + (hi - lo) * i / (n - 1);
    out.push_back({w, 1.0 / Complex{1.0 - w * w, -0.01 * w}});
  }
  return out;
}

TEST(Response, LorentzianFromSyntheticSamples) {
  const auto fit = extract_lorentzian(lorentzian_samples(0.9, 1.1, 2001));
  EXPECT_NEAR(fit.peak, 1.0, 1e-3);
  EXPECT_NEAR(fit.width, 0.01, 1e-5);

  const auto coarse = extract_lorentzian(lorentzian_samples(0.9, 1.1, 401));
  const auto fine = extract_lorentzian(lorentzian_samples(0.9, 1.1, 801));
  EXPECT_LE(std::abs(fine.peak - coarse.peak), coarse.interpolation_error);
  EXPECT_LE(std::abs(fine.width - coarse.width), coarse.interpolation_error);

  const auto direct = fit_lorentzian([](double w) { return 1.0 / Complex{1.0 - w * w, -0.01 * w}; },
                                     1.02, 0.02);
  EXPECT_NEAR(direct.peak, 1.0, 1e-3);
  EXPECT_NEAR(direct.width, 0.01, 1e-5);
}

TEST(Response, LorentzianNeedsInteriorPeak) {
  try {
    (void)extract_lorentzian(lorentzian_samples(1.05, 1.2, 200));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoPeakInRange);
  }
}

TEST(Response, ThermalSpectrumLimits) {
  const auto p = defaults();
  const double w = p.omega_m(), gm = p.Gamma_m;
  EXPECT_NEAR(thermal_spectrum(w, 0.0, p), gm * w / p.omega_m(), 1e-15 * gm);
  EXPECT_NEAR(thermal_spectrum(w, 1e-4, p), gm * w / p.omega_m(), 1e-12 * gm);

  const double T = 300.0;
  const double x = kHbar * w / (PhysicalConstants::k_B * T);
  const double hot = gm / p.omega_m() * PhysicalConstants::k_B * T / kHbar;
  // coth(x/2) = 2/x + x/6 + ...; S = (gm/2wm) w (1 + 2/x + x/6).
  EXPECT_NEAR(thermal_spectrum(w, T, p) / hot, 1.0 + x / 2.0 + x * x / 12.0, 1e-9);

  double prev = 0.0;
  for (double t : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
    const double s = thermal_spectrum(w, t, p);
    EXPECT_GT(s, prev);
    prev = s;
  }
  EXPECT_THROW((void)thermal_spectrum(0.0, T, p), Error);
}

}  // namespace
}  // namespace optomech
