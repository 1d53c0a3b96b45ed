#include "optomech/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "optomech/eigen.hpp"
#include "optomech/error.hpp"
#include "optomech/polynomial.hpp"

namespace optomech {
namespace {

const Complex kI{0.0, 1.0};
constexpr double kMinDenominator = 1e-30;

// Brackets multiplying hbar xi^2 I / m in Omega_eff^2 - omega_m^2 and in
// omega (Gamma_m - Gamma_eff).
struct Backaction {
  double spring = 0.0;
  double damping = 0.0;
};

Backaction backaction(const SystemParams& p, const SteadyState& st, double omega,
                      DetuningConvention convention) {
  const double k = p.kappa();
  const double g = p.gamma;
  const APm A = a_pm(p, st, omega, convention);
  const double s = st.Delta_bar + omega;
  const double t = st.Delta_bar - omega;
  const double den_minus = A.minus * A.minus + s * s * (k - g) * (k - g);
  const double den_plus = A.plus * A.plus + t * t * (k - g) * (k - g);
  if (std::abs(den_minus) < kMinDenominator || std::abs(den_plus) < kMinDenominator) {
    throw Error(ErrorCode::kDivergentDenominator,
                "effective-mechanics denominator vanishes at omega = " + std::to_string(omega));
  }
  Backaction b;
  b.spring = s * (k * (k - g) - A.minus) / den_minus + t * (k * (k - g) - A.plus) / den_plus;
  b.damping = (k * A.minus + s * s * (k - g)) / den_minus +
              (-k * A.plus - t * t * (k - g)) / den_plus;
  return b;
}

double backaction_scale(const SystemParams& p, const SteadyState& st) {
  return PhysicalConstants::hbar * p.xi * p.xi * st.intensity() / p.mass();
}

struct Rates {
  double omega2 = 0.0;
  double gamma = 0.0;
};

Rates rates_at(const SystemParams& p, const SteadyState& st, double omega,
               DetuningConvention convention) {
  const double wm = p.omega_m();
  const double c = backaction_scale(p, st);
  if (c == 0.0) return {wm * wm, p.Gamma_m};
  const auto b = backaction(p, st, omega, convention);
  return {wm * wm + c * b.spring, p.Gamma_m - c * b.damping / omega};
}

double vertex(double x1, double f1, double x2, double f2, double x3, double f3) {
  const double num = (x2 - x1) * (x2 - x1) * (f2 - f3) - (x2 - x3) * (x2 - x3) * (f2 - f1);
  const double den = (x2 - x1) * (f2 - f3) - (x2 - x3) * (f2 - f1);
  return den == 0.0 ? x2 : x2 - 0.5 * num / den;
}

double parabola_at(double x1, double f1, double x2, double f2, double x3, double f3, double x) {
  return f1 * (x - x2) * (x - x3) / ((x1 - x2) * (x1 - x3)) +
         f2 * (x - x1) * (x - x3) / ((x2 - x1) * (x2 - x3)) +
         f3 * (x - x1) * (x - x2) / ((x3 - x1) * (x3 - x2));
}

struct PeakData {
  LorentzianFit fit;
  double half_level = 0.0;  // log|chi|^2 at half maximum
  std::size_t left = 0;     // last sample below half on the left
  std::size_t right = 0;    // first sample below half on the right
};

PeakData locate_peak(const std::vector<ChiSample>& samples) {
  const std::size_t n = samples.size();
  if (n < 3) throw Error(ErrorCode::kNoPeakInRange, "fewer than three samples");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::log(std::norm(samples[i].chi));
  const auto imax =
      static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  if (imax == 0 || imax + 1 == n) {
    throw Error(ErrorCode::kNoPeakInRange, "maximum of |chi| lies on the sampling edge");
  }
  const double x1 = samples[imax - 1].omega, x2 = samples[imax].omega, x3 = samples[imax + 1].omega;
  const double f1 = y[imax - 1], f2 = y[imax], f3 = y[imax + 1];

  PeakData d;
  d.fit.peak = vertex(x1, f1, x2, f2, x3, f3);
  const double top = std::max(f2, parabola_at(x1, f1, x2, f2, x3, f3, d.fit.peak));
  d.half_level = top - std::log(2.0);

  std::size_t l = imax;
  while (l > 0 && y[l] > d.half_level) --l;
  std::size_t r = imax;
  while (r + 1 < n && y[r] > d.half_level) ++r;
  if (y[l] > d.half_level || y[r] > d.half_level) {
    throw Error(ErrorCode::kNoPeakInRange, "half maximum not reached inside the samples");
  }
  d.left = l;
  d.right = r;

  auto cross = [&](std::size_t a, std::size_t b) {
    const double t = (d.half_level - y[a]) / (y[b] - y[a]);
    return samples[a].omega + t * (samples[b].omega - samples[a].omega);
  };
  d.fit.width = cross(r - 1, r) - cross(l + 1, l);
  return d;
}

}  // namespace

std::string_view to_string(StabilityMethod method) {
  switch (method) {
    case StabilityMethod::kEigenvalue: return "eigenvalue";
    case StabilityMethod::kRouthHurwitz: return "routh_hurwitz";
    case StabilityMethod::kBoth: return "both";
  }
  return "?";
}

TransferMatrix transfer_matrix(const SystemParams& p, const SteadyState& st, Topology topology) {
  constexpr double hbar = PhysicalConstants::hbar;
  const double s2 = std::sqrt(2.0);
  const double k = p.kappa();
  const double g = p.gamma;
  const double J = p.J();
  const double D = p.Delta();
  const double Db = st.Delta_bar;
  const double wm = p.omega_m();
  const double m = p.mass();
  const double Gm = p.Gamma_m;
  const Complex a = st.a2s;
  const Complex G = st.G;

  TransferMatrix tm;
  tm.topology = topology;
  tm.R2 = s2 * hbar * p.xi * a.real();
  tm.I2 = s2 * hbar * p.xi * a.imag();
  tm.gamma = g;
  tm.omega_m = wm;
  tm.mass = m;

  const std::size_t n = topology == Topology::kCoupled ? 6 : 4;
  const std::size_t o = topology == Topology::kCoupled ? 2 : 0;  // index of da2 / X2
  const std::size_t x = n - 2;
  const std::size_t pp = n - 1;

  ComplexMatrix A(n), As(n);
  RealMatrix Q(n), Qs(n);

  if (topology == Topology::kCoupled) {
    for (auto* M : {&A, &As}) {
      (*M)(0, 0) = Complex{k, D};
      (*M)(0, 2) = -kI * J;
      (*M)(1, 1) = Complex{k, -D};
      (*M)(1, 3) = kI * J;
      (*M)(2, 0) = -kI * J;
      (*M)(3, 1) = kI * J;
    }
    for (auto* M : {&Q, &Qs}) {
      (*M)(0, 0) = k;
      (*M)(0, 1) = -D;
      (*M)(0, 3) = J;
      (*M)(1, 0) = D;
      (*M)(1, 1) = k;
      (*M)(1, 2) = -J;
      (*M)(2, 1) = J;
      (*M)(3, 0) = -J;
    }
  }

  for (auto* M : {&A, &As}) {
    (*M)(o, o) = Complex{-g, Db};
    (*M)(o + 1, o + 1) = Complex{-g, -Db};
    (*M)(pp, pp) = -Gm;
  }
  for (auto* M : {&Q, &Qs}) {
    (*M)(o, o) = -g;
    (*M)(o, o + 1) = -Db;
    (*M)(o + 1, o) = Db;
    (*M)(o + 1, o + 1) = -g;
    (*M)(pp, pp) = -Gm;
  }

  // SI coupling and mechanics.
  A(o, x) = kI * p.xi * a;
  A(o + 1, x) = -kI * p.xi * std::conj(a);
  A(x, pp) = 1.0 / m;
  A(pp, o) = hbar * p.xi * std::conj(a);
  A(pp, o + 1) = hbar * p.xi * a;
  A(pp, x) = -m * wm * wm;

  Q(o, x) = -s2 * p.xi * a.imag();
  Q(o + 1, x) = s2 * p.xi * a.real();
  Q(x, pp) = 1.0 / m;
  Q(pp, o) = tm.R2;
  Q(pp, o + 1) = tm.I2;
  Q(pp, x) = -m * wm * wm;

  // x in units of x0, p in units of m omega_m x0.
  As(o, x) = kI * G;
  As(o + 1, x) = -kI * std::conj(G);
  As(x, pp) = wm;
  As(pp, o) = 2.0 * std::conj(G);
  As(pp, o + 1) = 2.0 * G;
  As(pp, x) = -wm;

  Qs(o, x) = -s2 * G.imag();
  Qs(o + 1, x) = s2 * G.real();
  Qs(x, pp) = wm;
  Qs(pp, o) = 2.0 * s2 * G.real();
  Qs(pp, o + 1) = 2.0 * s2 * G.imag();
  Qs(pp, x) = -wm;

  tm.A_complex = std::move(A);
  tm.A_quadrature = std::move(Q);
  tm.A_complex_scaled = std::move(As);
  tm.A_quadrature_scaled = std::move(Qs);
  return tm;
}

StabilityReport stability(const TransferMatrix& tm, double marginal_threshold) {
  StabilityReport r;
  const double g = tm.gamma;
  const auto eig = eigvals_small(tm.A_complex_scaled * Complex{1.0 / g});
  double max_re = -std::numeric_limits<double>::infinity();
  for (const auto& l : eig) max_re = std::max(max_re, l.real());
  r.max_real_part = max_re * g;
  r.margin = -r.max_real_part;
  r.stable = r.max_real_part < 0.0;
  r.marginal = std::abs(max_re) < marginal_threshold;

  const auto coeffs = char_poly(tm.A_quadrature_scaled * (1.0 / g));
  try {
    r.routh_stable = routh_hurwitz(coeffs).stable;
    r.method = StabilityMethod::kBoth;
    r.agree = *r.routh_stable == r.stable;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateArray) throw;
    r.method = StabilityMethod::kEigenvalue;
    r.agree = true;
  }
  return r;
}

APm a_pm(const SystemParams& p, const SteadyState& st, double omega,
         DetuningConvention convention) {
  const double Db = st.Delta_bar;
  const double D = convention == DetuningConvention::kEffective ? Db : p.Delta();
  const double base = p.J() * p.J() - p.kappa() * p.gamma - Db * Db - omega * omega;
  return {base + 2.0 * D * omega, base - 2.0 * D * omega};
}

EffectiveMechanics effective_mechanics(const SystemParams& p, const SteadyState& st,
                                       const ResponseOptions& options) {
  double omega = p.omega_m();
  if (options.eval == EvalFrequency::kFixed) omega = options.fixed_omega;

  auto evaluate = [&](double w) {
    const auto r = rates_at(p, st, w, options.convention);
    if (r.omega2 < 0.0) {
      throw Error(ErrorCode::kNegativeStiffness,
                  "Omega_eff^2 = " + std::to_string(r.omega2) + " < 0");
    }
    return r;
  };

  EffectiveMechanics out;
  Rates r = evaluate(omega);
  if (options.eval == EvalFrequency::kSelfConsistent) {
    int it = 0;
    for (;;) {
      const double next = std::sqrt(r.omega2);
      ++it;
      const bool done = std::abs(next - omega) <= options.tolerance * std::abs(next);
      omega = next;
      r = evaluate(omega);
      if (done) break;
      if (it >= options.max_iterations) {
        throw Error(ErrorCode::kNoConvergence,
                    "self-consistent evaluation frequency did not converge");
      }
    }
    out.iterations = it;
  }
  out.omega_eff = std::sqrt(r.omega2);
  out.gamma_eff = r.gamma;
  out.eval_freq = omega;
  return out;
}

double omega_eff(const SystemParams& p, const SteadyState& st, double omega,
                 DetuningConvention convention) {
  ResponseOptions o;
  o.eval = EvalFrequency::kFixed;
  o.fixed_omega = omega;
  o.convention = convention;
  return effective_mechanics(p, st, o).omega_eff;
}

double gamma_eff(const SystemParams& p, const SteadyState& st, double omega,
                 DetuningConvention convention) {
  return rates_at(p, st, omega, convention).gamma;
}

Complex susceptibility_analytic(const SystemParams& p, const SteadyState& st, double omega,
                                DetuningConvention convention) {
  // omega * Gamma_eff is formed directly so that omega = 0 stays finite.
  const double wm = p.omega_m();
  const double c = backaction_scale(p, st);
  double omega2 = wm * wm;
  double omega_gamma = omega * p.Gamma_m;
  if (c != 0.0) {
    const auto b = backaction(p, st, omega, convention);
    omega2 += c * b.spring;
    omega_gamma -= c * b.damping;
  }
  return 1.0 / (p.mass() * Complex{omega2 - omega * omega, -omega_gamma});
}

Complex susceptibility_numeric(const TransferMatrix& tm, double omega) {
  const std::size_t n = tm.A_complex_scaled.order();
  const double g = tm.gamma;
  ComplexMatrix M = tm.A_complex_scaled * Complex{-1.0 / g};
  for (std::size_t i = 0; i < n; ++i) M(i, i) += Complex{0.0, -omega / g};
  std::vector<Complex> rhs(n);
  rhs[tm.p_index()] = 1.0 / g;
  const auto u = solve_linear(std::move(M), std::move(rhs));
  return u[tm.x_index()] / (tm.mass * tm.omega_m);
}

LorentzianFit extract_lorentzian(const std::vector<ChiSample>& samples) {
  auto fit = locate_peak(samples).fit;
  std::vector<ChiSample> half;
  for (std::size_t i = 0; i < samples.size(); i += 2) half.push_back(samples[i]);
  try {
    const auto coarse = locate_peak(half).fit;
    fit.interpolation_error =
        std::max(std::abs(coarse.peak - fit.peak), std::abs(coarse.width - fit.width));
  } catch (const Error&) {
    fit.interpolation_error = std::numeric_limits<double>::infinity();
  }
  return fit;
}

LorentzianFit fit_lorentzian(const std::function<Complex(double)>& chi, double omega_guess,
                             double width_guess, std::size_t points) {
  if (points < 5 || !(width_guess > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fit_lorentzian needs >= 5 points and width > 0");
  }
  auto sample = [&](double lo, double hi) {
    std::vector<ChiSample> s(points);
    for (std::size_t i = 0; i < points; ++i) {
      const double w = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
      s[i] = {w, chi(w)};
    }
    return s;
  };

  const auto coarse = locate_peak(sample(omega_guess - 10.0 * width_guess,
                                         omega_guess + 10.0 * width_guess)).fit;
  const auto fine_samples = sample(coarse.peak - 3.0 * coarse.width, coarse.peak + 3.0 * coarse.width);
  const auto fine = locate_peak(fine_samples);

  auto level = [&](double w) { return std::log(std::norm(chi(w))) - fine.half_level; };
  auto bisect = [&](double a, double b) {
    double fa = level(a);
    for (int it = 0; it < 100 && b - a > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(b); ++it) {
      const double mid = 0.5 * (a + b);
      const double fm = level(mid);
      if ((fm > 0.0) == (fa > 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };
  const double left = bisect(fine_samples[fine.left].omega, fine_samples[fine.left + 1].omega);
  const double right = bisect(fine_samples[fine.right - 1].omega, fine_samples[fine.right].omega);

  LorentzianFit out;
  out.peak = fine.fit.peak;
  out.width = right - left;
  out.interpolation_error =
      std::max(std::abs(coarse.peak - out.peak), std::abs(fine.fit.width - out.width));
  return out;
}

double thermal_spectrum(double omega, double T, const SystemParams& p) {
  if (omega == 0.0) throw Error(ErrorCode::kInvalidArgument, "thermal spectrum needs omega != 0");
  const double x = PhysicalConstants::hbar * omega / (2.0 * PhysicalConstants::k_B * T);
  const double coth = 1.0 / std::tanh(x);
  return p.Gamma_m / (2.0 * p.omega_m()) * omega * (1.0 + coth);
}

}  // namespace optomech
