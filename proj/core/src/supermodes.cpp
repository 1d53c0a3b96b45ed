#include "optomech/supermodes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "optomech/branch_tracking.hpp"
#include "optomech/error.hpp"
#include "optomech/parallel.hpp"
#include "optomech/steady_state.hpp"

namespace optomech {
namespace {

const Complex kI{0.0, 1.0};

double radicand(const SystemParams& p, RootForm form) {
  const double half = 0.5 * (p.kappa() + p.gamma);
  const double r = form == RootForm::kCoupling ? p.J() : p.gamma;
  return r * r - half * half;
}

// Two-mode roots {plus, minus}: -Delta + i(gamma - kappa)/2 +/- sqrt(radicand).
std::array<Complex, 2> optical_pair(const SystemParams& p, RootForm form) {
  const Complex center{-p.Delta(), 0.5 * (p.gamma - p.kappa())};
  const double r = radicand(p, form);
  const Complex s = r >= 0.0 ? Complex{std::sqrt(r), 0.0} : Complex{0.0, std::sqrt(-r)};
  return {center + s, center - s};
}

}  // namespace

std::string_view to_string(BranchLabel label) {
  switch (label) {
    case BranchLabel::kPlus: return "plus";
    case BranchLabel::kMinus: return "minus";
    case BranchLabel::kZero: return "zero";
  }
  return "?";
}

std::string_view to_string(Regime regime) {
  return regime == Regime::kBelowEp ? "below_EP" : "above_EP";
}

std::string_view to_string(SpectrumAxis axis) {
  switch (axis) {
    case SpectrumAxis::kKappa: return "kappa";
    case SpectrumAxis::kDelta: return "Delta";
    case SpectrumAxis::kJ: return "J";
  }
  return "?";
}

SupermodeSpectrum SupermodeSpectrum::from_roots(const std::array<Complex, 3>& roots,
                                                double omega_ref) {
  std::size_t zero = 0;
  for (std::size_t k = 1; k < 3; ++k) {
    if (std::abs(roots[k] - omega_ref) < std::abs(roots[zero] - omega_ref)) zero = k;
  }
  std::array<Complex, 2> rest;
  std::size_t j = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    if (k != zero) rest[j++] = roots[k];
  }
  const double tie = 1e-12 * std::max({1.0, std::abs(rest[0]), std::abs(rest[1])});
  const bool swap = std::abs(rest[0].real() - rest[1].real()) <= tie
                        ? rest[1].imag() > rest[0].imag()
                        : rest[1].real() > rest[0].real();
  if (swap) std::swap(rest[0], rest[1]);

  SupermodeSpectrum s;
  s.omegas = {rest[0], rest[1], roots[zero]};
  const auto& w = s.omegas;
  s.lambda = {-(w[0] + w[1] + w[2]), w[0] * w[1] + w[0] * w[2] + w[1] * w[2],
              -(w[0] * w[1] * w[2])};
  return s;
}

Complex SupermodeSpectrum::at(BranchLabel label) const {
  for (std::size_t k = 0; k < 3; ++k) {
    if (labels[k] == label) return omegas[k];
  }
  throw Error(ErrorCode::kInvalidArgument, "label not present in spectrum");
}

Regime regime_of(const SystemParams& params) {
  return radicand(params, RootForm::kCoupling) > 0.0 ? Regime::kBelowEp : Regime::kAboveEp;
}

CubicCoefficients cubic_coeffs(const SystemParams& p, Complex G) {
  const double D = p.Delta();
  const double k = p.kappa();
  const double g = p.gamma;
  const double J = p.J();
  const double wm = p.omega_m();
  const double G2 = std::norm(G);
  CubicCoefficients c;
  c.l1 = Complex{2.0 * D - wm, k - g};
  c.l2 = Complex{-2.0 * D, g - k} * wm + D * D + kI * (k - g) * D + k * g - G2 - J * J;
  c.l3 = (J * J - D * D - kI * (k - g) * D - k * g) * wm + G2 * Complex{-D, -k};
  return c;
}

ComplexMatrix supermode_matrix(const SystemParams& p, Complex G) {
  const double D = p.Delta();
  return ComplexMatrix{{Complex{-D, -p.kappa()}, -p.J(), 0.0},
                       {-p.J(), Complex{-D, p.gamma}, G},
                       {0.0, std::conj(G), p.omega_m()}};
}

SupermodeSpectrum spectrum_exact(const SystemParams& params, Complex G) {
  const auto c = cubic_coeffs(params, G);
  SupermodeSpectrum s;
  if (G == Complex{}) {
    const auto pair = optical_pair(params, RootForm::kCoupling);
    s = SupermodeSpectrum::from_roots({pair[0], pair[1], Complex{params.omega_m()}},
                                      params.omega_m());
  } else {
    const auto roots = solve_cubic_cardano(c.l1, c.l2, c.l3);
    s = SupermodeSpectrum::from_roots(roots.roots, params.omega_m());
  }
  s.lambda = c;
  return s;
}

SupermodeSpectrum spectrum_asymptotic(const SystemParams& p, Complex G,
                                      const AsymptoticOptions& options) {
  const double G2 = std::norm(G);
  const double D = p.Delta();
  const double wm = p.omega_m();
  const double k = p.kappa();
  const double g = p.gamma;
  const double offset = D + wm;
  if (G2 > 0.0 && !(G2 <= options.max_coupling_ratio * offset * offset)) {
    throw Error(ErrorCode::kRegimeViolation,
                "|G|^2/(Delta+omega_m)^2 exceeds " + std::to_string(options.max_coupling_ratio));
  }
  const Regime regime = options.regime.value_or(regime_of(p));

  std::array<Complex, 3> w;
  if (options.form == AsymptoticForm::kPrinted) {
    const double r = std::sqrt(std::abs(radicand(p, options.root)));
    const double s3 = std::sqrt(3.0);
    w[2] = wm;
    if (regime == Regime::kBelowEp) {
      const double shift = G2 > 0.0 ? s3 * G2 * (k - g) / (2.0 * offset * offset) : 0.0;
      w[0] = Complex{offset + r - shift, 0.5 * (k - g)};
      w[1] = Complex{offset - r + shift, 0.5 * (k - g)};
    } else {
      const double shift = G2 > 0.0 ? s3 * G2 / (2.0 * offset) : 0.0;
      w[0] = Complex{offset, r + 0.5 * (k - g) + shift};
      w[1] = Complex{offset, -(r - 0.5 * (k - g) - shift)};
    }
  } else {
    const auto pair = optical_pair(p, options.root);
    w = {pair[0], pair[1], Complex{wm}};
    if (G2 > 0.0) {
      auto Q = [&](Complex x) { return (x + D + kI * k) * (x + D - kI * g) - p.J() * p.J(); };
      w[2] = wm + G2 * (wm + D + kI * k) / Q(Complex{wm});
      for (int j = 0; j < 2; ++j) {
        const Complex dQ = 2.0 * (pair[j] + D) + kI * (k - g);
        if (dQ == Complex{}) {
          throw Error(ErrorCode::kRegimeViolation, "optical pair is degenerate (EP2)");
        }
        w[j] = pair[j] + G2 * (pair[j] + D + kI * k) / ((pair[j] - wm) * dQ);
      }
    }
  }

  SupermodeSpectrum s;
  s.omegas = w;
  s.lambda = cubic_coeffs(p, G);
  return s;
}

SplittingResult splitting(const SystemParams& p, Complex G, const AsymptoticOptions& options) {
  const double r = radicand(p, options.root);
  const Regime natural = r > 0.0 ? Regime::kBelowEp : Regime::kAboveEp;
  const Regime regime = options.regime.value_or(natural);
  if (regime != natural && r != 0.0) {
    throw Error(ErrorCode::kRegimeViolation, "requested regime contradicts the radicand sign");
  }
  SplittingResult out;
  out.regime = regime;
  if (G == Complex{} || options.form == AsymptoticForm::kPerturbative) {
    if (G == Complex{}) {
      // Two-mode closed form.
      if (regime == Regime::kBelowEp) {
        out.delta_omega = 2.0 * std::sqrt(std::max(r, 0.0));
      } else {
        out.delta_gamma = 2.0 * std::sqrt(std::max(-r, 0.0));
      }
      return out;
    }
    AsymptoticOptions o = options;
    o.regime = regime;
    const auto s = spectrum_asymptotic(p, G, o);
    out.delta_omega = (s.omegas[0] - s.omegas[1]).real();
    out.delta_gamma = (s.omegas[0] - s.omegas[1]).imag();
    return out;
  }
  const double offset = p.Delta() + p.omega_m();
  const double root = 2.0 * std::sqrt(std::abs(r));
  const double s3 = std::sqrt(3.0);
  const double G2 = std::norm(G);
  if (regime == Regime::kBelowEp) {
    out.delta_omega = root - s3 * G2 * (p.kappa() - p.gamma) / (offset * offset);
  } else {
    out.delta_gamma = root + s3 * G2 / offset;
  }
  return out;
}

EpClassification classify_ep(const SupermodeSpectrum& spectrum, const SystemParams& params,
                             const EpTolerances& tolerances) {
  EpClassification out;
  const auto& w = spectrum.omegas;
  constexpr std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  double min_sep = std::numeric_limits<double>::infinity();
  double max_sep = 0.0;
  std::pair<int, int> closest{0, 1};
  for (const auto& [a, b] : pairs) {
    const double d = std::abs(w[a] - w[b]);
    if (d < min_sep) {
      min_sep = d;
      closest = {a, b};
    }
    max_sep = std::max(max_sep, d);
  }
  out.min_separation = min_sep;
  out.max_separation = max_sep;

  const double g = params.gamma;
  if (max_sep <= tolerances.ep3 * g) {
    out.order = 3;
  } else if (min_sep <= tolerances.ep2 * g) {
    out.order = 2;
    out.coalescing_pair = std::pair{spectrum.labels[closest.first], spectrum.labels[closest.second]};
  }

  const auto& l = spectrum.lambda;
  const auto d = depress_cubic(l.l1, l.l2, l.l3);
  out.depressed_p = d.p;
  out.depressed_q = d.q;
  out.discriminant = depressed_discriminant(d);
  return out;
}

SystemParams with_axis(const SystemParams& params, SpectrumAxis axis, double value) {
  switch (axis) {
    case SpectrumAxis::kKappa: return with_kappa(params, value);
    case SpectrumAxis::kDelta: return with_Delta(params, value);
    case SpectrumAxis::kJ: return with_J(params, value);
  }
  return params;
}

Complex resolve_G(const SystemParams& params, const GPolicy& policy) {
  if (!policy.self_consistent) return policy.fixed_G;
  return solve_steady_state(params).G;
}

double coalescence_measure(const SupermodeSpectrum& s, CoalescenceMode mode) {
  const auto& w = s.omegas;
  const double d01 = std::abs(w[0] - w[1]);
  const double d02 = std::abs(w[0] - w[2]);
  const double d12 = std::abs(w[1] - w[2]);
  return mode == CoalescenceMode::kPair ? std::min({d01, d02, d12}) : std::max({d01, d02, d12});
}

EpLocation locate_ep(const SystemParams& params, SpectrumAxis axis,
                     std::pair<double, double> bracket, const GPolicy& policy,
                     const LocateOptions& options) {
  auto [lo, hi] = bracket;
  if (!(hi > lo) || options.coarse_points < 3) {
    throw Error(ErrorCode::kInvalidArgument, "locate_ep needs lo < hi and >= 3 scan points");
  }
  auto measure = [&](double t) {
    const auto p = with_axis(params, axis, t);
    return coalescence_measure(spectrum_exact(p, resolve_G(p, policy)), options.mode);
  };

  const int n = options.coarse_points;
  std::vector<double> grid(static_cast<std::size_t>(n));
  std::vector<double> values(grid.size());
  for (int i = 0; i < n; ++i) {
    grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  }
  parallel_for(grid.size(), [&](std::size_t i) { values[i] = measure(grid[i]); });
  const auto best = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  if (best == 0 || best + 1 == grid.size()) {
    throw Error(ErrorCode::kNoMinimumInBracket,
                "coalescence measure has no interior minimum in [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "]");
  }

  // Golden-section search on the cell pair around the scan minimum.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = grid[best - 1];
  double b = grid[best + 1];
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = measure(c);
  double fd = measure(d);
  const double stop = options.tolerance * params.gamma;
  for (int it = 0; it < 200 && (b - a) > stop; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = measure(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = measure(d);
    }
  }
  double t = 0.5 * (a + b);
  double ft = measure(t);
  // Keep the best point seen; the measure can have a cusp at the minimum.
  for (const auto& [x, fx] : {std::pair{c, fc}, std::pair{d, fd},
                              std::pair{grid[best], values[best]}}) {
    if (fx < ft) {
      t = x;
      ft = fx;
    }
  }

  EpLocation out;
  out.value = t;
  out.measure = ft;
  const auto p = with_axis(params, axis, t);
  out.spectrum = spectrum_exact(p, resolve_G(p, policy));
  out.classification = classify_ep(out.spectrum, p, options.ep);
  return out;
}

std::vector<SpectrumRow> sweep_spectrum(const SystemParams& params, SpectrumAxis axis,
                                        const std::vector<double>& grid, const GPolicy& policy,
                                        const EpTolerances& tolerances) {
  std::vector<SpectrumRow> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const auto p = with_axis(params, axis, grid[i]);
    rows[i].axis_value = grid[i];
    rows[i].spectrum = spectrum_exact(p, resolve_G(p, policy));
  });

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& prev = rows[i - 1].spectrum.omegas;
    auto& next = rows[i].spectrum.omegas;
    const auto sigma = match_branches(prev, next);
    const auto reordered = apply_permutation<Complex>(next, sigma);
    std::copy(reordered.begin(), reordered.end(), next.begin());
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].ep = classify_ep(rows[i].spectrum, with_axis(params, axis, grid[i]), tolerances);
  }
  return rows;
}

}  // namespace optomech
