#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "optomech/model.hpp"
#include "optomech/numeric_types.hpp"
#include "optomech/polynomial.hpp"
#include "optomech/small_matrix.hpp"

namespace optomech {

enum class BranchLabel { kPlus, kMinus, kZero };

[[nodiscard]] std::string_view to_string(BranchLabel label);

/// omega^3 + l1 omega^2 + l2 omega + l3.
struct CubicCoefficients {
  Complex l1;
  Complex l2;
  Complex l3;
};

struct SupermodeSpectrum {
  std::array<Complex, 3> omegas;
  std::array<BranchLabel, 3> labels{BranchLabel::kPlus, BranchLabel::kMinus, BranchLabel::kZero};
  CubicCoefficients lambda;

  /// Orders the roots as {plus, minus, zero}: zero is the root nearest
  /// omega_ref, plus/minus the others by descending real part (ties by
  /// descending imaginary part). lambda is rebuilt from the roots.
  static SupermodeSpectrum from_roots(const std::array<Complex, 3>& roots, double omega_ref);

  [[nodiscard]] Complex at(BranchLabel label) const;
};

/// Below the optical EP2 (kappa < 2J - gamma) the pair splits in frequency,
/// above it in linewidth.
enum class Regime { kBelowEp, kAboveEp };

[[nodiscard]] std::string_view to_string(Regime regime);

/// Regime from the sign of J^2 - ((kappa + gamma)/2)^2.
[[nodiscard]] Regime regime_of(const SystemParams& params);

[[nodiscard]] CubicCoefficients cubic_coeffs(const SystemParams& params, Complex G);

/// The 3x3 matrix whose characteristic polynomial det(wI - M) is the
/// supermode cubic, in the basis (a1, a2, b).
[[nodiscard]] ComplexMatrix supermode_matrix(const SystemParams& params, Complex G);

/// Roots of the supermode cubic. For G == 0 the mechanical root is deflated
/// and the optical pair comes from the two-mode closed form.
[[nodiscard]] SupermodeSpectrum spectrum_exact(const SystemParams& params, Complex G);

/// Which far-off-resonance formulas to use.
///   kPerturbative: two-mode closed form plus second-order |G|^2 shifts,
///     error O(|G|^4).
///   kPrinted: the printed closed forms, kept for comparison; their |G|^2
///     terms are not the perturbative ones.
enum class AsymptoticForm { kPerturbative, kPrinted };

/// Radicand of the optical half-splitting: J^2 - ((kappa+gamma)/2)^2, or the
/// printed gamma^2 - ((kappa+gamma)/2)^2 (identical at J = gamma).
enum class RootForm { kCoupling, kPrintedGamma };

struct AsymptoticOptions {
  std::optional<Regime> regime;  // from regime_of when unset
  AsymptoticForm form = AsymptoticForm::kPerturbative;
  RootForm root = RootForm::kCoupling;
  /// |G|^2 / (Delta + omega_m)^2 above this throws kRegimeViolation.
  double max_coupling_ratio = 0.1;
};

[[nodiscard]] SupermodeSpectrum spectrum_asymptotic(const SystemParams& params, Complex G,
                                                    const AsymptoticOptions& options = {});

struct SplittingResult {
  double delta_omega = 0.0;  // Re(omega_+ - omega_-), rad/s
  double delta_gamma = 0.0;  // Im(omega_+ - omega_-), rad/s
  Regime regime = Regime::kBelowEp;
};

/// Two-mode closed form at G == 0; the asymptotic pair otherwise.
/// Throws kRegimeViolation if an explicit regime contradicts the radicand sign.
[[nodiscard]] SplittingResult splitting(const SystemParams& params, Complex G,
                                        const AsymptoticOptions& options = {});

struct EpTolerances {
  double ep2 = 1e-3;  // units of gamma
  double ep3 = 1e-2;
};

struct EpClassification {
  int order = 1;
  std::optional<std::pair<BranchLabel, BranchLabel>> coalescing_pair;
  double min_separation = 0.0;  // rad/s
  double max_separation = 0.0;  // rad/s
  Complex depressed_p;
  Complex depressed_q;
  Complex discriminant;
};

[[nodiscard]] EpClassification classify_ep(const SupermodeSpectrum& spectrum,
                                           const SystemParams& params,
                                           const EpTolerances& tolerances = {});

enum class SpectrumAxis { kKappa, kDelta, kJ };

[[nodiscard]] std::string_view to_string(SpectrumAxis axis);

/// Params with the axis quantity (rad/s) replaced.
[[nodiscard]] SystemParams with_axis(const SystemParams& params, SpectrumAxis axis, double value);

/// How G is obtained at each sweep point.
struct GPolicy {
  bool self_consistent = true;
  Complex fixed_G;

  static GPolicy from_steady_state() { return {}; }
  static GPolicy fixed(Complex G) { return {false, G}; }
};

[[nodiscard]] Complex resolve_G(const SystemParams& params, const GPolicy& policy);

/// Pair: minimize the smallest pairwise separation (EP2).
/// Triple: minimize the largest pairwise separation (EP3).
enum class CoalescenceMode { kPair, kTriple };

[[nodiscard]] double coalescence_measure(const SupermodeSpectrum& spectrum, CoalescenceMode mode);

struct EpLocation {
  double value = 0.0;    // axis value at the minimum, rad/s
  double measure = 0.0;  // coalescence measure there, rad/s
  SupermodeSpectrum spectrum;
  EpClassification classification;
};

struct LocateOptions {
  CoalescenceMode mode = CoalescenceMode::kPair;
  int coarse_points = 64;
  /// Golden-section stops when the bracket is below this times gamma.
  double tolerance = 1e-10;
  EpTolerances ep;
};

/// Coarse scan for an interior minimum of the coalescence measure, then
/// golden-section refinement. Throws kNoMinimumInBracket when the scan
/// minimum sits on the bracket edge.
[[nodiscard]] EpLocation locate_ep(const SystemParams& params, SpectrumAxis axis,
                                   std::pair<double, double> bracket, const GPolicy& policy,
                                   const LocateOptions& options = {});

struct SpectrumRow {
  double axis_value = 0.0;
  SupermodeSpectrum spectrum;
  EpClassification ep;
};

/// One spectrum per grid point, computed concurrently, then relabelled in
/// grid order so each label follows a continuous branch.
[[nodiscard]] std::vector<SpectrumRow> sweep_spectrum(const SystemParams& params,
                                                      SpectrumAxis axis,
                                                      const std::vector<double>& grid,
                                                      const GPolicy& policy,
                                                      const EpTolerances& tolerances = {});

}  // namespace optomech
