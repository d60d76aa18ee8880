#pragma once

// Closed-form single-photon scattering off the emitter cell at site 0.
//
// With S = delta_a + delta_b and D = delta_a S - g_b^2 n the amplitudes are
//
//   r = -g_a^2 S / (2 i xi D sin k + g_a^2 S)
//   t =  2 i xi D sin k / (2 i xi D sin k + g_a^2 S)
//
// and t = 1 + r. They are evaluated directly rather than through the
// effective potential V, so a dressed resonance (V -> infinity) gives the
// finite limit r = -1, t = 0.

#include <complex>
#include <optional>
#include <string_view>
#include <vector>

#include "wqed/model.hpp"

namespace wqed {

enum class Branch { Generic, TwoLevelN0, BandEdge, FullTransmission, FullReflection };

std::string_view to_string(Branch branch);

struct ScatteringResult {
  std::complex<double> r;
  std::complex<double> t;
  double R = 0.0;  // |r|^2
  double T = 0.0;  // |t|^2
  Branch branch = Branch::Generic;
};

/// Builds a result whose R and T are |r|^2 and |t|^2 of the given amplitudes.
ScatteringResult make_result(std::complex<double> r, std::complex<double> t, Branch branch);

inline constexpr double kPoleTolerance = 1e-12;      // |denominator of V|, g_a^2 units
inline constexpr double kBandEdgeTolerance = 1e-12;  // |sin k|
inline constexpr double kLocusTolerance = 1e-12;     // relative, for branch tags

/// Effective potential V seen by the photon at site 0. nullopt is the pole
/// marker: the denominator vanishes (delta_+ or delta_- = 0).
std::optional<double> effective_potential(const ModelParams& params, const ScatteringPoint& point);

/// Reflection and transmission amplitudes.
///
/// When g_b^2 n = 0 the upper level cannot participate and the common factor
/// (delta_a + delta_b) is cancelled, giving the two-level forms
/// r = -g_a^2 / (2 i xi delta_a sin k + g_a^2). At sin k = 0 the result is the
/// band-edge limit r = -1, t = 0 unless the remaining denominator g_a^2 S also
/// vanishes, which throws DegenerateBandEdge. Inconsistent points throw
/// InvalidPoint.
ScatteringResult scattering_amplitudes(const ModelParams& params, const ScatteringPoint& point);

// ---- resonance conditions -------------------------------------------------

/// delta_a + delta_b; full transmission for n >= 1 when it vanishes.
double transmission_residual(const ScatteringPoint& point);

/// delta_a (delta_a + delta_b) - g_b^2 n; full reflection when it vanishes.
/// For n = 0 this is delta_a (delta_a + delta_b), which vanishes exactly when
/// delta_a does on the two-level branch, so n = 0 uses delta_a alone.
double reflection_residual(const ModelParams& params, const ScatteringPoint& point);

/// Requires n >= 1 (throws RequiresControlPhotons).
bool is_full_transmission(const ModelParams& params, const ScatteringPoint& point,
                          double tol = kLocusTolerance);

/// All k in (-pi, pi] with delta_a + delta_b = 0 at the params' delta_b.
/// Requires n >= 1; throws NoInBandSolution when the required band energy
/// omega_2 + delta_b lies outside the band.
std::vector<double> full_transmission_momenta(const ModelParams& params);

bool is_full_reflection(const ModelParams& params, const ScatteringPoint& point,
                        double tol = kLocusTolerance);

/// g_b^2 n needed for full reflection at this point: delta_a (delta_a + delta_b).
/// nullopt when that product is negative (no physical coupling reaches it).
std::optional<double> full_reflection_coupling(const ScatteringPoint& point);

/// All k in (-pi, pi] on the full-reflection locus, ascending. For n = 0 this
/// is delta_a = 0; otherwise delta_a = (-delta_b +- sqrt(delta_b^2 + 4 g_b^2 n)) / 2.
std::vector<double> full_reflection_momenta(const ModelParams& params);

}  // namespace wqed
