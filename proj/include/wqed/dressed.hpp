#pragma once

// Dressed-state picture: the b-mode couples |2,n> and |3,n-1> into the
// doublet |Psi_+-> = A_+- |2,n> + B_+- |3,n-1>, so the photon sees an
// effective V-type emitter with couplings g_+- = g_a A_+- and detunings
// delta_+- = delta_a + (delta_b +- sqrt(delta_b^2 + 4 g_b^2 n)) / 2.

#include <optional>

#include "wqed/model.hpp"
#include "wqed/scattering.hpp"

namespace wqed {

struct DressedBasis {
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  double A_plus = 0.0;
  double A_minus = 0.0;
  double B_plus = 0.0;
  double B_minus = 0.0;
  double g_plus = 0.0;
  double g_minus = 0.0;
  // Per-point detunings omega_+- - (Omega_k + n omega_b).
  double delta_plus = 0.0;
  double delta_minus = 0.0;

  /// sqrt(delta_b^2 + 4 g_b^2 n) = omega_+ - omega_- = delta_+ - delta_-.
  [[nodiscard]] double splitting() const { return omega_plus - omega_minus; }
};

/// Throws RequiresControlPhotons for n = 0, and DegenerateDressing when
/// g_b^2 n = 0 and delta_b = 0 (the doublet is degenerate and uncoupled, so
/// the mixing angle is undefined).
///
/// A_+- and B_+- follow the sign convention
///   A_+- = (-delta_b +- s) / N_+-,  B_+- = 2 g_b sqrt(n) / N_+-,
///   N_+- = sqrt(2 s (s -+ delta_b)),  s = sqrt(delta_b^2 + 4 g_b^2 n),
/// evaluated through the equivalent cancellation-free square roots.
DressedBasis dressed_basis(const ModelParams& params, const ScatteringPoint& point);

/// Partial-fraction form -(g_+^2/delta_+ + g_-^2/delta_-); nullopt marks a
/// pole (|delta_+| or |delta_-| below kPoleTolerance).
std::optional<double> effective_potential_dressed(const ModelParams& params,
                                                  const ScatteringPoint& point,
                                                  const DressedBasis& basis);

/// Amplitudes for the effective V-type emitter, with denominators cleared:
///   N = g_+^2 delta_- + g_-^2 delta_+,  P = delta_+ delta_-,
///   r = -N / (2 i xi P sin k + N),  t = 2 i xi P sin k / (2 i xi P sin k + N).
/// A dressed resonance (P = 0) therefore gives r = -1, t = 0.
ScatteringResult scattering_amplitudes_vtype(const ModelParams& params,
                                             const ScatteringPoint& point,
                                             const DressedBasis& basis);

struct ConditionReport {
  // Full reflection: delta_a (delta_a + delta_b) - g_b^2 n vs delta_+ delta_-.
  double reflection_bare = 0.0;
  double reflection_dressed = 0.0;
  bool reflection_bare_holds = false;
  bool reflection_dressed_holds = false;

  // Full transmission: delta_a + delta_b vs g_+^2 delta_- + g_-^2 delta_+,
  // i.e. delta_+ / delta_- = -g_+^2 / g_-^2.
  double transmission_bare = 0.0;
  double transmission_dressed = 0.0;
  bool transmission_bare_holds = false;
  bool transmission_dressed_holds = false;

  // The same-sign ratio form delta_+ / delta_- = +g_+^2 / g_-^2, written as
  // g_-^2 delta_+ - g_+^2 delta_-. Kept for comparison; it is not equivalent
  // to delta_a + delta_b = 0 (delta_+ and delta_- have opposite signs there).
  double same_sign_ratio = 0.0;
  bool same_sign_ratio_holds = false;

  [[nodiscard]] bool reflection_equivalent() const {
    return reflection_bare_holds == reflection_dressed_holds;
  }
  [[nodiscard]] bool transmission_equivalent() const {
    return transmission_bare_holds == transmission_dressed_holds;
  }
};

/// Evaluates the bare and dressed forms of both resonance conditions.
/// Each residual is compared to tol times its natural scale.
ConditionReport condition_equivalence_check(const ModelParams& params,
                                            const ScatteringPoint& point,
                                            double tol = 1e-9);

}  // namespace wqed
