#pragma once

// Physical parameters of the waveguide + cascade emitter + control cavity,
// the cosine band of the coupled-cavity array, and the detuning algebra.
//
// Units: every frequency and coupling is expressed in units of g_a, with
// hbar = 1 and unit lattice spacing. The ground level |1> sits at energy 0.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wqed {

struct ModelParams {
  double omega_a = 0.0;  // waveguide cavity frequency (all a_j)
  double omega_b = 0.0;  // control cavity mode b
  double omega_2 = 0.0;  // level |2>
  double omega_3 = 0.0;  // level |3>
  double xi = 1.0;       // nearest-neighbour hopping
  double g_a = 1.0;      // |1>-|2> coupling to a_0
  double g_b = 0.0;      // |2>-|3> coupling to b
  int n = 0;             // b-mode photons in the initial state

  [[nodiscard]] double omega_32() const { return omega_3 - omega_2; }
  /// delta_b = omega_32 - omega_b.
  [[nodiscard]] double delta_b() const { return omega_32() - omega_b; }
  /// g_b^2 n, the squared collective coupling of |2,n> <-> |3,n-1>.
  [[nodiscard]] double gb2n() const { return g_b * g_b * static_cast<double>(n); }

  /// Throws Error(InvalidParams) unless g_a > 0, g_b >= 0, xi > 0, n >= 0
  /// and every field is finite.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

/// Flat JSON object with exactly the field names of ModelParams. Parsing
/// rejects unknown keys and validates the result; missing keys keep defaults.
std::string to_json(const ModelParams& params);
ModelParams params_from_json(std::string_view text);

/// Reduces k into the principal domain (-pi, pi].
double reduce_momentum(double k);

/// Photon band: omega_a - 2 xi cos k.
double dispersion(const ModelParams& params, double k);

/// Momentum in [0, pi] with dispersion(k) == omega, or nullopt when omega
/// lies outside [omega_a - 2 xi, omega_a + 2 xi].
std::optional<double> invert_dispersion(const ModelParams& params, double omega);

/// All momenta in (-pi, pi] whose band energy equals omega, ascending.
std::vector<double> momenta_at_energy(const ModelParams& params, double omega);

// A single incoming momentum together with the quantities every scattering
// formula needs. Build through make_point; the fields are consistent with the
// ModelParams used to create it.
struct ScatteringPoint {
  double k = 0.0;        // (-pi, pi]
  double Omega_k = 0.0;  // band energy
  double E = 0.0;        // n omega_b + Omega_k
  double delta_a = 0.0;  // omega_2 - Omega_k
  double delta_b = 0.0;  // omega_32 - omega_b

  bool operator==(const ScatteringPoint&) const = default;
};

ScatteringPoint make_point(const ModelParams& params, double k);

/// True when the point matches make_point(params, point.k) to within a
/// relative tolerance of 1e-12.
bool is_consistent(const ModelParams& params, const ScatteringPoint& point);

struct RwaReport {
  double ratio = 0.0;  // g_b sqrt(n) / min(omega_2, omega_3)
  bool valid = true;
};

inline constexpr double kRwaThreshold = 0.1;

/// Report-only check of g_b sqrt(n) << {omega_2, omega_3}. A non-positive
/// level energy with n > 0 yields an infinite ratio.
RwaReport rwa_validity(const ModelParams& params);

}  // namespace wqed
