#pragma once

// Property suites behind `wqed verify`: unitarity, bare/dressed equivalence,
// resonance-condition equivalence and agreement with the lattice oracles.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "wqed/model.hpp"

namespace wqed {

struct RandomCase {
  ModelParams params;
  double k = 0.0;
};

// Draws parameter points away from the band edge (|sin k| >= 0.05).
class CaseSampler {
 public:
  explicit CaseSampler(std::uint64_t seed) : rng_(seed) {}

  RandomCase any();          // n in [0, 40], g_b in [0, 3]
  RandomCase with_photons(); // n >= 1, g_b >= 0.2, so the dressed doublet is defined

 private:
  double uniform(double lo, double hi);
  double momentum();

  std::mt19937_64 rng_;
};

struct WavepacketSpot {
  std::string name;
  ModelParams params;
  double k0 = 0.0;
};

/// delta_b in (-0.8, 0.45) where the fig3a preset has |t|^2 = 1/2, found by
/// bisection between its full-transmission and full-reflection points.
double fig3a_half_transmission_delta_b();

/// Full transmission (fig2a, k0 = 2 pi / 3), full reflection (n = 0, xi = 1,
/// delta_a = 0 at k0 = pi / 2) and the fig3a half-transmission point.
std::vector<WavepacketSpot> wavepacket_spots();

struct VerifyOptions {
  std::uint64_t seed = 20121;
  int unitarity_points = 100000;
  int equivalence_points = 10000;
  int condition_points = 2000;
  int oracle_points = 100;
  bool with_wavepacket = false;
};

struct SuiteResult {
  std::string name;
  long checked = 0;
  long failed = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;

  [[nodiscard]] bool passed() const { return failed == 0 && checked > 0; }
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<SuiteResult> suites;

  [[nodiscard]] bool all_passed() const;
};

VerifyReport run_verification(const VerifyOptions& options);
void print_report(const VerifyReport& report, std::ostream& out);

}  // namespace wqed
