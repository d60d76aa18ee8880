#pragma once

// Lattice oracles for the closed-form amplitudes.
//
// The single-excitation sector of the full Hamiltonian is written in position
// space on sites j = -L..L plus the two emitter states
//   e2 = |2,n>|vac>,  e3 = |3,n-1>|vac>.
// solve_stationary matches plane waves at the chain ends and solves the
// remaining linear system exactly; run_wavepacket launches a Gaussian packet
// and measures where its probability ends up.

#include <complex>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/SparseCore>

#include "wqed/model.hpp"

namespace wqed {

struct LatticeProblem {
  ModelParams params;
  int half_length = 25;  // L
  // Drops the a_0 <-> e2 bond, leaving a free chain (reference runs only).
  bool decoupled_emitter = false;

  [[nodiscard]] int dimension() const { return 2 * half_length + 3; }
  [[nodiscard]] int site_index(int j) const { return j + half_length; }
  [[nodiscard]] int e2_index() const { return 2 * half_length + 1; }
  [[nodiscard]] int e3_index() const { return 2 * half_length + 2; }
};

/// Real symmetric Hamiltonian of the single-excitation sector. The photon
/// diagonal is omega_a + n omega_b, e2 sits at omega_2 + n omega_b and e3 at
/// omega_3 + (n-1) omega_b; bonds are -xi, a_0-e2 is g_a, e2-e3 is g_b sqrt(n)
/// (left out entirely when zero). Requires L >= 2.
Eigen::SparseMatrix<double> build_hamiltonian(const LatticeProblem& problem);

struct StationarySolution {
  int half_length = 0;
  std::vector<std::complex<double>> alpha;  // alpha[j + L]
  std::complex<double> beta;
  std::complex<double> zeta;
  std::complex<double> r_fit;
  std::complex<double> t_fit;
  double max_residual = 0.0;  // max |(E - H) psi| over the imposed rows

  [[nodiscard]] std::complex<double> alpha_at(int j) const {
    return alpha[static_cast<std::size_t>(j + half_length)];
  }
};

inline constexpr double kStationarySinTolerance = 1e-8;

/// Stationary scattering state at E = n omega_b + Omega_k with unit incoming
/// amplitude from the left. Requires L >= 10. Throws BandEdge for
/// |sin k| < kStationarySinTolerance and SingularSystem when the linear system
/// is numerically singular.
StationarySolution solve_stationary(const LatticeProblem& problem, double k);

struct WavepacketSpec {
  ModelParams params;
  bool decoupled_emitter = false;
  double k0 = 0.0;
  double sigma = 15.0;                  // spatial width in sites
  int half_length = 1000;               // chain of 2L + 1 sites
  std::optional<int> j0;                // default: launched 6 sigma + 30 sites upstream
  std::optional<double> dt;             // default 0.02 / xi
  std::optional<double> t_final;        // default from the group velocity, +20%
  int buffer = 10;                      // |j| <= buffer counts as "at the scatterer"
  int record_every = 50;                // steps between recorded samples
};

struct WavepacketSample {
  double time = 0.0;
  double norm = 0.0;
  double p_left = 0.0;       // sites j < -buffer
  double p_right = 0.0;      // sites j > buffer
  double p_scatterer = 0.0;  // sites |j| <= buffer
  double beta2 = 0.0;
  double zeta2 = 0.0;
};

struct WavepacketRun {
  int chain_length = 0;
  double k0 = 0.0;
  double sigma = 0.0;
  int j0 = 0;
  double dt = 0.0;
  double t_final = 0.0;
  int steps = 0;
  std::vector<WavepacketSample> record;

  double T_measured = 0.0;  // probability past the scatterer, downstream side
  double R_measured = 0.0;  // probability back on the launch side
  double residual = 0.0;    // p_scatterer + |beta|^2 + |zeta|^2 at t_final
  double max_norm_drift = 0.0;
  double max_zeta_abs = 0.0;
};

inline constexpr double kEdgeProbabilityThreshold = 1e-6;

/// Crank-Nicolson evolution of a Gaussian packet
///   alpha_j ~ exp(-(j - j0)^2 / (4 sigma^2) + i k0 j),  beta = zeta = 0.
/// Requires sigma >= 8, 2L + 1 >= 20 sigma, 0 < |k0| < pi and |sin k0| >= 0.2
/// (InvalidRunSpec otherwise). Throws BoundaryContamination as soon as the
/// five outermost sites at either end hold more than 1e-6.
WavepacketRun run_wavepacket(const WavepacketSpec& spec);

/// Columns: time,norm,P_left,P_right,P_scatterer,|beta|^2,|zeta|^2.
void write_wavepacket_csv(const WavepacketRun& run, std::ostream& out);

}  // namespace wqed
