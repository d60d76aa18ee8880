#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "wqed/error.hpp"
#include "wqed/oracle.hpp"
#include "wqed/scattering.hpp"
#include "wqed/sweep.hpp"
#include "wqed/verify.hpp"

using namespace wqed;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;
const cd kI{0.0, 1.0};

ErrorCode error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidParams;
}

ModelParams fig2(int n, double delta_b) {
  ModelParams p = preset("fig2a")->base;
  p.n = n;
  p.omega_3 = p.omega_2 + p.omega_b + delta_b;
  return p;
}

}  // namespace

TEST_CASE("hamiltonian structure") {
  ModelParams p = fig2(3, -1.0);
  p.g_a = 0.7;
  const LatticeProblem prob{p, 6};
  const auto h = build_hamiltonian(prob);
  const Eigen::MatrixXd d(h);
  REQUIRE(d.rows() == prob.dimension());
  CHECK((d - d.transpose()).norm() == 0.0);

  for (int j = -6; j <= 6; ++j) {
    CHECK(d(prob.site_index(j), prob.site_index(j)) == p.omega_a + 3 * p.omega_b);
    if (j < 6) CHECK(d(prob.site_index(j), prob.site_index(j + 1)) == -2.0);
  }
  CHECK(d(prob.site_index(-6), prob.site_index(6)) == 0.0);  // open chain
  CHECK(d(prob.e2_index(), prob.e2_index()) == p.omega_2 + 3 * p.omega_b);
  CHECK(d(prob.e3_index(), prob.e3_index()) == p.omega_3 + 2 * p.omega_b);
  CHECK(d(prob.site_index(0), prob.e2_index()) == 0.7);
  CHECK(d(prob.e2_index(), prob.e3_index()) == doctest::Approx(std::sqrt(3.0)));
  CHECK(d.row(prob.e2_index()).cwiseAbs().sum() ==
        doctest::Approx(std::abs(d(prob.e2_index(), prob.e2_index())) + 0.7 + std::sqrt(3.0)));

  SUBCASE("no control photons leaves e3 isolated") {
    const LatticeProblem empty{fig2(0, -1.0), 6};
    const Eigen::MatrixXd e(build_hamiltonian(empty));
    const int i3 = empty.e3_index();
    CHECK(e.row(i3).cwiseAbs().sum() == doctest::Approx(std::abs(e(i3, i3))));
  }
  SUBCASE("decoupled emitter drops the a_0 bond") {
    LatticeProblem off{p, 6, true};
    const Eigen::MatrixXd e(build_hamiltonian(off));
    CHECK(e(off.site_index(0), off.e2_index()) == 0.0);
  }
  CHECK(error_of([&] { build_hamiltonian(LatticeProblem{p, 1}); }) == ErrorCode::InvalidRunSpec);
}

TEST_CASE("stationary solve reproduces the plane-wave ansatz") {
  const ModelParams p = fig2(1, -3.0);
  const double k = 1.1;
  const StationarySolution sol = solve_stationary(LatticeProblem{p, 25}, k);
  const ScatteringResult exact = scattering_amplitudes(p, make_point(p, k));
  CHECK(std::abs(sol.r_fit - exact.r) < 1e-12);
  CHECK(std::abs(sol.t_fit - exact.t) < 1e-12);
  CHECK(sol.max_residual < 1e-12);
  double worst = 0.0;
  for (int j = -25; j <= -1; ++j) {
    worst = std::max(worst, std::abs(sol.alpha_at(j) - (std::exp(kI * (k * j)) + exact.r * std::exp(-kI * (k * j)))));
  }
  for (int j = 0; j <= 25; ++j) {
    worst = std::max(worst, std::abs(sol.alpha_at(j) - exact.t * std::exp(kI * (k * j))));
  }
  CHECK(worst < 1e-11);

  // Emitter amplitudes from the emitter rows of the Hamiltonian.
  const ScatteringPoint pt = make_point(p, k);
  const double s = pt.delta_a + pt.delta_b;
  const cd beta = -p.g_a * exact.t * s / (pt.delta_a * s - p.gb2n());
  CHECK(std::abs(sol.beta - beta) < 1e-11);
  CHECK(std::abs(sol.zeta + p.g_b * std::sqrt(p.n) * sol.beta / s) < 1e-11);
}

TEST_CASE("stationary limits") {
  SUBCASE("fig2a at 2 pi / 3 transmits") {
    const StationarySolution sol = solve_stationary(LatticeProblem{fig2(1, 0.0), 25}, 2 * kPi / 3);
    CHECK(std::norm(sol.t_fit) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("no control photons at delta_a = 0 reflects, e3 stays empty") {
    const StationarySolution sol = solve_stationary(LatticeProblem{fig2(0, -3.0), 25}, 2 * kPi / 3);
    CHECK(std::norm(sol.r_fit) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.zeta == cd{0.0, 0.0});
  }
  SUBCASE("decoupled emitter is invisible") {
    const StationarySolution sol = solve_stationary(LatticeProblem{fig2(1, 0.0), 25, true}, 0.7);
    CHECK(std::abs(sol.r_fit) < 1e-13);
    CHECK(std::abs(sol.t_fit - 1.0) < 1e-13);
  }
  SUBCASE("result does not depend on chain length") {
    const ModelParams p = fig2(4, 0.5);
    const auto a = solve_stationary(LatticeProblem{p, 10}, -2.2);
    const auto b = solve_stationary(LatticeProblem{p, 60}, -2.2);
    CHECK(std::abs(a.r_fit - b.r_fit) < 1e-12);
  }
}

TEST_CASE("stationary oracle on random points") {
  CaseSampler sampler(101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const RandomCase c = sampler.any();
    const ScatteringResult exact = scattering_amplitudes(c.params, make_point(c.params, c.k));
    const StationarySolution sol = solve_stationary(LatticeProblem{c.params, 25}, c.k);
    worst = std::max({worst, std::abs(sol.r_fit - exact.r), std::abs(sol.t_fit - exact.t)});
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("stationary preconditions") {
  const ModelParams p = fig2(1, 0.0);
  CHECK(error_of([&] { solve_stationary(LatticeProblem{p, 25}, 0.0); }) == ErrorCode::BandEdge);
  CHECK(error_of([&] { solve_stationary(LatticeProblem{p, 25}, kPi); }) == ErrorCode::BandEdge);
  CHECK(error_of([&] { solve_stationary(LatticeProblem{p, 9}, 1.0); }) == ErrorCode::InvalidRunSpec);
}

TEST_CASE("wavepacket: free propagation") {
  WavepacketSpec spec;
  spec.params = fig2(1, 0.0);
  spec.decoupled_emitter = true;
  spec.k0 = 1.3;
  spec.half_length = 400;
  const WavepacketRun run = run_wavepacket(spec);
  CHECK(run.T_measured == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(run.R_measured < 1e-6);
  CHECK(run.max_norm_drift < 1e-9);
  CHECK(run.j0 < 0);

  SUBCASE("left-moving packet starts on the right") {
    spec.k0 = -1.3;
    const WavepacketRun back = run_wavepacket(spec);
    CHECK(back.j0 > 0);
    CHECK(back.T_measured == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("wavepacket: reference spots") {
  for (const WavepacketSpot& spot : wavepacket_spots()) {
    CAPTURE(spot.name);
    WavepacketSpec spec;
    spec.params = spot.params;
    spec.k0 = spot.k0;
    const WavepacketRun run = run_wavepacket(spec);
    const double t = scattering_amplitudes(spot.params, make_point(spot.params, spot.k0)).T;
    CHECK(std::abs(run.T_measured - t) <= 0.03);
    CHECK(std::abs(run.T_measured + run.R_measured + run.residual - 1.0) < 1e-9);
    CHECK(run.residual < 1e-3);
    CHECK(run.max_norm_drift < 1e-9);
    if (spot.params.n == 0) CHECK(run.max_zeta_abs == 0.0);
  }
}

TEST_CASE("wavepacket: wider packets approach the stationary value") {
  const WavepacketSpot spot = wavepacket_spots().back();
  const double t = scattering_amplitudes(spot.params, make_point(spot.params, spot.k0)).T;
  double previous = 1.0;
  for (double sigma : {8.0, 15.0, 30.0}) {
    WavepacketSpec spec;
    spec.params = spot.params;
    spec.k0 = spot.k0;
    spec.sigma = sigma;
    const double err = std::abs(run_wavepacket(spec).T_measured - t);
    CAPTURE(sigma);
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("wavepacket: run specification") {
  WavepacketSpec spec;
  spec.params = fig2(1, 0.0);
  spec.k0 = 1.0;
  spec.half_length = 300;

  auto bad = [&](auto&& tweak) {
    WavepacketSpec s = spec;
    tweak(s);
    return error_of([&] { run_wavepacket(s); });
  };
  CHECK(bad([](WavepacketSpec& s) { s.sigma = 5; }) == ErrorCode::InvalidRunSpec);
  CHECK(bad([](WavepacketSpec& s) { s.half_length = 100; }) == ErrorCode::InvalidRunSpec);
  CHECK(bad([](WavepacketSpec& s) { s.k0 = 0.1; }) == ErrorCode::InvalidRunSpec);
  CHECK(bad([](WavepacketSpec& s) { s.k0 = kPi; }) == ErrorCode::InvalidRunSpec);
  CHECK(bad([](WavepacketSpec& s) { s.t_final = 2000.0; }) == ErrorCode::BoundaryContamination);

  SUBCASE("csv record") {
    spec.record_every = 200;
    const WavepacketRun run = run_wavepacket(spec);
    std::ostringstream os;
    write_wavepacket_csv(run, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "time,norm,P_left,P_right,P_scatterer,|beta|^2,|zeta|^2");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == static_cast<int>(run.record.size()));
    CHECK(run.record.front().time == 0.0);
    CHECK(run.record.front().p_left == doctest::Approx(1.0).epsilon(1e-9));
  }
}
