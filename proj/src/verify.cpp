#include "wqed/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "wqed/dressed.hpp"
#include "wqed/error.hpp"
#include "wqed/oracle.hpp"
#include "wqed/scattering.hpp"
#include "wqed/sweep.hpp"

namespace wqed {

namespace {

constexpr double kPi = std::numbers::pi;

void record(SuiteResult& suite, double residual) {
  ++suite.checked;
  suite.max_residual = std::max(suite.max_residual, residual);
  if (!(residual < suite.tolerance)) ++suite.failed;
}

SuiteResult unitarity_suite(CaseSampler& sampler, int points) {
  SuiteResult suite{"unitarity |R+T-1|", 0, 0, 0.0, 1e-12};
  for (int i = 0; i < points; ++i) {
    const RandomCase c = sampler.any();
    const ScatteringResult res = scattering_amplitudes(c.params, make_point(c.params, c.k));
    record(suite, std::abs(res.R + res.T - 1.0));
  }
  return suite;
}

SuiteResult equivalence_suite(CaseSampler& sampler, int points) {
  SuiteResult suite{"bare vs dressed amplitudes", 0, 0, 0.0, 1e-10};
  for (int i = 0; i < points; ++i) {
    const RandomCase c = sampler.with_photons();
    const ScatteringPoint point = make_point(c.params, c.k);
    const ScatteringResult bare = scattering_amplitudes(c.params, point);
    const ScatteringResult vtype =
        scattering_amplitudes_vtype(c.params, point, dressed_basis(c.params, point));
    record(suite, std::max(std::abs(bare.r - vtype.r), std::abs(bare.t - vtype.t)));
  }
  return suite;
}

// Bare and dressed forms of each condition must agree on random points and on
// points constructed to sit on a locus. The residual tracked is the dressed
// residual at constructed points, relative to its scale.
SuiteResult condition_suite(CaseSampler& sampler, int points) {
  SuiteResult suite{"resonance-condition equivalence", 0, 0, 0.0, 1e-9};
  auto check = [&](const ModelParams& p, double k, bool on_reflection, bool on_transmission) {
    const ScatteringPoint point = make_point(p, k);
    const ConditionReport rep = condition_equivalence_check(p, point);
    bool ok = rep.reflection_equivalent() && rep.transmission_equivalent();
    double residual = 0.0;
    if (on_reflection) {
      ok = ok && rep.reflection_bare_holds;
      const double scale = std::max({1.0, point.delta_a * point.delta_a, p.gb2n(),
                                     point.delta_b * point.delta_b});
      residual = std::abs(rep.reflection_dressed) / scale;
    }
    if (on_transmission) {
      ok = ok && rep.transmission_bare_holds;
      const double scale = p.g_a * p.g_a * std::max({1.0, std::abs(point.delta_a),
                                                     std::abs(point.delta_b)});
      residual = std::abs(rep.transmission_dressed) / scale;
    }
    ++suite.checked;
    suite.max_residual = std::max(suite.max_residual, residual);
    if (!ok || !(residual < suite.tolerance)) ++suite.failed;
  };
  for (int i = 0; i < points; ++i) {
    const RandomCase c = sampler.with_photons();
    check(c.params, c.k, false, false);
    for (double k : full_reflection_momenta(c.params)) check(c.params, k, true, false);
    for (double k : momenta_at_energy(c.params, c.params.omega_2 + c.params.delta_b())) {
      check(c.params, k, false, true);
    }
  }
  return suite;
}

SuiteResult oracle_suite(CaseSampler& sampler, int points) {
  SuiteResult suite{"stationary oracle vs closed form", 0, 0, 0.0, 1e-10};
  for (int i = 0; i < points; ++i) {
    const RandomCase c = sampler.any();
    const ScatteringResult closed = scattering_amplitudes(c.params, make_point(c.params, c.k));
    const StationarySolution sol = solve_stationary(LatticeProblem{c.params, 25, false}, c.k);
    record(suite, std::max(std::abs(sol.r_fit - closed.r), std::abs(sol.t_fit - closed.t)));
  }
  return suite;
}

SuiteResult wavepacket_suite() {
  SuiteResult suite{"wavepacket |T_measured - |t(k0)|^2|", 0, 0, 0.0, 0.03};
  for (const WavepacketSpot& spot : wavepacket_spots()) {
    WavepacketSpec spec;
    spec.params = spot.params;
    spec.k0 = spot.k0;
    spec.sigma = 15.0;
    const WavepacketRun run = run_wavepacket(spec);
    const double expected = scattering_amplitudes(spot.params, make_point(spot.params, spot.k0)).T;
    double residual = std::abs(run.T_measured - expected);
    if (!(run.max_norm_drift < 1e-8)) residual = std::max(residual, 1.0);
    record(suite, residual);
  }
  return suite;
}

}  // namespace

double CaseSampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

double CaseSampler::momentum() {
  for (;;) {
    const double k = uniform(-kPi, kPi);
    if (std::abs(std::sin(k)) >= 0.05) return k;
  }
}

RandomCase CaseSampler::any() {
  RandomCase c;
  ModelParams& p = c.params;
  p.omega_a = uniform(-2.0, 2.0);
  p.xi = uniform(0.3, 3.0);
  // Keep omega_2 near the band so resonances are actually probed.
  p.omega_2 = p.omega_a + uniform(-2.5, 2.5) * p.xi;
  p.omega_b = uniform(0.5, 5.0);
  p.omega_3 = p.omega_2 + p.omega_b + uniform(-5.0, 5.0);
  p.g_a = uniform(0.3, 2.0);
  p.g_b = uniform(0.0, 3.0);
  p.n = std::uniform_int_distribution<int>(0, 40)(rng_);
  c.k = momentum();
  return c;
}

RandomCase CaseSampler::with_photons() {
  RandomCase c = any();
  c.params.g_b = uniform(0.2, 3.0);
  if (c.params.n == 0) c.params.n = 1;
  return c;
}

double fig3a_half_transmission_delta_b() {
  const SweepSpec spec = *preset("fig3a");
  auto transmission = [&](double delta_b) {
    const ModelParams p = params_at(spec, delta_b);
    return scattering_amplitudes(p, make_point(p, spec.fixed_k)).T;
  };
  // T = 1 at delta_b = -delta_a and T = 0 on the reflection locus; the sweep
  // brackets the crossing between them.
  const std::vector<SweepRow> rows = run_sweep(spec);
  double lo = -0.8;
  double hi = 0.45;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!rows[i - 1].result || !rows[i].result) continue;
    const double a = rows[i - 1].result->T - 0.5;
    const double b = rows[i].result->T - 0.5;
    if (a > 0.0 && b <= 0.0 && rows[i - 1].axis_value >= -0.8 && rows[i].axis_value <= 0.45) {
      lo = rows[i - 1].axis_value;
      hi = rows[i].axis_value;
      break;
    }
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (transmission(mid) > 0.5) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<WavepacketSpot> wavepacket_spots() {
  std::vector<WavepacketSpot> spots;
  spots.push_back({"full transmission (fig2a)", preset("fig2a")->base, 2.0 * kPi / 3.0});

  // A narrow reflection dip cannot be resolved by a sigma = 15 packet
  // (momentum spread 1/30); at the band centre with xi = 1 the dip is wide.
  ModelParams reflect;
  reflect.omega_a = 0.0;
  reflect.omega_b = 2.0;
  reflect.omega_2 = 0.0;
  reflect.omega_3 = 2.0;
  reflect.xi = 1.0;
  reflect.g_a = 1.0;
  reflect.g_b = 1.0;
  reflect.n = 0;
  spots.push_back({"full reflection (n = 0)", reflect, kPi / 2.0});

  const SweepSpec fig3a = *preset("fig3a");
  spots.push_back({"half transmission (fig3a)", params_at(fig3a, fig3a_half_transmission_delta_b()),
                   fig3a.fixed_k});
  return spots;
}

bool VerifyReport::all_passed() const {
  return !suites.empty() &&
         std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed(); });
}

VerifyReport run_verification(const VerifyOptions& options) {
  VerifyReport report;
  report.seed = options.seed;
  CaseSampler sampler(options.seed);
  report.suites.push_back(unitarity_suite(sampler, options.unitarity_points));
  report.suites.push_back(equivalence_suite(sampler, options.equivalence_points));
  report.suites.push_back(condition_suite(sampler, options.condition_points));
  report.suites.push_back(oracle_suite(sampler, options.oracle_points));
  if (options.with_wavepacket) report.suites.push_back(wavepacket_suite());
  return report;
}

void print_report(const VerifyReport& report, std::ostream& out) {
  char buf[256];
  out << "seed " << report.seed << '\n';
  for (const SuiteResult& s : report.suites) {
    std::snprintf(buf, sizeof buf, "%-4s %-40s checked=%ld failed=%ld max=%.12g tol=%.12g\n",
                  s.passed() ? "PASS" : "FAIL", s.name.c_str(), s.checked, s.failed,
                  s.max_residual, s.tolerance);
    out << buf;
  }
  out << (report.all_passed() ? "all suites passed\n" : "verification FAILED\n");
}

}  // namespace wqed
