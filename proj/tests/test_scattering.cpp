#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "wqed/error.hpp"
#include "wqed/oracle.hpp"
#include "wqed/scattering.hpp"
#include "wqed/verify.hpp"

using namespace wqed;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams fig2(int n, double delta_b) {
  ModelParams p;
  p.omega_b = 2.0;
  p.omega_2 = 2.0;
  p.omega_3 = 4.0 + delta_b;
  p.xi = 2.0;
  p.g_b = 1.0;
  p.n = n;
  return p;
}

// omega_2 and omega_3 placed so that delta_a and delta_b take the given
// values at momentum k (omega_a = 0, omega_b = 2).
ModelParams at_detunings(double delta_a, double delta_b, double k, double xi, int n,
                         double g_b = 1.0) {
  ModelParams p;
  p.xi = xi;
  p.omega_b = 2.0;
  p.omega_2 = delta_a - 2.0 * xi * std::cos(k);
  p.omega_3 = p.omega_2 + p.omega_b + delta_b;
  p.g_b = g_b;
  p.n = n;
  return p;
}

// Uncancelled closed form, written out independently of the library.
cplx generic_r(const ModelParams& p, const ScatteringPoint& pt) {
  const double sum = pt.delta_a + pt.delta_b;
  const double det = pt.delta_a * sum - p.gb2n();
  const cplx denom = cplx(0.0, 2.0 * p.xi * det * std::sin(pt.k)) + p.g_a * p.g_a * sum;
  return -p.g_a * p.g_a * sum / denom;
}

ErrorCode error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidParams;
}

}  // namespace

TEST_CASE("effective potential: two-level and one-photon limits") {
  SUBCASE("n = 0 gives g_a^2 / (E - omega_2)") {
    ModelParams p = fig2(0, 0.0);
    p.g_a = 1.3;
    const ScatteringPoint pt = make_point(p, 0.9);
    CHECK(*effective_potential(p, pt) == doctest::Approx(p.g_a * p.g_a / (pt.E - p.omega_2)));
  }
  SUBCASE("n = 1, delta_a = 0 and omega_32 = omega_b gives V = 0") {
    const ModelParams p = fig2(1, 0.0);
    const ScatteringPoint pt = make_point(p, 2.0 * kPi / 3.0);
    CHECK(std::abs(*effective_potential(p, pt)) < 1e-13);
  }
  SUBCASE("n = 1, delta_a = 0 gives -g_a^2 (E - omega_3) / g_b^2") {
    ModelParams p = fig2(1, 0.7);
    p.g_b = 1.4;
    const ScatteringPoint pt = make_point(p, 2.0 * kPi / 3.0);
    const double expected = -(pt.E - p.omega_3) / (p.g_b * p.g_b);
    CHECK(*effective_potential(p, pt) == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("pole marker on a dressed resonance") {
    const ModelParams p = fig2(1, 0.0);
    // delta_a = 1 puts the photon on delta_- = 0 for delta_b = 0, g_b^2 n = 1.
    const double k = *invert_dispersion(p, p.omega_2 - 1.0);
    CHECK_FALSE(effective_potential(p, make_point(p, k)).has_value());
  }
}

TEST_CASE("amplitudes: paper limits") {
  SUBCASE("n = 0 on resonance reflects completely") {
    const ModelParams p = fig2(0, 0.0);
    const ScatteringResult res = scattering_amplitudes(p, make_point(p, 2.0 * kPi / 3.0));
    CHECK(res.branch == Branch::TwoLevelN0);
    CHECK(std::abs(res.r + 1.0) < 1e-14);
    CHECK(std::abs(res.t) < 1e-14);
    CHECK(res.R == 1.0);
  }
  SUBCASE("n = 1 with delta_a + delta_b = 0 transmits completely") {
    const ModelParams p = at_detunings(0.6, -0.6, 1.1, 1.0, 1);
    const ScatteringResult res = scattering_amplitudes(p, make_point(p, 1.1));
    CHECK(res.branch == Branch::FullTransmission);
    CHECK(std::abs(res.r) < 1e-14);
    CHECK(std::abs(res.t) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("delta_a (delta_a + delta_b) = g_b^2 n reflects completely") {
    const ModelParams p = at_detunings(1.0, 2.0, 0.8, 1.5, 3);
    const ScatteringResult res = scattering_amplitudes(p, make_point(p, 0.8));
    CHECK(res.branch == Branch::FullReflection);
    CHECK(std::abs(res.t) < 1e-13);
    CHECK(std::abs(res.r + 1.0) < 1e-13);
  }
  SUBCASE("sin k = 0 is the band-edge limit") {
    const ModelParams p = fig2(1, 0.5);
    for (double k : {0.0, kPi}) {
      const ScatteringResult res = scattering_amplitudes(p, make_point(p, k));
      CHECK(res.branch == Branch::BandEdge);
      CHECK(res.r == cplx(-1.0, 0.0));
      CHECK(res.t == cplx(0.0, 0.0));
    }
  }
  SUBCASE("fig3c parameters at g_b^2 n = 3 reflect completely, confirmed on the lattice") {
    const ModelParams p = at_detunings(1.0, 2.0, kPi / 6.0, 2.0, 3);
    const ScatteringResult res = scattering_amplitudes(p, make_point(p, kPi / 6.0));
    CHECK(std::abs(res.R - 1.0) < 1e-12);
    const StationarySolution sol = solve_stationary(LatticeProblem{p, 25, false}, kPi / 6.0);
    CHECK(std::norm(sol.r_fit) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("exact zeros when the conditions hold exactly") {
  // k = pi/2 with omega_a = 0 makes delta_a and delta_b exactly representable.
  ModelParams p;
  p.xi = 0.5;
  p.omega_2 = 1.0;
  p.omega_b = 0.5;
  p.omega_3 = 2.5;
  p.g_b = 1.0;
  p.n = 2;
  const ScatteringPoint pt = make_point(p, kPi / 2);
  REQUIRE(pt.delta_a == 1.0);
  REQUIRE(pt.delta_b == 1.0);
  const ScatteringResult refl = scattering_amplitudes(p, pt);
  CHECK(refl.t == cplx(0.0, 0.0));
  CHECK(refl.r == cplx(-1.0, 0.0));

  ModelParams q = p;
  q.omega_b = 0.0;
  q.omega_2 = pt.Omega_k;
  q.omega_3 = q.omega_2;
  const ScatteringPoint qt = make_point(q, kPi / 2);
  REQUIRE(qt.delta_a + qt.delta_b == 0.0);
  const ScatteringResult trans = scattering_amplitudes(q, qt);
  CHECK(trans.r == cplx(0.0, 0.0));
  CHECK(trans.t == cplx(1.0, 0.0));
}

TEST_CASE("degenerate band edge and inconsistent points are errors") {
  ModelParams p = fig2(1, 0.0);
  // k = 0: Omega = -4, delta_a = 6; delta_b = -6 makes the remaining denominator vanish.
  p.omega_3 = p.omega_2 + p.omega_b - 6.0;
  CHECK(error_of([&] { scattering_amplitudes(p, make_point(p, 0.0)); }) ==
        ErrorCode::DegenerateBandEdge);

  ScatteringPoint bad = make_point(fig2(1, 0.0), 1.0);
  bad.delta_a += 0.1;
  CHECK(error_of([&] { scattering_amplitudes(fig2(1, 0.0), bad); }) == ErrorCode::InvalidPoint);
  CHECK(error_of([&] { effective_potential(fig2(1, 0.0), bad); }) == ErrorCode::InvalidPoint);
}

TEST_CASE("unitarity over random parameters") {
  CaseSampler sampler(99);
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const RandomCase c = sampler.any();
    const ScatteringResult res = scattering_amplitudes(c.params, make_point(c.params, c.k));
    CHECK(res.R == std::norm(res.r));
    CHECK(res.T == std::norm(res.t));
    worst = std::max(worst, std::abs(res.R + res.T - 1.0));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("n = 0: uncancelled and cancelled forms agree away from delta_a + delta_b = 0") {
  CaseSampler sampler(7);
  for (int i = 0; i < 2000; ++i) {
    RandomCase c = sampler.any();
    c.params.n = 0;
    const ScatteringPoint pt = make_point(c.params, c.k);
    if (std::abs(pt.delta_a + pt.delta_b) < 1e-3) continue;
    const ScatteringResult res = scattering_amplitudes(c.params, pt);
    CHECK(res.branch == Branch::TwoLevelN0);
    CHECK(std::abs(res.r - generic_r(c.params, pt)) < 1e-13);
  }
}

TEST_CASE("symmetry: r(-k) = conj r(k) and t conj(r) is imaginary") {
  CaseSampler sampler(13);
  for (int i = 0; i < 2000; ++i) {
    const RandomCase c = sampler.any();
    const ScatteringResult fwd = scattering_amplitudes(c.params, make_point(c.params, c.k));
    const ScatteringResult bwd = scattering_amplitudes(c.params, make_point(c.params, -c.k));
    CHECK(std::abs(bwd.r - std::conj(fwd.r)) < 1e-13);
    CHECK(std::abs(bwd.t - std::conj(fwd.t)) < 1e-13);
    CHECK(std::abs((fwd.t * std::conj(fwd.r)).real()) < 1e-13);
    CHECK(std::abs(fwd.t - (1.0 + fwd.r)) < 1e-13);
  }
}

TEST_CASE("large g_b^2 n decouples the emitter") {
  // Grid with moderate delta_a + delta_b and |xi sin k| >= 0.3.
  int checked = 0;
  for (double xi : {0.5, 1.0, 2.0, 3.0}) {
    for (double k : {0.7, 1.2, 1.9, 2.4, -1.0}) {
      if (std::abs(xi * std::sin(k)) < 0.3) continue;
      for (double da : {-3.0, -1.0, 0.5, 2.0}) {
        for (double sum : {-1.5, -0.4, 0.2, 1.0}) {
          const double threshold =
              100.0 * std::max(std::abs(xi * std::sin(k)), 1.0 / std::abs(sum));
          for (double scale : {1.0, 3.0, 10.0}) {
            const double g2n = threshold * scale;
            ModelParams p = at_detunings(da, sum - da, k, xi, 1, std::sqrt(g2n));
            const ScatteringResult res = scattering_amplitudes(p, make_point(p, k));
            CHECK(res.T > 0.99);
            ++checked;
          }
        }
      }
    }
  }
  CHECK(checked > 100);

  // Monotone approach to 1 along g_b^2 n at a fixed generic point.
  double previous = 0.0;
  for (double g2n = 50.0; g2n < 1e6; g2n *= 2.0) {
    ModelParams p = at_detunings(1.0, 2.0, kPi / 6.0, 2.0, 1, std::sqrt(g2n));
    const double T = scattering_amplitudes(p, make_point(p, kPi / 6.0)).T;
    CHECK(T > previous);
    previous = T;
  }
  CHECK(previous > 1.0 - 1e-8);
}

TEST_CASE("branch tags are metadata: values are continuous across boundaries") {
  const double k = 1.1;
  for (double offset : {0.0, 1e-13, 1e-11}) {
    const ModelParams p = at_detunings(0.6, -0.6 + offset, k, 1.0, 1);
    const ScatteringResult res = scattering_amplitudes(p, make_point(p, k));
    CHECK(std::abs(res.r) < 1e-10);
    if (offset <= 1e-13) CHECK(res.branch == Branch::FullTransmission);
    else CHECK(res.branch == Branch::Generic);
  }
  for (double g2n : {3.0, 3.0 + 1e-13, 3.0 + 1e-11}) {
    const ModelParams p = at_detunings(1.0, 2.0, k, 1.0, 1, std::sqrt(g2n));
    const ScatteringResult res = scattering_amplitudes(p, make_point(p, k));
    CHECK(std::abs(res.r + 1.0) < 1e-10);
    CHECK(std::abs(res.t) < 1e-10);
  }
  // Just inside the band-edge tolerance vs just outside it.
  const ModelParams p = fig2(1, 0.5);
  const ScatteringResult edge = scattering_amplitudes(p, make_point(p, 5e-13));
  const ScatteringResult near = scattering_amplitudes(p, make_point(p, 2e-12));
  CHECK(edge.branch == Branch::BandEdge);
  CHECK(near.branch == Branch::Generic);
  CHECK(std::abs(edge.r - near.r) < 1e-10);
  CHECK(std::abs(edge.t - near.t) < 1e-10);
}

TEST_CASE("full transmission locus") {
  SUBCASE("fig2a parameters: k = +-2 pi / 3") {
    const auto ks = full_transmission_momenta(fig2(1, 0.0));
    REQUIRE(ks.size() == 2);
    CHECK(ks[0] == doctest::Approx(-2.0 * kPi / 3.0).epsilon(1e-14));
    CHECK(ks[1] == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-14));
    for (double k : ks) CHECK(scattering_amplitudes(fig2(1, 0.0), make_point(fig2(1, 0.0), k)).T ==
                              doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("constructed point satisfies the predicate") {
    const ModelParams p = at_detunings(0.3, -0.3, kPi / 4, 1.0, 2);
    CHECK(is_full_transmission(p, make_point(p, kPi / 4)));
    CHECK_FALSE(is_full_transmission(p, make_point(p, kPi / 3)));
  }
  SUBCASE("out-of-band requirement") {
    ModelParams p;
    p.omega_2 = 10.0;
    p.omega_3 = 10.0 + p.omega_b;
    p.xi = 1.0;
    p.g_b = 1.0;
    p.n = 1;
    CHECK(error_of([&] { full_transmission_momenta(p); }) == ErrorCode::NoInBandSolution);
  }
  SUBCASE("needs control photons") {
    CHECK(error_of([&] { full_transmission_momenta(fig2(0, 0.0)); }) ==
          ErrorCode::RequiresControlPhotons);
  }
}

TEST_CASE("full reflection locus") {
  SUBCASE("n = 0 reduces to delta_a = 0") {
    const ModelParams p = fig2(0, 0.0);
    const auto ks = full_reflection_momenta(p);
    REQUIRE(ks.size() == 2);
    for (double k : ks) {
      const ScatteringPoint pt = make_point(p, k);
      CHECK(std::abs(pt.delta_a) < 1e-14);
      CHECK(is_full_reflection(p, pt));
    }
  }
  SUBCASE("delta_a = 1, delta_b = 2 needs g_b^2 n = 3") {
    const ModelParams p = at_detunings(1.0, 2.0, kPi / 6, 2.0, 1);
    CHECK(*full_reflection_coupling(make_point(p, kPi / 6)) == doctest::Approx(3.0));
    const ModelParams q = at_detunings(1.0, 2.0, kPi / 6, 2.0, 3);
    CHECK(is_full_reflection(q, make_point(q, kPi / 6)));
  }
  SUBCASE("delta_a = 0 with photons is never on the locus") {
    for (double db : {-3.0, -0.5, 0.0, 0.5, 4.0}) {
      const ModelParams p = at_detunings(0.0, db, 1.0, 1.0, 2);
      CHECK_FALSE(is_full_reflection(p, make_point(p, 1.0)));
    }
  }
  SUBCASE("solved momenta reflect completely") {
    CaseSampler sampler(21);
    int found = 0;
    for (int i = 0; i < 300; ++i) {
      const RandomCase c = sampler.with_photons();
      for (double k : full_reflection_momenta(c.params)) {
        if (std::abs(std::sin(k)) < 1e-3) continue;
        const ScatteringResult res = scattering_amplitudes(c.params, make_point(c.params, k));
        CHECK(res.R == doctest::Approx(1.0).epsilon(1e-9));
        ++found;
      }
    }
    CHECK(found > 50);
  }
  CHECK_FALSE(full_reflection_coupling(make_point(at_detunings(1.0, -2.0, 1.0, 1.0, 1), 1.0)));
}
