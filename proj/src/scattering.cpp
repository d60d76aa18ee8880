#include "wqed/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "wqed/error.hpp"

namespace wqed {

namespace {

using cplx = std::complex<double>;

void check_inputs(const ModelParams& params, const ScatteringPoint& point) {
  params.validate();
  if (!is_consistent(params, point)) {
    throw Error(ErrorCode::InvalidPoint, "scattering point does not match the model parameters");
  }
}

bool near_zero(double value, double scale, double tol) {
  return std::abs(value) <= tol * std::max(1.0, scale);
}

}  // namespace

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::Generic: return "Generic";
    case Branch::TwoLevelN0: return "TwoLevelN0";
    case Branch::BandEdge: return "BandEdge";
    case Branch::FullTransmission: return "FullTransmission";
    case Branch::FullReflection: return "FullReflection";
  }
  return "Unknown";
}

ScatteringResult make_result(cplx r, cplx t, Branch branch) {
  return ScatteringResult{r, t, std::norm(r), std::norm(t), branch};
}

std::optional<double> effective_potential(const ModelParams& params, const ScatteringPoint& point) {
  check_inputs(params, point);
  const double n = static_cast<double>(params.n);
  const double to_lower = point.E - (params.omega_2 + n * params.omega_b);
  const double to_upper = point.E - (params.omega_3 + (n - 1.0) * params.omega_b);
  const double g2 = params.g_a * params.g_a;
  if (params.gb2n() == 0.0) {
    // |3> is inert; V = g_a^2 / (E - omega_2 - n omega_b).
    if (std::abs(to_lower) < kPoleTolerance) return std::nullopt;
    return g2 / to_lower;
  }
  const double denom = to_lower * to_upper - params.gb2n();
  if (std::abs(denom) < kPoleTolerance) return std::nullopt;
  return g2 * to_upper / denom;
}

ScatteringResult scattering_amplitudes(const ModelParams& params, const ScatteringPoint& point) {
  check_inputs(params, point);
  const double g2 = params.g_a * params.g_a;
  const double s = std::sin(point.k);
  const bool band_edge = std::abs(s) <= kBandEdgeTolerance;

  if (params.gb2n() == 0.0) {
    if (band_edge) return make_result(-1.0, 0.0, Branch::BandEdge);
    const cplx hop(0.0, 2.0 * params.xi * point.delta_a * s);
    const cplx denom = hop + g2;
    return make_result(-g2 / denom, hop / denom, Branch::TwoLevelN0);
  }

  const double sum = point.delta_a + point.delta_b;
  const double det = point.delta_a * sum - params.gb2n();
  if (band_edge) {
    if (near_zero(g2 * sum, g2 * (std::abs(point.delta_a) + std::abs(point.delta_b)),
                  kLocusTolerance)) {
      throw Error(ErrorCode::DegenerateBandEdge,
                  "sin k = 0 and delta_a + delta_b = 0: zero group velocity at a transmission zero");
    }
    return make_result(-1.0, 0.0, Branch::BandEdge);
  }

  const cplx hop(0.0, 2.0 * params.xi * det * s);
  const cplx denom = hop + g2 * sum;
  Branch branch = Branch::Generic;
  if (near_zero(sum, std::abs(point.delta_a) + std::abs(point.delta_b), kLocusTolerance)) {
    branch = Branch::FullTransmission;
  } else if (near_zero(det, point.delta_a * point.delta_a + params.gb2n(), kLocusTolerance)) {
    branch = Branch::FullReflection;
  }
  return make_result(-g2 * sum / denom, hop / denom, branch);
}

double transmission_residual(const ScatteringPoint& point) {
  return point.delta_a + point.delta_b;
}

double reflection_residual(const ModelParams& params, const ScatteringPoint& point) {
  if (params.gb2n() == 0.0) return point.delta_a;
  return point.delta_a * (point.delta_a + point.delta_b) - params.gb2n();
}

bool is_full_transmission(const ModelParams& params, const ScatteringPoint& point, double tol) {
  params.validate();
  if (params.n < 1) {
    throw Error(ErrorCode::RequiresControlPhotons, "full transmission needs n >= 1");
  }
  return near_zero(transmission_residual(point),
                   std::abs(point.delta_a) + std::abs(point.delta_b), tol);
}

std::vector<double> full_transmission_momenta(const ModelParams& params) {
  params.validate();
  if (params.n < 1) {
    throw Error(ErrorCode::RequiresControlPhotons, "full transmission needs n >= 1");
  }
  // delta_a = -delta_b  <=>  Omega_k = omega_2 + delta_b
  auto ks = momenta_at_energy(params, params.omega_2 + params.delta_b());
  if (ks.empty()) {
    throw Error(ErrorCode::NoInBandSolution,
                "required band energy omega_2 + delta_b lies outside [omega_a - 2 xi, omega_a + 2 xi]");
  }
  return ks;
}

bool is_full_reflection(const ModelParams& params, const ScatteringPoint& point, double tol) {
  params.validate();
  const double scale = params.gb2n() == 0.0
                           ? std::abs(point.delta_a)
                           : point.delta_a * point.delta_a + params.gb2n();
  return near_zero(reflection_residual(params, point), scale, tol);
}

std::optional<double> full_reflection_coupling(const ScatteringPoint& point) {
  const double needed = point.delta_a * (point.delta_a + point.delta_b);
  if (needed < 0.0) return std::nullopt;
  return needed;
}

std::vector<double> full_reflection_momenta(const ModelParams& params) {
  params.validate();
  std::vector<double> detunings;
  if (params.gb2n() == 0.0) {
    detunings.push_back(0.0);
  } else {
    const double db = params.delta_b();
    const double root = std::sqrt(db * db + 4.0 * params.gb2n());
    detunings.push_back((-db + root) / 2.0);
    detunings.push_back((-db - root) / 2.0);
  }
  std::vector<double> ks;
  for (double da : detunings) {
    for (double k : momenta_at_energy(params, params.omega_2 - da)) ks.push_back(k);
  }
  std::sort(ks.begin(), ks.end());
  return ks;
}

}  // namespace wqed
