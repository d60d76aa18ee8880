#include "wqed/dressed.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "wqed/error.hpp"

namespace wqed {

DressedBasis dressed_basis(const ModelParams& params, const ScatteringPoint& point) {
  params.validate();
  if (params.n < 1) {
    throw Error(ErrorCode::RequiresControlPhotons, "dressed doublet needs n >= 1");
  }
  if (!is_consistent(params, point)) {
    throw Error(ErrorCode::InvalidPoint, "scattering point does not match the model parameters");
  }
  const double db = point.delta_b;
  const double coupling = params.g_b * std::sqrt(static_cast<double>(params.n));
  const double s = std::hypot(db, 2.0 * coupling);
  if (s == 0.0) {
    throw Error(ErrorCode::DegenerateDressing, "g_b^2 n = 0 and delta_b = 0: mixing undefined");
  }

  // s - db and s + db without cancellation; their product is 4 g_b^2 n.
  const double four_g2n = 4.0 * coupling * coupling;
  const double s_minus = db > 0.0 ? four_g2n / (s + db) : s - db;
  const double s_plus = db < 0.0 ? four_g2n / (s - db) : s + db;

  DressedBasis b;
  const double base = params.omega_2 + static_cast<double>(params.n) * params.omega_b;
  b.omega_plus = base + (db + s) / 2.0;
  b.omega_minus = base + (db - s) / 2.0;
  b.A_plus = std::sqrt(s_minus / (2.0 * s));
  b.B_plus = std::sqrt(s_plus / (2.0 * s));
  b.A_minus = -std::sqrt(s_plus / (2.0 * s));
  b.B_minus = std::sqrt(s_minus / (2.0 * s));
  b.g_plus = params.g_a * b.A_plus;
  b.g_minus = params.g_a * b.A_minus;
  b.delta_plus = point.delta_a + (db + s) / 2.0;
  b.delta_minus = point.delta_a + (db - s) / 2.0;
  return b;
}

std::optional<double> effective_potential_dressed(const ModelParams& params,
                                                  const ScatteringPoint& point,
                                                  const DressedBasis& basis) {
  (void)point;
  params.validate();
  if (params.n < 1) {
    throw Error(ErrorCode::RequiresControlPhotons, "dressed doublet needs n >= 1");
  }
  if (std::abs(basis.delta_plus) < kPoleTolerance || std::abs(basis.delta_minus) < kPoleTolerance) {
    return std::nullopt;
  }
  return -(basis.g_plus * basis.g_plus / basis.delta_plus +
           basis.g_minus * basis.g_minus / basis.delta_minus);
}

ScatteringResult scattering_amplitudes_vtype(const ModelParams& params,
                                             const ScatteringPoint& point,
                                             const DressedBasis& basis) {
  params.validate();
  if (params.n < 1) {
    throw Error(ErrorCode::RequiresControlPhotons, "dressed doublet needs n >= 1");
  }
  if (!is_consistent(params, point)) {
    throw Error(ErrorCode::InvalidPoint, "scattering point does not match the model parameters");
  }
  const double gp2 = basis.g_plus * basis.g_plus;
  const double gm2 = basis.g_minus * basis.g_minus;
  const double num = gp2 * basis.delta_minus + gm2 * basis.delta_plus;
  const double prod = basis.delta_plus * basis.delta_minus;
  const double s = std::sin(point.k);
  const double g2 = params.g_a * params.g_a;
  const double num_scale =
      g2 * std::max({1.0, std::abs(basis.delta_plus), std::abs(basis.delta_minus)});

  if (std::abs(s) <= kBandEdgeTolerance) {
    if (std::abs(num) <= kLocusTolerance * num_scale) {
      throw Error(ErrorCode::DegenerateBandEdge,
                  "sin k = 0 and g_+^2 delta_- + g_-^2 delta_+ = 0");
    }
    return make_result(-1.0, 0.0, Branch::BandEdge);
  }

  const std::complex<double> hop(0.0, 2.0 * params.xi * prod * s);
  const std::complex<double> denom = hop + num;
  Branch branch = Branch::Generic;
  const double detuning_scale = std::max(1.0, basis.splitting());
  if (std::abs(basis.delta_plus) <= kLocusTolerance * detuning_scale ||
      std::abs(basis.delta_minus) <= kLocusTolerance * detuning_scale) {
    branch = Branch::FullReflection;
  } else if (std::abs(num) <= kLocusTolerance * num_scale) {
    branch = Branch::FullTransmission;
  }
  return make_result(-num / denom, hop / denom, branch);
}

ConditionReport condition_equivalence_check(const ModelParams& params,
                                            const ScatteringPoint& point, double tol) {
  const DressedBasis b = dressed_basis(params, point);
  const double gb2n = params.gb2n();
  const double da = point.delta_a;
  const double db = point.delta_b;
  const double gp2 = b.g_plus * b.g_plus;
  const double gm2 = b.g_minus * b.g_minus;
  const double g2 = params.g_a * params.g_a;

  ConditionReport rep;
  rep.reflection_bare = da * (da + db) - gb2n;
  rep.reflection_dressed = b.delta_plus * b.delta_minus;
  // Both forms are the same quadratic in delta_a, so one scale serves both.
  const double refl_scale = std::max({1.0, da * da, std::abs(da * db), gb2n, db * db});
  rep.reflection_bare_holds = std::abs(rep.reflection_bare) <= tol * refl_scale;
  rep.reflection_dressed_holds = std::abs(rep.reflection_dressed) <= tol * refl_scale;

  rep.transmission_bare = da + db;
  rep.transmission_dressed = gp2 * b.delta_minus + gm2 * b.delta_plus;
  const double trans_scale = std::max({1.0, std::abs(da), std::abs(db), b.splitting()});
  rep.transmission_bare_holds = std::abs(rep.transmission_bare) <= tol * trans_scale;
  rep.transmission_dressed_holds = std::abs(rep.transmission_dressed) <= tol * g2 * trans_scale;

  rep.same_sign_ratio = gm2 * b.delta_plus - gp2 * b.delta_minus;
  rep.same_sign_ratio_holds = std::abs(rep.same_sign_ratio) <= tol * g2 * trans_scale;
  return rep;
}

}  // namespace wqed
