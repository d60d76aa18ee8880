#include "wqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"
#include "wqed/error.hpp"

namespace wqed {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::DegenerateBandEdge: return "DegenerateBandEdge";
    case ErrorCode::PoleAtThisEnergy: return "PoleAtThisEnergy";
    case ErrorCode::RequiresControlPhotons: return "RequiresControlPhotons";
    case ErrorCode::DegenerateDressing: return "DegenerateDressing";
    case ErrorCode::NoInBandSolution: return "NoInBandSolution";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::BandEdge: return "BandEdge";
    case ErrorCode::BoundaryContamination: return "BoundaryContamination";
    case ErrorCode::InvalidRunSpec: return "InvalidRunSpec";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

void ModelParams::validate() const {
  for (double v : {omega_a, omega_b, omega_2, omega_3, xi, g_a, g_b}) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidParams, "all parameters must be finite");
    }
  }
  if (!(g_a > 0.0)) throw Error(ErrorCode::InvalidParams, "g_a must be > 0");
  if (!(g_b >= 0.0)) throw Error(ErrorCode::InvalidParams, "g_b must be >= 0");
  if (!(xi > 0.0)) throw Error(ErrorCode::InvalidParams, "xi must be > 0");
  if (n < 0) throw Error(ErrorCode::InvalidParams, "n must be >= 0");
}

std::string to_json(const ModelParams& p) {
  nlohmann::ordered_json j;
  j["omega_a"] = p.omega_a;
  j["omega_b"] = p.omega_b;
  j["omega_2"] = p.omega_2;
  j["omega_3"] = p.omega_3;
  j["xi"] = p.xi;
  j["g_a"] = p.g_a;
  j["g_b"] = p.g_b;
  j["n"] = p.n;
  return j.dump();
}

ModelParams params_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidParams, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::InvalidParams, "expected a JSON object");

  ModelParams p;
  for (const auto& [key, value] : j.items()) {
    if (key == "n") {
      if (!value.is_number_integer()) {
        throw Error(ErrorCode::InvalidParams, "n must be an integer");
      }
      const auto raw = value.get<long long>();
      if (raw < 0 || raw > std::numeric_limits<int>::max()) {
        throw Error(ErrorCode::InvalidParams, "n out of range");
      }
      p.n = static_cast<int>(raw);
      continue;
    }
    double* field = nullptr;
    if (key == "omega_a") field = &p.omega_a;
    else if (key == "omega_b") field = &p.omega_b;
    else if (key == "omega_2") field = &p.omega_2;
    else if (key == "omega_3") field = &p.omega_3;
    else if (key == "xi") field = &p.xi;
    else if (key == "g_a") field = &p.g_a;
    else if (key == "g_b") field = &p.g_b;
    if (field == nullptr) throw Error(ErrorCode::InvalidParams, "unknown key '" + key + "'");
    if (!value.is_number()) throw Error(ErrorCode::InvalidParams, key + " must be a number");
    *field = value.get<double>();
  }
  p.validate();
  return p;
}

double reduce_momentum(double k) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(k, two_pi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

double dispersion(const ModelParams& params, double k) {
  return params.omega_a - 2.0 * params.xi * std::cos(k);
}

std::optional<double> invert_dispersion(const ModelParams& params, double omega) {
  const double c = (params.omega_a - omega) / (2.0 * params.xi);
  if (!(c >= -1.0 && c <= 1.0)) return std::nullopt;
  return std::acos(c);
}

std::vector<double> momenta_at_energy(const ModelParams& params, double omega) {
  const auto k = invert_dispersion(params, omega);
  if (!k) return {};
  if (*k == 0.0 || *k == std::numbers::pi) return {*k};
  return {-*k, *k};
}

ScatteringPoint make_point(const ModelParams& params, double k) {
  if (!std::isfinite(k)) throw Error(ErrorCode::InvalidPoint, "k must be finite");
  ScatteringPoint p;
  p.k = reduce_momentum(k);
  p.Omega_k = dispersion(params, p.k);
  p.E = static_cast<double>(params.n) * params.omega_b + p.Omega_k;
  p.delta_a = params.omega_2 - p.Omega_k;
  p.delta_b = params.delta_b();
  return p;
}

bool is_consistent(const ModelParams& params, const ScatteringPoint& point) {
  if (!std::isfinite(point.k) || point.k <= -std::numbers::pi || point.k > std::numbers::pi) {
    return false;
  }
  const ScatteringPoint ref = make_point(params, point.k);
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  };
  return close(ref.Omega_k, point.Omega_k) && close(ref.E, point.E) &&
         close(ref.delta_a, point.delta_a) && close(ref.delta_b, point.delta_b);
}

RwaReport rwa_validity(const ModelParams& params) {
  RwaReport report;
  const double coupling = params.g_b * std::sqrt(static_cast<double>(params.n));
  if (coupling == 0.0) return report;
  const double lowest = std::min(params.omega_2, params.omega_3);
  report.ratio = lowest > 0.0 ? coupling / lowest : std::numeric_limits<double>::infinity();
  report.valid = report.ratio <= kRwaThreshold;
  return report;
}

}  // namespace wqed
